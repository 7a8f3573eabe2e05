#pragma once

// Optimal cheating probabilities for the three-round protocol, in closed form
// and by brute-force search over explicit cheat states.

#include <array>
#include <cstdint>
#include <optional>

#include "qdice/random.hpp"
#include "qdice/wcf.hpp"

namespace qdice::adversary {

using wcf::ProtocolParams;

struct CheatValue {
  double value = 0.0;
  std::optional<double> delta;                    // maximizing delta, Alice only
  std::optional<wcf::AliceGeneral> strategy;      // best sampled state, brute force only
};

/// Squared-radical coefficients of Alice's success probability:
/// first = (1-p-eta)/(1-p), second = eta^2 / ((1-p)(p+eta)).
struct AliceCoefficients {
  double first = 0.0;
  double second = 0.0;
};

/// Requires p < 1 and p + eta > 0.
AliceCoefficients alice_coefficients(const ProtocolParams& params);

/// Probability that Alice, sending the delta state, wins and passes |xi>:
/// (sqrt(first * (1-delta)) + sqrt(second * delta))^2.
double alice_value_at_delta(const ProtocolParams& params, double delta);

/// max over delta. By Cauchy-Schwarz the maximum is first + second, reached
/// at delta* = second / (first + second).
CheatValue alice_optimal_value(const ProtocolParams& params);

/// p + eta, reached by always announcing a win.
CheatValue bob_optimal_value(const ProtocolParams& params);

/// Alice's win-and-pass probability for an explicit strategy, evaluated by
/// evolving the state: prepare, attach |↓₃>, apply U_eta, take the branch
/// where Bob misses |↑₂↓₃>, then test against |xi>.
double alice_success_probability(const ProtocolParams& params, const wcf::AliceGeneral& strategy);

/// Same quantity for the delta family, via the state evolution.
double alice_success_probability_delta(const ProtocolParams& params, double delta);

/// Random strategy: complex Gaussian amplitudes, and Haar-random ancilla states
/// when ancilla_dim > 1.
wcf::AliceGeneral random_strategy(Rng& rng, int ancilla_dim);

struct GridSpec {
  std::size_t delta_points = 10000;  // uniform delta grid on [0, 1], at least 1000
  bool refine = true;                // golden-section refinement around the best grid point
  std::size_t random_samples = 0;    // sampled general strategies
  std::uint64_t seed = 0;
};

/// Maximum of Alice's success probability found by (i) the delta grid and,
/// when random_samples > 0, (ii) random complex amplitude vectors and (iii)
/// random ancilla attachments for ancilla_dim = 2. Every candidate is scored
/// with alice_success_probability*, never with the closed form.
CheatValue brute_force_alice(const ProtocolParams& params, const GridSpec& grid, int ancilla_dim);

}  // namespace qdice::adversary
