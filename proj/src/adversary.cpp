#include "qdice/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "qdice/errors.hpp"
#include "qdice/solvers.hpp"

namespace qdice::adversary {
namespace {

using qsim::Complex;
using qsim::Spin;

void require_alice_params(const ProtocolParams& params) {
  params.validate();
  if (params.p >= 1.0) throw DomainError("Alice's cheating probability divides by 1 - p; p must be < 1");
  if (params.p + params.eta <= 0.0) throw DegenerateParameterError("p + eta must be positive");
}

std::vector<Complex> random_unit(Rng& rng, int dim) {
  std::normal_distribution<double> gauss;
  std::vector<Complex> v(static_cast<std::size_t>(dim));
  double n = 0.0;
  do {
    n = 0.0;
    for (auto& x : v) {
      x = {gauss(rng), gauss(rng)};
      n += std::norm(x);
    }
  } while (n < 1e-300);
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

}  // namespace

AliceCoefficients alice_coefficients(const ProtocolParams& params) {
  require_alice_params(params);
  const double q = 1.0 - params.p;
  return {std::max(0.0, (q - params.eta) / q), params.eta * params.eta / (q * (params.p + params.eta))};
}

double alice_value_at_delta(const ProtocolParams& params, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  const auto [a, b] = alice_coefficients(params);
  const double amp = std::sqrt(a * (1.0 - delta)) + std::sqrt(b * delta);
  return amp * amp;
}

CheatValue alice_optimal_value(const ProtocolParams& params) {
  const auto [a, b] = alice_coefficients(params);
  return {a + b, b / (a + b), std::nullopt};
}

CheatValue bob_optimal_value(const ProtocolParams& params) {
  params.validate();
  return {params.p + params.eta, std::nullopt, std::nullopt};
}

double alice_success_probability(const ProtocolParams& params, const wcf::AliceGeneral& strategy) {
  wcf::validate(params, strategy);
  const auto sent = wcf::prepare_state(params, strategy);
  const auto evolved = qsim::apply_u_eta(qsim::attach_down_ancilla_qubit(sent), params.p, params.eta);
  const auto bob = qsim::projective_test(evolved, qsim::BasisPattern{{{1, Spin::Up}, {2, Spin::Down}}});
  if (!bob.fail.post_state) return 0.0;
  const auto xi = qsim::projective_test(*bob.fail.post_state, qsim::PureTarget{wcf::xi_state(params)});
  return bob.fail.probability * xi.pass.probability;
}

double alice_success_probability_delta(const ProtocolParams& params, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  wcf::AliceGeneral s;
  s.alpha = {Complex{}, std::sqrt(1.0 - delta), std::sqrt(delta), Complex{}};
  return alice_success_probability(params, s);
}

wcf::AliceGeneral random_strategy(Rng& rng, int ancilla_dim) {
  if (ancilla_dim < 1 || ancilla_dim > qsim::kMaxAncillaDim) throw DomainError("ancilla dimension out of range");
  wcf::AliceGeneral s;
  const auto alpha = random_unit(rng, 4);
  std::copy(alpha.begin(), alpha.end(), s.alpha.begin());
  if (ancilla_dim > 1) {
    for (int k = 0; k < 4; ++k) s.ancilla.push_back(random_unit(rng, ancilla_dim));
  }
  return s;
}

CheatValue brute_force_alice(const ProtocolParams& params, const GridSpec& grid, int ancilla_dim) {
  if (grid.delta_points < 1000) throw DomainError("delta grid needs at least 1000 points");
  if (ancilla_dim != 1 && ancilla_dim != 2) throw DomainError("brute force supports ancilla dimension 1 or 2");
  require_alice_params(params);

  const auto n = grid.delta_points;
  const auto delta_at = [n](std::size_t i) { return static_cast<double>(i) / static_cast<double>(n - 1); };
  CheatValue best{-1.0, std::nullopt, std::nullopt};
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = alice_success_probability_delta(params, delta_at(i));
    if (v > best.value) {
      best = {v, delta_at(i), std::nullopt};
      best_i = i;
    }
  }
  if (grid.refine) {
    const fairness::Bracket cell{delta_at(best_i == 0 ? 0 : best_i - 1), delta_at(std::min(best_i + 1, n - 1))};
    const auto refined = fairness::maximize_unimodal(
        [&](double d) { return alice_success_probability_delta(params, std::clamp(d, 0.0, 1.0)); }, cell, 1e-13);
    if (refined.value > best.value) best = {refined.value, refined.x, std::nullopt};
  }

  if (grid.random_samples > 0) {
    for (std::size_t i = 0; i < grid.random_samples; ++i) {
      Rng rng = substream(grid.seed, i);
      const auto strategy = random_strategy(rng, ancilla_dim);
      const double v = alice_success_probability(params, strategy);
      if (v > best.value) best = {v, std::nullopt, strategy};
    }
  }
  return best;
}

}  // namespace qdice::adversary
