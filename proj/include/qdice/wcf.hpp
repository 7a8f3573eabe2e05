#pragma once

// Three-round weak imbalanced coin flipping between Alice and Bob.
//
//   1. Alice prepares sqrt(1-p-eta)|↑↓> + sqrt(p+eta)|↓↑> and sends qubit 2.
//   2. Bob applies U_eta to qubit 2 and a fresh |↓₃>, then measures qubits 2,3
//      against |↑₂↓₃> and announces the result.
//   3. If Bob won, Alice checks that qubit 1 is |↓>. Otherwise Alice hands
//      over qubit 1 and Bob tests all three qubits against |xi>.
//
// A failed verification aborts the run; an abort is a loss for the cheater.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qdice/qsim.hpp"
#include "qdice/random.hpp"

namespace qdice::wcf {

using qsim::Complex;
using qsim::StateVector;

/// Bob's honest winning probability p and the security parameter eta.
struct ProtocolParams {
  double p = 0.5;
  double eta = 0.0;

  /// Throws DomainError unless 0 <= p <= 1 and 0 <= eta <= 1 - p.
  void validate() const;
  static ProtocolParams make(double p, double eta);
};

struct Honest {};

/// Alice sends sqrt(1-delta)|↑↓> + sqrt(delta)|↓↑>.
struct AliceDelta {
  double delta = 0.0;
};

/// Alice sends sum_ij alpha_ij |ij> ⊗ |Phi_ij>. Index order of `alpha` and
/// `ancilla` is ↑↑, ↑↓, ↓↑, ↓↓. An empty `ancilla` means no ancilla register.
struct AliceGeneral {
  std::array<Complex, 4> alpha{};
  std::vector<std::vector<Complex>> ancilla;

  int ancilla_dim() const { return ancilla.empty() ? 1 : static_cast<int>(ancilla.front().size()); }
};

/// Bob skips his measurement and always announces that he won.
struct BobClaimWin {};

using CheatSpec = std::variant<Honest, AliceDelta, AliceGeneral, BobClaimWin>;

enum class Party { Alice, Bob };
enum class Winner { Alice, Bob, Abort };

enum class AbortReason {
  BobFailedQubitCheck,  // Alice found qubit 1 in |↑> after Bob claimed the win
  AliceFailedXiTest,    // Bob's |xi> test failed after he lost
};

enum class EventKind {
  StatePrepared,
  QubitTwoSent,
  UEtaApplied,
  BobMeasured,
  BobAnnounced,
  QubitOneSent,
  AliceVerified,
  BobVerified,
  Decided,
};

struct Event {
  EventKind kind;
  int round = 0;              // communication round, 0 for local actions
  double probability = 1.0;   // branch probability of the sampled result
  bool result = true;         // measurement / test / announcement outcome
};

struct Transcript {
  std::vector<Event> events;

  /// Number of distinct communication rounds that occurred.
  int rounds() const;
};

struct Outcome {
  Winner winner = Winner::Abort;
  std::optional<AbortReason> abort_reason;
  Transcript transcript;
};

/// Tally of many independent runs.
struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t alice_wins = 0;
  std::uint64_t bob_wins = 0;
  std::uint64_t aborts = 0;

  double frequency(std::uint64_t count) const { return static_cast<double>(count) / static_cast<double>(trials); }
  TrialStats& operator+=(const TrialStats& o);
  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

std::string_view to_string(Winner w);
std::string_view to_string(AbortReason r);
std::string_view to_string(EventKind k);

/// Alice's winning probability 1 - p when both parties follow the protocol.
double honest_win_prob(const ProtocolParams& params);

/// The two-qubit (plus ancilla) state Alice sends under `cheat`.
StateVector prepare_state(const ProtocolParams& params, const CheatSpec& cheat);

/// |xi> on three qubits. Requires p < 1.
StateVector xi_state(const ProtocolParams& params);

/// Probability that qubit 1 of `state` is found in |↓>.
double alice_verification(const StateVector& first_qubit_state);

/// Party that deviates under `cheat`, if any.
std::optional<Party> cheater(const CheatSpec& cheat);

/// Throws DomainError for a malformed spec or a spec that cannot run at these
/// parameters (Alice strategies need p < 1 so |xi> exists).
void validate(const ProtocolParams& params, const CheatSpec& cheat);

Outcome run_protocol(const ProtocolParams& params, const CheatSpec& cheat, Rng& rng);

/// Runs `trials` runs, trial i drawing from substream(seed, i). Results do
/// not depend on `threads`.
TrialStats run_trials(const ProtocolParams& params, const CheatSpec& cheat, std::uint64_t trials,
                      std::uint64_t seed, unsigned threads = 1);

}  // namespace qdice::wcf
