#pragma once

// N-sided dice rolling by a ladder of weak imbalanced coin flips: parties 1
// and 2 flip a balanced coin, and each later party m plays the current winner
// in a coin where m honestly wins with probability 1/m. Party n therefore
// enters at stage max(n, 2) - 1 and must survive every later entrant.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "qdice/fairness.hpp"
#include "qdice/wcf.hpp"

namespace qdice::dicer {

/// Role the entering party plays in its stage's coin flip.
enum class Role { Alice, Bob };

struct Stage {
  wcf::ProtocolParams params;
  Role entrant_role = Role::Bob;

  /// Honest winning probability of the entrant: p as Bob, 1 - p as Alice.
  double entrant_honest_win() const;
};

struct LadderSpec {
  int n_parties = 2;
  std::vector<Stage> stages;  // stages[k] admits party k + 2

  /// Entrant m plays Bob with p = 1/m; `etas` gives one eta per stage.
  static LadderSpec standard(int n_parties, std::span<const double> etas);
  /// Three-party ladder: balanced fair first stage, then either the
  /// incumbent prepares (case 1, Claire is Bob with p = 1/3) or Claire
  /// prepares (case 2, Claire is Alice with p = 2/3).
  static LadderSpec three_sided(int case_number, double stage_two_eta);

  /// N >= 2, N - 1 stages, entrant m's honest winning probability 1/m.
  void validate() const;
};

/// Parties that collude against the single remaining honest party. Empty
/// means everyone is honest.
struct Coalition {
  std::set<int> members;
};

struct DiceReport {
  int n_parties = 0;
  std::vector<double> honest_probs;        // 1/N each
  std::vector<double> worst_case_losing;   // P̄_n*, per party
  std::vector<double> bias;                // ε̄_n = P̄_n* - (N-1)/N
  std::vector<double> bound;               // N * max_k δ̄_k for party n
  bool bound_satisfied = true;

  // Monte Carlo section; trials == 0 when no simulation ran.
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> wins;         // per party
  std::optional<int> honest_party;
  std::uint64_t aborts = 0;                // stage aborts observed (counted against the cheater)

  double frequency(int party) const;       // 1-based party index
};

/// Exact 1/N per party, from the telescoping product of stage probabilities.
std::vector<double> honest_dice_probs(int n_parties);

/// Number of stages party n takes part in: N - max(n, 2) + 1.
int stages_for_party(int party, int n_parties);

/// Party n's maximal losing probability given its per-stage biases, entry
/// stage first. Stage losing probabilities are (s-1)/s + δ̄ at entry
/// (s = max(n, 2)) and 1/m + δ̄ when entrant m arrives. Throws DomainError
/// if any of them leaves [0, 1].
double worst_case_losing_prob(int party, int n_parties, std::span<const double> biases);

struct BoundCheck {
  double losing_prob = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;
  bool holds = true;
};

/// ε̄_n against N * max δ̄_k.
BoundCheck bias_bound_check(int party, int n_parties, std::span<const double> biases);

/// Per-stage biases faced by `party` when everyone else colludes, using the
/// stage-optimal cheat values: Bob-role cheats add eta, Alice-role cheats
/// add P_A* - (1 - p).
std::vector<double> stage_biases(const LadderSpec& spec, int party);

/// Analytic section of the report for a ladder.
DiceReport analyze_ladder(const LadderSpec& spec);

/// Maximal losing probabilities of the two second-stage parties.
struct StageLosing {
  double claire_loses = 0.0;
  double incumbent_loses = 0.0;
};

/// Case 1: the incumbent prepares as Alice with p = 1/3. Requires 0 <= eta <= 2/3.
StageLosing three_sided_case1(double eta);

/// How the max-over-delta bracket of the second implementation is read: the
/// squared form matching Alice's cheating probability, or the printed form
/// without the outer square.
enum class BracketReading { Squared, Literal };

/// Case 2: Claire prepares as Alice with p = 2/3. Requires 0 <= eta <= 1/3.
StageLosing three_sided_case2(double eta, BracketReading reading = BracketReading::Squared);

struct ThreeSidedSolution {
  /// lhs is Claire's maximal losing probability, rhs the composed maximal
  /// losing probability of Alice (equivalently Bob).
  fairness::FairnessSolution fairness;
  double common_losing = 0.0;  // P̄* shared by all three parties
  double bias = 0.0;           // P̄* - 2/3
  DiceReport report;
};

/// Solves the three-way fairness constraint by bisection on the default
/// bracket ([0.10, 0.20] for case 1, [0.15, 0.25] for case 2).
ThreeSidedSolution optimize_three_sided(int case_number, BracketReading reading = BracketReading::Squared);

/// Monte Carlo of the ladder. Stages between the honest party and a coalition
/// member use the stage-optimal strategy for the cheater's role (BobClaimWin,
/// or AliceDelta at delta*); all other stages run honestly. An aborted stage is
/// won by the honest party. Trial i draws from substream(seed, i).
DiceReport simulate_dice(const LadderSpec& spec, const Coalition& coalition, std::uint64_t trials,
                         std::uint64_t seed, unsigned threads = 1);

}  // namespace qdice::dicer
