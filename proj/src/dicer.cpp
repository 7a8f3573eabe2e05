#include "qdice/dicer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "qdice/adversary.hpp"
#include "qdice/errors.hpp"

namespace qdice::dicer {
namespace {

void check_party(int party, int n_parties) {
  if (n_parties < 2) throw DomainError("dice rolling needs at least two parties");
  if (party < 1 || party > n_parties) throw DomainError("party index must lie in 1..N");
}

/// Honest probability that party n survives the k-th of its stages (k = 0 is
/// the entry stage).
double honest_survival(int party, int k) {
  const int entry = std::max(party, 2);
  if (k == 0) return 1.0 / entry;
  const int m = entry + k;
  return static_cast<double>(m - 1) / m;
}

}  // namespace

double Stage::entrant_honest_win() const { return entrant_role == Role::Bob ? params.p : 1.0 - params.p; }

LadderSpec LadderSpec::standard(int n_parties, std::span<const double> etas) {
  if (n_parties < 2) throw DomainError("dice rolling needs at least two parties");
  if (etas.size() != static_cast<std::size_t>(n_parties - 1)) throw DomainError("one eta per stage is required");
  LadderSpec spec{n_parties, {}};
  for (int m = 2; m <= n_parties; ++m) {
    spec.stages.push_back({wcf::ProtocolParams::make(1.0 / m, etas[static_cast<std::size_t>(m - 2)]), Role::Bob});
  }
  return spec;
}

LadderSpec LadderSpec::three_sided(int case_number, double stage_two_eta) {
  const double balanced_eta = fairness::solve_balanced().eta_star;
  LadderSpec spec{3, {{wcf::ProtocolParams::make(0.5, balanced_eta), Role::Bob}}};
  if (case_number == 1) {
    spec.stages.push_back({wcf::ProtocolParams::make(1.0 / 3.0, stage_two_eta), Role::Bob});
  } else if (case_number == 2) {
    spec.stages.push_back({wcf::ProtocolParams::make(2.0 / 3.0, stage_two_eta), Role::Alice});
  } else {
    throw DomainError("three-sided case must be 1 or 2");
  }
  return spec;
}

void LadderSpec::validate() const {
  if (n_parties < 2) throw DomainError("dice rolling needs at least two parties");
  if (stages.size() != static_cast<std::size_t>(n_parties - 1)) throw DomainError("a ladder has N - 1 stages");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    stages[k].params.validate();
    const double m = static_cast<double>(k + 2);
    if (std::abs(stages[k].entrant_honest_win() - 1.0 / m) > 1e-12) {
      throw DomainError("stage " + std::to_string(k + 1) + " must give its entrant honest winning probability 1/" +
                        std::to_string(k + 2));
    }
  }
}

double DiceReport::frequency(int party) const {
  if (trials == 0) return 0.0;
  return static_cast<double>(wins.at(static_cast<std::size_t>(party - 1))) / static_cast<double>(trials);
}

std::vector<double> honest_dice_probs(int n_parties) {
  if (n_parties < 2) throw DomainError("dice rolling needs at least two parties");
  std::vector<double> probs;
  for (int n = 1; n <= n_parties; ++n) {
    // Reduced fraction num/den of 1/s * prod_{m > s} (m-1)/m.
    std::uint64_t num = 1;
    std::uint64_t den = static_cast<std::uint64_t>(std::max(n, 2));
    for (int m = std::max(n, 2) + 1; m <= n_parties; ++m) {
      num *= static_cast<std::uint64_t>(m - 1);
      den *= static_cast<std::uint64_t>(m);
      const auto g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
    probs.push_back(static_cast<double>(num) / static_cast<double>(den));
  }
  return probs;
}

int stages_for_party(int party, int n_parties) {
  check_party(party, n_parties);
  return n_parties - std::max(party, 2) + 1;
}

double worst_case_losing_prob(int party, int n_parties, std::span<const double> biases) {
  const int count = stages_for_party(party, n_parties);
  if (biases.size() != static_cast<std::size_t>(count)) {
    throw DomainError("party " + std::to_string(party) + " needs " + std::to_string(count) + " stage biases");
  }
  // Forward recursion over the stages. Writing each survival factor as
  // h_k (1 - r_k) with r_k = δ̄_k / h_k, the honest factors telescope to 1/N,
  // so P̄ = (N-1)/N + e/N where e accumulates e <- e + (1 - e) r_k. With zero
  // biases this returns (N-1)/N to the last bit.
  double excess = 0.0;
  for (int k = 0; k < count; ++k) {
    const double d = biases[static_cast<std::size_t>(k)];
    const double h = honest_survival(party, k);
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("stage biases must lie in [0, 1]");
    if (d > h) throw DomainError("stage " + std::to_string(k) + " losing probability exceeds 1");
    excess += (1.0 - excess) * (d / h);
  }
  const double n = n_parties;
  return (n - 1.0) / n + excess / n;
}

BoundCheck bias_bound_check(int party, int n_parties, std::span<const double> biases) {
  BoundCheck c;
  c.losing_prob = worst_case_losing_prob(party, n_parties, biases);
  c.epsilon = c.losing_prob - static_cast<double>(n_parties - 1) / n_parties;
  const double max_bias = biases.empty() ? 0.0 : *std::max_element(biases.begin(), biases.end());
  c.bound = n_parties * max_bias;
  c.holds = c.epsilon <= c.bound;
  return c;
}

std::vector<double> stage_biases(const LadderSpec& spec, int party) {
  spec.validate();
  check_party(party, spec.n_parties);
  std::vector<double> out;
  for (std::size_t k = static_cast<std::size_t>(std::max(party, 2) - 2); k < spec.stages.size(); ++k) {
    const Stage& st = spec.stages[k];
    const bool entering = static_cast<int>(k) + 2 == party;
    const Role role = entering ? st.entrant_role : (st.entrant_role == Role::Bob ? Role::Alice : Role::Bob);
    if (role == Role::Alice) {
      // Opponent cheats as Bob: P_B* = p + eta against honest p.
      out.push_back(adversary::bob_optimal_value(st.params).value - st.params.p);
    } else {
      out.push_back(adversary::alice_optimal_value(st.params).value - (1.0 - st.params.p));
    }
    out.back() = std::max(0.0, out.back());
  }
  return out;
}

DiceReport analyze_ladder(const LadderSpec& spec) {
  spec.validate();
  DiceReport r;
  r.n_parties = spec.n_parties;
  r.honest_probs = honest_dice_probs(spec.n_parties);
  for (int n = 1; n <= spec.n_parties; ++n) {
    const auto biases = stage_biases(spec, n);
    const BoundCheck c = bias_bound_check(n, spec.n_parties, biases);
    r.worst_case_losing.push_back(c.losing_prob);
    r.bias.push_back(c.epsilon);
    r.bound.push_back(c.bound);
    r.bound_satisfied = r.bound_satisfied && c.holds;
  }
  return r;
}

StageLosing three_sided_case1(double eta) {
  if (!(eta >= 0.0 && eta <= 2.0 / 3.0)) throw DomainError("case 1 needs 0 <= eta <= 2/3");
  const wcf::ProtocolParams params{1.0 / 3.0, eta};
  return {adversary::alice_optimal_value(params).value, adversary::bob_optimal_value(params).value};
}

StageLosing three_sided_case2(double eta, BracketReading reading) {
  if (!(eta >= 0.0 && eta <= 1.0 / 3.0)) throw DomainError("case 2 needs 0 <= eta <= 1/3");
  const wcf::ProtocolParams params{2.0 / 3.0, eta};
  double incumbent = adversary::alice_optimal_value(params).value;
  if (reading == BracketReading::Literal) incumbent = std::sqrt(incumbent);
  return {adversary::bob_optimal_value(params).value, incumbent};
}

ThreeSidedSolution optimize_three_sided(int case_number, BracketReading reading) {
  if (case_number != 1 && case_number != 2) throw DomainError("three-sided case must be 1 or 2");
  const double first_stage = fairness::solve_balanced().lhs;
  const auto losing = [&](double eta) {
    return case_number == 1 ? three_sided_case1(eta) : three_sided_case2(eta, reading);
  };
  const auto composed = [&](const StageLosing& s) {
    return first_stage + (1.0 - first_stage) * s.incumbent_loses;
  };
  const auto residual = [&](double eta) {
    const StageLosing s = losing(eta);
    return s.claire_loses - composed(s);
  };
  const fairness::Bracket bracket = case_number == 1 ? fairness::Bracket{0.10, 0.20} : fairness::Bracket{0.15, 0.25};
  const auto root = fairness::find_root(residual, bracket, 1e-14);

  ThreeSidedSolution sol;
  const StageLosing s = losing(root.x);
  sol.fairness = {root.x, s.claire_loses, composed(s), std::abs(s.claire_loses - composed(s))};
  sol.common_losing = s.claire_loses;
  sol.bias = sol.common_losing - 2.0 / 3.0;
  sol.report = analyze_ladder(LadderSpec::three_sided(case_number, root.x));
  return sol;
}

DiceReport simulate_dice(const LadderSpec& spec, const Coalition& coalition, std::uint64_t trials,
                         std::uint64_t seed, unsigned threads) {
  DiceReport report = analyze_ladder(spec);
  const int n_parties = spec.n_parties;
  std::optional<int> honest;
  if (!coalition.members.empty()) {
    for (int m : coalition.members) check_party(m, n_parties);
    if (coalition.members.size() != static_cast<std::size_t>(n_parties - 1)) {
      throw DomainError("a coalition must contain all parties but one");
    }
    for (int n = 1; n <= n_parties; ++n) {
      if (!coalition.members.contains(n)) honest = n;
    }
  }

  // Stage-optimal strategies, one per stage and cheater role.
  std::vector<double> delta_star;
  for (const Stage& st : spec.stages) {
    delta_star.push_back(st.params.p < 1.0 && st.params.p + st.params.eta > 0.0
                             ? adversary::alice_optimal_value(st.params).delta.value_or(0.0)
                             : 0.0);
  }

  struct Tally {
    std::vector<std::uint64_t> wins;
    std::uint64_t aborts = 0;
  };
  threads = std::max(1u, threads);
  std::vector<Tally> partial(threads, Tally{std::vector<std::uint64_t>(static_cast<std::size_t>(n_parties), 0), 0});

  auto work = [&](unsigned t) {
    Tally& tally = partial[t];
    for (std::uint64_t i = t; i < trials; i += threads) {
      Rng rng = substream(seed, i);
      int holder = 1;
      for (std::size_t k = 0; k < spec.stages.size(); ++k) {
        const Stage& st = spec.stages[k];
        const int entrant = static_cast<int>(k) + 2;
        const int alice_party = st.entrant_role == Role::Alice ? entrant : holder;
        const int bob_party = st.entrant_role == Role::Alice ? holder : entrant;
        wcf::CheatSpec cheat = wcf::Honest{};
        if (honest && (*honest == alice_party || *honest == bob_party)) {
          if (*honest == alice_party) {
            cheat = wcf::BobClaimWin{};
          } else {
            cheat = wcf::AliceDelta{delta_star[k]};
          }
        }
        const wcf::Outcome o = wcf::run_protocol(st.params, cheat, rng);
        switch (o.winner) {
          case wcf::Winner::Alice: holder = alice_party; break;
          case wcf::Winner::Bob: holder = bob_party; break;
          case wcf::Winner::Abort:
            ++tally.aborts;
            holder = honest.value_or(holder);
            break;
        }
      }
      ++tally.wins[static_cast<std::size_t>(holder - 1)];
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  report.trials = trials;
  report.honest_party = honest;
  report.wins.assign(static_cast<std::size_t>(n_parties), 0);
  for (const auto& tally : partial) {
    for (std::size_t n = 0; n < tally.wins.size(); ++n) report.wins[n] += tally.wins[n];
    report.aborts += tally.aborts;
  }
  return report;
}

}  // namespace qdice::dicer
