#include "qdice/wcf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "qdice/errors.hpp"

namespace qdice::wcf {
namespace {

using qsim::BasisPattern;
using qsim::PureTarget;
using qsim::RegisterShape;
using qsim::Spin;

constexpr double kCertain = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Bernoulli draw. Probabilities within kCertain of 0 or 1 are treated as
/// exact so rounding noise never produces a spurious abort.
bool draw(double probability, Rng& rng) {
  const double u = uniform01(rng);
  if (probability >= 1.0 - kCertain) return true;
  if (probability <= kCertain) return false;
  return u < probability;
}

StateVector two_qubit(double up_down, double down_up) {
  StateVector s(RegisterShape{2, 1});
  s.amplitude(qsim::BasisLabel::parse("ud")) = up_down;
  s.amplitude(qsim::BasisLabel::parse("du")) = down_up;
  return s;
}

const BasisPattern& bob_target() {
  static const BasisPattern pattern{{{1, Spin::Up}, {2, Spin::Down}}};
  return pattern;
}

}  // namespace

void ProtocolParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0 - p + 1e-12)) throw DomainError("eta must lie in [0, 1 - p]");
}

ProtocolParams ProtocolParams::make(double p, double eta) {
  ProtocolParams params{p, eta};
  params.validate();
  return params;
}

int Transcript::rounds() const {
  std::set<int> seen;
  for (const auto& e : events) {
    if (e.round > 0) seen.insert(e.round);
  }
  return static_cast<int>(seen.size());
}

TrialStats& TrialStats::operator+=(const TrialStats& o) {
  trials += o.trials;
  alice_wins += o.alice_wins;
  bob_wins += o.bob_wins;
  aborts += o.aborts;
  return *this;
}

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::Alice: return "alice";
    case Winner::Bob: return "bob";
    case Winner::Abort: return "abort";
  }
  return "?";
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::BobFailedQubitCheck: return "bob-failed-qubit-check";
    case AbortReason::AliceFailedXiTest: return "alice-failed-xi-test";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::StatePrepared: return "state-prepared";
    case EventKind::QubitTwoSent: return "qubit-2-sent";
    case EventKind::UEtaApplied: return "u-eta-applied";
    case EventKind::BobMeasured: return "bob-measured";
    case EventKind::BobAnnounced: return "bob-announced";
    case EventKind::QubitOneSent: return "qubit-1-sent";
    case EventKind::AliceVerified: return "alice-verified";
    case EventKind::BobVerified: return "bob-verified";
    case EventKind::Decided: return "decided";
  }
  return "?";
}

double honest_win_prob(const ProtocolParams& params) {
  params.validate();
  return 1.0 - params.p;
}

StateVector prepare_state(const ProtocolParams& params, const CheatSpec& cheat) {
  return std::visit(
      Overloaded{
          [&](const AliceDelta& c) { return two_qubit(std::sqrt(1.0 - c.delta), std::sqrt(c.delta)); },
          [&](const AliceGeneral& c) {
            const int dim = c.ancilla_dim();
            StateVector s(RegisterShape{2, dim});
            auto amps = s.amplitudes();
            for (std::size_t k = 0; k < 4; ++k) {
              const std::size_t q = 3 - k;  // uu, ud, du, dd -> basis index 3..0
              for (int a = 0; a < dim; ++a) {
                const Complex phi = c.ancilla.empty() ? Complex{1.0} : c.ancilla[k][static_cast<std::size_t>(a)];
                amps[q * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)] = c.alpha[k] * phi;
              }
            }
            return s;
          },
          [&](const auto&) {
            const double pe = std::clamp(params.p + params.eta, 0.0, 1.0);
            return two_qubit(std::sqrt(1.0 - pe), std::sqrt(pe));
          },
      },
      cheat);
}

StateVector xi_state(const ProtocolParams& params) {
  params.validate();
  if (params.p >= 1.0) throw DomainError("|xi> is undefined for p = 1");
  const double q = 1.0 - params.p;
  StateVector s(RegisterShape{3, 1});
  s.amplitude(qsim::BasisLabel::parse("udd")) = std::sqrt(std::max(0.0, (q - params.eta) / q));
  s.amplitude(qsim::BasisLabel::parse("ddu")) = std::sqrt(params.eta / q);
  return s;
}

double alice_verification(const StateVector& first_qubit_state) {
  return qsim::projective_test(first_qubit_state, BasisPattern{{{0, Spin::Down}}}).pass.probability;
}

std::optional<Party> cheater(const CheatSpec& cheat) {
  return std::visit(Overloaded{
                        [](const Honest&) -> std::optional<Party> { return std::nullopt; },
                        [](const BobClaimWin&) -> std::optional<Party> { return Party::Bob; },
                        [](const auto&) -> std::optional<Party> { return Party::Alice; },
                    },
                    cheat);
}

void validate(const ProtocolParams& params, const CheatSpec& cheat) {
  params.validate();
  if (params.p + params.eta <= 0.0) throw DegenerateParameterError("protocol undefined for p + eta = 0");
  if (const auto* d = std::get_if<AliceDelta>(&cheat)) {
    if (!(d->delta >= 0.0 && d->delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  }
  if (const auto* g = std::get_if<AliceGeneral>(&cheat)) {
    double n = 0.0;
    for (const auto& a : g->alpha) n += std::norm(a);
    if (std::abs(n - 1.0) > qsim::kNormTolerance) throw DomainError("alpha amplitudes must be normalized");
    if (!g->ancilla.empty()) {
      if (g->ancilla.size() != 4) throw DomainError("one ancilla state per basis term is required");
      const auto dim = g->ancilla.front().size();
      if (dim < 1 || dim > static_cast<std::size_t>(qsim::kMaxAncillaDim)) throw DomainError("ancilla dimension out of range");
      for (const auto& phi : g->ancilla) {
        if (phi.size() != dim) throw DomainError("ancilla states must share one dimension");
        double m = 0.0;
        for (const auto& a : phi) m += std::norm(a);
        if (std::abs(m - 1.0) > qsim::kNormTolerance) throw DomainError("ancilla states must be normalized");
      }
    }
  }
  if (cheater(cheat) == Party::Alice && params.p >= 1.0) {
    throw DomainError("Alice strategies need p < 1 so that Bob's |xi> test exists");
  }
}

Outcome run_protocol(const ProtocolParams& params, const CheatSpec& cheat, Rng& rng) {
  validate(params, cheat);
  Outcome out;
  auto& ev = out.transcript.events;

  const StateVector sent = prepare_state(params, cheat);
  ev.push_back({EventKind::StatePrepared, 0});
  ev.push_back({EventKind::QubitTwoSent, 1});
  const StateVector evolved = qsim::apply_u_eta(qsim::attach_down_ancilla_qubit(sent), params.p, params.eta);
  ev.push_back({EventKind::UEtaApplied, 0});

  auto alice_checks = [&](const StateVector& state) {
    const double pass_prob = alice_verification(state);
    const bool passed = draw(pass_prob, rng);
    ev.push_back({EventKind::AliceVerified, 3, passed ? pass_prob : 1.0 - pass_prob, passed});
    if (passed) {
      out.winner = Winner::Bob;
    } else {
      out.winner = Winner::Abort;
      out.abort_reason = AbortReason::BobFailedQubitCheck;
    }
  };

  if (std::holds_alternative<BobClaimWin>(cheat)) {
    ev.push_back({EventKind::BobAnnounced, 2, 1.0, true});
    alice_checks(evolved);
  } else {
    const qsim::TestResult measured = qsim::projective_test(evolved, bob_target());
    const bool bob_found = draw(measured.pass.probability, rng);
    const auto& branch = bob_found ? measured.pass : measured.fail;
    ev.push_back({EventKind::BobMeasured, 0, branch.probability, bob_found});
    ev.push_back({EventKind::BobAnnounced, 2, 1.0, bob_found});
    if (bob_found) {
      alice_checks(*branch.post_state);
    } else {
      ev.push_back({EventKind::QubitOneSent, 3});
      const qsim::TestResult xi_test = qsim::projective_test(*branch.post_state, PureTarget{xi_state(params)});
      const bool passed = draw(xi_test.pass.probability, rng);
      ev.push_back({EventKind::BobVerified, 0, passed ? xi_test.pass.probability : xi_test.fail.probability, passed});
      if (passed) {
        out.winner = Winner::Alice;
      } else {
        out.winner = Winner::Abort;
        out.abort_reason = AbortReason::AliceFailedXiTest;
      }
    }
  }
  ev.push_back({EventKind::Decided, 0, 1.0, out.winner != Winner::Abort});
  return out;
}

TrialStats run_trials(const ProtocolParams& params, const CheatSpec& cheat, std::uint64_t trials,
                      std::uint64_t seed, unsigned threads) {
  validate(params, cheat);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(1, trials))));
  std::vector<TrialStats> partial(threads);
  auto work = [&](unsigned t) {
    TrialStats& s = partial[t];
    for (std::uint64_t i = t; i < trials; i += threads) {
      Rng rng = substream(seed, i);
      const Outcome o = run_protocol(params, cheat, rng);
      ++s.trials;
      switch (o.winner) {
        case Winner::Alice: ++s.alice_wins; break;
        case Winner::Bob: ++s.bob_wins; break;
        case Winner::Abort: ++s.aborts; break;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  TrialStats total;
  for (const auto& s : partial) total += s;
  return total;
}

}  // namespace qdice::wcf
