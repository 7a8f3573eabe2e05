#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qdice/adversary.hpp"
#include "qdice/errors.hpp"
#include "qdice/wcf.hpp"

using namespace qdice;
using namespace qdice::wcf;

namespace {
const double kBalancedEta = (std::sqrt(2.0) - 1.0) / 2.0;
}

TEST_CASE("ProtocolParams validation") {
  CHECK_NOTHROW(ProtocolParams::make(0.5, 0.5));
  CHECK_NOTHROW(ProtocolParams::make(1.0, 0.0));
  CHECK_THROWS_AS(ProtocolParams::make(0.5, 0.6), DomainError);
  CHECK_THROWS_AS(ProtocolParams::make(1.2, 0.0), DomainError);
  CHECK_THROWS_AS(ProtocolParams::make(0.5, -0.01), DomainError);
}

TEST_CASE("honest_win_prob") {
  CHECK(honest_win_prob({0.5, 0.2071}) == 0.5);
  CHECK(honest_win_prob({1.0 / 3.0, 0.1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(honest_win_prob({1.0, 0.0}) == 0.0);
}

TEST_CASE("alice_verification") {
  using qsim::BasisLabel;
  CHECK(alice_verification(qsim::StateVector::basis({1, 1}, BasisLabel::parse("d"))) == 1.0);
  CHECK(alice_verification(qsim::StateVector::basis({1, 1}, BasisLabel::parse("u"))) == 0.0);
  // Honest Bob-win branch: the sqrt(p) term of the evolved state has qubit 1 down.
  const ProtocolParams params{0.4, 0.3};
  const auto evolved = qsim::apply_u_eta(qsim::attach_down_ancilla_qubit(prepare_state(params, Honest{})), 0.4, 0.3);
  const auto r = qsim::projective_test(evolved, qsim::BasisPattern{{{1, qsim::Spin::Up}, {2, qsim::Spin::Down}}});
  REQUIRE(r.pass.post_state);
  CHECK(alice_verification(*r.pass.post_state) == doctest::Approx(1.0).epsilon(1e-12));
  // Without a Bob measurement, qubit 1 is down with probability p + eta.
  CHECK(alice_verification(evolved) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("run_protocol transcript shape") {
  Rng rng = substream(1, 0);
  for (int i = 0; i < 200; ++i) {
    for (const CheatSpec& cheat : {CheatSpec{Honest{}}, CheatSpec{BobClaimWin{}}, CheatSpec{AliceDelta{0.3}}}) {
      const Outcome o = run_protocol({0.5, kBalancedEta}, cheat, rng);
      CHECK(o.transcript.rounds() == 3);
      CHECK((o.winner == Winner::Abort) == o.abort_reason.has_value());
      CHECK(o.transcript.events.front().kind == EventKind::StatePrepared);
      CHECK(o.transcript.events.back().kind == EventKind::Decided);
      if (std::holds_alternative<BobClaimWin>(cheat)) {
        CHECK(o.winner != Winner::Alice);
        for (const auto& e : o.transcript.events) CHECK(e.kind != EventKind::BobMeasured);
      }
    }
  }
}

TEST_CASE("run_protocol errors") {
  Rng rng = substream(0, 0);
  CHECK_THROWS_AS(run_protocol({0.0, 0.0}, Honest{}, rng), DegenerateParameterError);
  CHECK_THROWS_AS(run_protocol({0.5, 0.1}, AliceDelta{1.5}, rng), DomainError);
  CHECK_THROWS_AS(run_protocol({1.0, 0.0}, AliceDelta{0.5}, rng), DomainError);
  AliceGeneral bad;
  bad.alpha = {1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(run_protocol({0.5, 0.1}, bad, rng), DomainError);
  AliceGeneral bad_ancilla;
  bad_ancilla.alpha = {0.0, 1.0, 0.0, 0.0};
  bad_ancilla.ancilla = {{1.0, 0.0}, {1.0, 0.0}, {1.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(run_protocol({0.5, 0.1}, bad_ancilla, rng), DomainError);
  // p = 1 is fine when Alice is honest: Bob always wins.
  const Outcome o = run_protocol({1.0, 0.0}, Honest{}, rng);
  CHECK(o.winner == Winner::Bob);
}

TEST_CASE("honest Monte Carlo converges to (1 - p, p) without aborts") {
  const std::uint64_t trials = 100000;
  for (const auto& [p, eta] : std::vector<std::pair<double, double>>{
           {0.5, 0.2071}, {1.0 / 3.0, 0.1465}, {2.0 / 3.0, 0.199}, {0.1, 0.9}, {0.9, 0.0}, {0.25, 0.05}}) {
    const auto stats = run_trials({p, eta}, Honest{}, trials, 42, 4);
    CAPTURE(p);
    CAPTURE(eta);
    CHECK(stats.trials == trials);
    CHECK(stats.aborts == 0);
    CHECK(oracle::within_3_sigma(stats.frequency(stats.alice_wins), 1.0 - p, trials));
  }
}

TEST_CASE("BobClaimWin wins with p + eta") {
  const std::uint64_t trials = 100000;
  const auto stats = run_trials({0.5, kBalancedEta}, BobClaimWin{}, trials, 9);
  CHECK(stats.alice_wins == 0);
  CHECK(oracle::within_3_sigma(stats.frequency(stats.bob_wins), 0.5 + kBalancedEta, trials));
  CHECK(std::abs(0.5 + kBalancedEta - 0.7071) < 1e-4);
}

TEST_CASE("AliceDelta Monte Carlo matches the win-and-pass expression") {
  const std::uint64_t trials = 100000;
  for (const auto& [p, eta, delta] : std::vector<std::tuple<double, double, double>>{
           {0.5, kBalancedEta, 0.146447}, {1.0 / 3.0, 0.15, 0.6}, {0.2, 0.3, 0.0}}) {
    const double expected = oracle::alice_delta_amplitude_route(p, eta, delta);
    CHECK(adversary::alice_success_probability_delta({p, eta}, delta) == doctest::Approx(expected).epsilon(1e-9));
    const auto stats = run_trials({p, eta}, AliceDelta{delta}, trials, 77);
    CHECK(oracle::within_3_sigma(stats.frequency(stats.alice_wins), expected, trials));
  }
}

TEST_CASE("determinism and thread independence") {
  const auto a = run_trials({0.4, 0.2}, AliceDelta{0.2}, 20000, 123, 1);
  const auto b = run_trials({0.4, 0.2}, AliceDelta{0.2}, 20000, 123, 1);
  const auto c = run_trials({0.4, 0.2}, AliceDelta{0.2}, 20000, 123, 7);
  const auto d = run_trials({0.4, 0.2}, AliceDelta{0.2}, 20000, 124, 1);
  CHECK(a == b);
  CHECK(a == c);
  CHECK_FALSE(a == d);

  Rng r1 = substream(5, 17);
  Rng r2 = substream(5, 17);
  for (int i = 0; i < 50; ++i) {
    const auto o1 = run_protocol({0.3, 0.3}, Honest{}, r1);
    const auto o2 = run_protocol({0.3, 0.3}, Honest{}, r2);
    CHECK(o1.winner == o2.winner);
    CHECK(o1.transcript.events.size() == o2.transcript.events.size());
  }
}
