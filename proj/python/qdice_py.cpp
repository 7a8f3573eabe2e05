#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qdice/adversary.hpp"
#include "qdice/cli.hpp"
#include "qdice/dicer.hpp"
#include "qdice/errors.hpp"
#include "qdice/fairness.hpp"
#include "qdice/wcf.hpp"

namespace py = pybind11;
using namespace qdice;

namespace {

wcf::CheatSpec make_cheat(const wcf::ProtocolParams& params, const std::string& name, std::optional<double> delta) {
  if (name == "honest") return wcf::Honest{};
  if (name == "bob-claim-win") return wcf::BobClaimWin{};
  if (name == "alice-delta") {
    return wcf::AliceDelta{delta.value_or(adversary::alice_optimal_value(params).delta.value_or(0.0))};
  }
  throw py::value_error("cheat must be honest, alice-delta or bob-claim-win");
}

py::dict cheat_value(const adversary::CheatValue& v) {
  py::dict d;
  d["value"] = v.value;
  d["delta"] = v.delta ? py::cast(*v.delta) : py::none();
  return d;
}

py::dict dice_report(const dicer::DiceReport& r) {
  py::dict d;
  d["n_parties"] = r.n_parties;
  d["honest_probs"] = r.honest_probs;
  d["worst_case_losing"] = r.worst_case_losing;
  d["bias"] = r.bias;
  d["bound"] = r.bound;
  d["bound_satisfied"] = r.bound_satisfied;
  d["trials"] = r.trials;
  d["wins"] = r.wins;
  d["aborts"] = r.aborts;
  d["honest_party"] = r.honest_party ? py::cast(*r.honest_party) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_qdice, m) {
  m.doc() = "Quantum weak coin flipping and dice rolling";
  m.attr("__version__") = std::string(cli::kToolkitVersion);

  py::register_exception<BracketingError>(m, "BracketingError", PyExc_RuntimeError);

  m.def("honest_win_prob", [](double p, double eta) { return wcf::honest_win_prob({p, eta}); },
        py::arg("p"), py::arg("eta"), "Alice's honest winning probability 1 - p.");

  m.def("alice_value_at_delta",
        [](double p, double eta, double delta) { return adversary::alice_value_at_delta({p, eta}, delta); },
        py::arg("p"), py::arg("eta"), py::arg("delta"));

  m.def("alice_optimal_value", [](double p, double eta) { return cheat_value(adversary::alice_optimal_value({p, eta})); },
        py::arg("p"), py::arg("eta"), "Closed-form P_A* and its maximizing delta.");

  m.def("bob_optimal_value", [](double p, double eta) { return adversary::bob_optimal_value({p, eta}).value; },
        py::arg("p"), py::arg("eta"));

  m.def("alice_success_probability",
        [](double p, double eta, std::vector<std::complex<double>> alpha,
           std::vector<std::vector<std::complex<double>>> ancilla) {
          if (alpha.size() != 4) throw py::value_error("alpha needs four amplitudes (uu, ud, du, dd)");
          wcf::AliceGeneral g;
          std::copy(alpha.begin(), alpha.end(), g.alpha.begin());
          g.ancilla = std::move(ancilla);
          return adversary::alice_success_probability({p, eta}, g);
        },
        py::arg("p"), py::arg("eta"), py::arg("alpha"), py::arg("ancilla") = std::vector<std::vector<std::complex<double>>>{},
        "Win-and-pass probability of an explicit cheat state, by state evolution.");

  m.def("brute_force_alice",
        [](double p, double eta, std::size_t delta_points, std::size_t random_samples, int ancilla_dim,
           std::uint64_t seed) {
          return cheat_value(adversary::brute_force_alice({p, eta}, {delta_points, true, random_samples, seed}, ancilla_dim));
        },
        py::arg("p"), py::arg("eta"), py::arg("delta_points") = 10000, py::arg("random_samples") = 0,
        py::arg("ancilla_dim") = 1, py::arg("seed") = 0);

  m.def("solve_balanced", [] {
    const auto s = fairness::solve_balanced();
    py::dict d;
    d["eta_star"] = s.eta_star;
    d["p_alice_star"] = s.lhs;
    d["p_bob_star"] = s.rhs;
    d["residual"] = s.residual;
    return d;
  });

  m.def("three_sided_case1", [](double eta) {
    const auto s = dicer::three_sided_case1(eta);
    return py::make_tuple(s.claire_loses, s.incumbent_loses);
  }, py::arg("eta"), "(Claire's, incumbent's) maximal losing probabilities, case 1.");

  m.def("three_sided_case2", [](double eta, bool literal) {
    const auto s = dicer::three_sided_case2(eta, literal ? dicer::BracketReading::Literal : dicer::BracketReading::Squared);
    return py::make_tuple(s.claire_loses, s.incumbent_loses);
  }, py::arg("eta"), py::arg("literal") = false, "(Claire's, incumbent's) maximal losing probabilities, case 2.");

  m.def("optimize_three_sided", [](int which, bool literal) {
    const auto s = dicer::optimize_three_sided(which, literal ? dicer::BracketReading::Literal : dicer::BracketReading::Squared);
    py::dict d;
    d["eta_star"] = s.fairness.eta_star;
    d["common_losing"] = s.common_losing;
    d["bias"] = s.bias;
    d["residual"] = s.fairness.residual;
    d["report"] = dice_report(s.report);
    return d;
  }, py::arg("case"), py::arg("literal") = false);

  m.def("honest_dice_probs", &dicer::honest_dice_probs, py::arg("n_parties"));

  m.def("worst_case_losing_prob",
        [](int party, int n, const std::vector<double>& biases) { return dicer::worst_case_losing_prob(party, n, biases); },
        py::arg("party"), py::arg("n_parties"), py::arg("biases"));

  m.def("bias_bound_check", [](int party, int n, const std::vector<double>& biases) {
    const auto b = dicer::bias_bound_check(party, n, biases);
    py::dict d;
    d["losing_prob"] = b.losing_prob;
    d["epsilon"] = b.epsilon;
    d["bound"] = b.bound;
    d["holds"] = b.holds;
    return d;
  }, py::arg("party"), py::arg("n_parties"), py::arg("biases"));

  m.def("run_trials",
        [](double p, double eta, const std::string& cheat, std::optional<double> delta, std::uint64_t trials,
           std::uint64_t seed, unsigned threads) {
          const wcf::ProtocolParams params{p, eta};
          const auto spec = make_cheat(params, cheat, delta);
          const auto stats = [&] {
            py::gil_scoped_release release;
            return wcf::run_trials(params, spec, trials, seed, threads);
          }();
          py::dict d;
          d["trials"] = stats.trials;
          d["alice_wins"] = stats.alice_wins;
          d["bob_wins"] = stats.bob_wins;
          d["aborts"] = stats.aborts;
          return d;
        },
        py::arg("p"), py::arg("eta"), py::arg("cheat") = "honest", py::arg("delta") = py::none(),
        py::arg("trials") = 100000, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("simulate_dice",
        [](int n, std::optional<int> honest_party, std::optional<int> which, std::vector<double> stage_etas,
           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
          dicer::LadderSpec spec;
          if (which) {
            if (n != 3) throw py::value_error("case applies to three-party ladders only");
            spec = dicer::LadderSpec::three_sided(*which, dicer::optimize_three_sided(*which).fairness.eta_star);
          } else {
            if (stage_etas.empty()) {
              stage_etas.assign(static_cast<std::size_t>(std::max(n - 1, 1)), 0.0);
              stage_etas[0] = fairness::solve_balanced().eta_star;
            }
            spec = dicer::LadderSpec::standard(n, stage_etas);
          }
          dicer::Coalition coalition;
          if (honest_party) {
            for (int k = 1; k <= n; ++k) {
              if (k != *honest_party) coalition.members.insert(k);
            }
          }
          return dice_report(dicer::simulate_dice(spec, coalition, trials, seed, threads));
        },
        py::arg("n_parties"), py::arg("honest_party") = py::none(), py::arg("case") = py::none(),
        py::arg("stage_etas") = std::vector<double>{}, py::arg("trials") = 90000, py::arg("seed") = 0,
        py::arg("threads") = 1);

  m.def("_run_command", [](const std::string& subcommand, const std::string& options) {
    cli::RunConfig config;
    config.subcommand = subcommand;
    cli::apply_config(config, cli::json::parse(options), {});
    return cli::run_command(config).dump();
  });
}
