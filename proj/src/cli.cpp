#include "qdice/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>

#include "qdice/adversary.hpp"
#include "qdice/dicer.hpp"
#include "qdice/errors.hpp"
#include "qdice/fairness.hpp"
#include "qdice/wcf.hpp"

namespace qdice::cli {
namespace {

const std::set<std::string> kProbabilityKeys = {
    "honest_alice", "honest_bob",  "p_alice_star",      "p_alice_star_oracle", "p_bob_star", "cheater_value",
    "losing_prob",  "frequency",   "honest_probs",      "worst_case_losing",   "expected_honest_losing",
};

json number(double v) { return round_sig(v); }

json numbers(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(round_sig(v));
  return arr;
}

json optional_number(const std::optional<double>& v) { return v ? json(round_sig(*v)) : json(nullptr); }

json skeleton(const json& inputs) {
  return json{{"version", {{"schema", kSchemaVersion}, {"toolkit", std::string(kToolkitVersion)}}},
              {"inputs", inputs},
              {"analytic", nullptr},
              {"monte_carlo", nullptr},
              {"bounds", nullptr}};
}

json outcome_row(const std::string& name, std::uint64_t count, std::uint64_t trials) {
  const double f = static_cast<double>(count) / static_cast<double>(trials);
  return {{"outcome", name},
          {"count", count},
          {"frequency", number(f)},
          {"std_error", number(std::sqrt(f * (1.0 - f) / static_cast<double>(trials)))}};
}

wcf::ProtocolParams protocol_params(const RunConfig& c) {
  if (!c.p || !c.eta) throw ConfigError("--p and --eta are required");
  return wcf::ProtocolParams::make(*c.p, *c.eta);
}

std::vector<wcf::Complex> complex_pairs(const std::vector<double>& flat) {
  std::vector<wcf::Complex> out;
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2) out.emplace_back(flat[i], flat[i + 1]);
  return out;
}

wcf::CheatSpec cheat_spec(const RunConfig& c, const wcf::ProtocolParams& params) {
  if (c.cheat == "honest") return wcf::Honest{};
  if (c.cheat == "bob-claim-win") return wcf::BobClaimWin{};
  if (c.cheat == "alice-delta") {
    const double delta = c.delta ? *c.delta : adversary::alice_optimal_value(params).delta.value_or(0.0);
    return wcf::AliceDelta{delta};
  }
  if (c.cheat == "alice-general") {
    if (c.alpha.size() != 8) throw ConfigError("--alpha needs 8 numbers (re, im for ↑↑ ↑↓ ↓↑ ↓↓)");
    wcf::AliceGeneral g;
    const auto alpha = complex_pairs(c.alpha);
    std::copy(alpha.begin(), alpha.end(), g.alpha.begin());
    if (!c.ancilla.empty()) {
      if (c.ancilla.size() % 8 != 0) throw ConfigError("--ancilla needs 4 * 2 * D numbers");
      const auto flat = complex_pairs(c.ancilla);
      const std::size_t dim = flat.size() / 4;
      for (std::size_t k = 0; k < 4; ++k) {
        g.ancilla.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k * dim),
                               flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
      }
    }
    return g;
  }
  throw ConfigError("unknown cheat strategy '" + c.cheat + "'");
}

dicer::LadderSpec ladder(const RunConfig& c) {
  const int n = *c.dice;
  if (c.dice_case) {
    if (n != 3) throw ConfigError("--case applies to three-party ladders only");
    return dicer::LadderSpec::three_sided(*c.dice_case, dicer::optimize_three_sided(*c.dice_case).fairness.eta_star);
  }
  std::vector<double> etas = c.stage_etas;
  if (etas.empty()) {
    // Balanced fair first stage; later stages default to eta = 0.
    etas.assign(static_cast<std::size_t>(n - 1), 0.0);
    etas[0] = fairness::solve_balanced().eta_star;
  }
  if (etas.size() != static_cast<std::size_t>(n - 1)) throw ConfigError("--stage-eta needs N - 1 values");
  return dicer::LadderSpec::standard(n, etas);
}

json dice_bounds(const dicer::DiceReport& r) {
  json parties = json::array();
  for (int n = 1; n <= r.n_parties; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    parties.push_back({{"party", n},
                       {"epsilon", number(r.bias[i])},
                       {"bound", number(r.bound[i])},
                       {"holds", r.bias[i] <= r.bound[i]}});
  }
  return {{"parties", parties}, {"all_hold", r.bound_satisfied}};
}

json simulate_wcf(const RunConfig& c) {
  const auto params = protocol_params(c);
  const auto cheat = cheat_spec(c, params);
  json inputs{{"command", "simulate"}, {"mode", "wcf"},     {"p", number(params.p)},
              {"eta", number(params.eta)}, {"cheat", c.cheat}, {"delta", optional_number(c.delta)},
              {"trials", c.trials},        {"seed", c.seed}};
  if (const auto* d = std::get_if<wcf::AliceDelta>(&cheat)) inputs["delta"] = number(d->delta);
  json report = skeleton(inputs);

  const bool alice_defined = params.p < 1.0 && params.p + params.eta > 0.0;
  json analytic{{"honest_alice", number(wcf::honest_win_prob(params))},
                {"honest_bob", number(params.p)},
                {"p_bob_star", number(adversary::bob_optimal_value(params).value)},
                {"p_alice_star", nullptr},
                {"delta_star", nullptr},
                {"cheater_value", nullptr}};
  if (alice_defined) {
    const auto a = adversary::alice_optimal_value(params);
    analytic["p_alice_star"] = number(a.value);
    analytic["delta_star"] = optional_number(a.delta);
  }
  if (const auto* d = std::get_if<wcf::AliceDelta>(&cheat)) {
    analytic["cheater_value"] = number(adversary::alice_value_at_delta(params, d->delta));
  } else if (const auto* g = std::get_if<wcf::AliceGeneral>(&cheat)) {
    analytic["cheater_value"] = number(adversary::alice_success_probability(params, *g));
  } else if (std::holds_alternative<wcf::BobClaimWin>(cheat)) {
    analytic["cheater_value"] = number(adversary::bob_optimal_value(params).value);
  }
  report["analytic"] = analytic;

  const auto stats = wcf::run_trials(params, cheat, c.trials, c.seed, c.threads);
  report["monte_carlo"] = {{"trials", stats.trials},
                           {"aborts", stats.aborts},
                           {"outcomes", json::array({outcome_row("alice", stats.alice_wins, stats.trials),
                                                     outcome_row("bob", stats.bob_wins, stats.trials),
                                                     outcome_row("abort", stats.aborts, stats.trials)})}};
  return report;
}

json simulate_dice(const RunConfig& c) {
  const auto spec = ladder(c);
  dicer::Coalition coalition;
  if (c.honest_party) {
    for (int n = 1; n <= spec.n_parties; ++n) {
      if (n != *c.honest_party) coalition.members.insert(n);
    }
  }
  std::vector<double> etas;
  for (const auto& st : spec.stages) etas.push_back(st.params.eta);
  json inputs{{"command", "simulate"},
              {"mode", "dice"},
              {"dice", spec.n_parties},
              {"case", c.dice_case ? json(*c.dice_case) : json(nullptr)},
              {"honest_party", c.honest_party ? json(*c.honest_party) : json(nullptr)},
              {"stage_etas", numbers(etas)},
              {"trials", c.trials},
              {"seed", c.seed}};
  json report = skeleton(inputs);

  const auto r = dicer::simulate_dice(spec, coalition, c.trials, c.seed, c.threads);
  json analytic{{"honest_probs", numbers(r.honest_probs)},
                {"worst_case_losing", numbers(r.worst_case_losing)},
                {"bias", numbers(r.bias)},
                {"expected_honest_losing", nullptr}};
  if (r.honest_party) {
    analytic["expected_honest_losing"] = number(r.worst_case_losing[static_cast<std::size_t>(*r.honest_party - 1)]);
  }
  report["analytic"] = analytic;

  json rows = json::array();
  for (int n = 1; n <= r.n_parties; ++n) {
    rows.push_back(outcome_row("party-" + std::to_string(n), r.wins[static_cast<std::size_t>(n - 1)], r.trials));
  }
  report["monte_carlo"] = {{"trials", r.trials}, {"aborts", r.aborts}, {"outcomes", rows}};
  report["bounds"] = dice_bounds(r);
  return report;
}

void check_finite(const json& j, std::vector<std::string>& problems, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      const std::string sub = path + "." + k;
      if (kProbabilityKeys.contains(k)) {
        const auto check = [&](const json& x) {
          if (x.is_null()) return;
          if (!x.is_number() || x.get<double>() < 0.0 || x.get<double>() > 1.0) {
            problems.push_back(sub + " is not a probability");
          }
        };
        if (v.is_array()) {
          for (const auto& x : v) check(x);
        } else {
          check(v);
        }
      }
      check_finite(v, problems, sub);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], problems, path + "[" + std::to_string(i) + "]");
  }
}

std::string key_name(std::string key) {
  for (auto& ch : key) {
    if (ch == '-') ch = '_';
  }
  return key;
}

}  // namespace

double round_sig(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", value);
  return std::strtod(buf, nullptr);
}

void RunConfig::validate() const {
  static const std::set<std::string> commands = {"simulate", "cheat", "solve", "bound-check"};
  if (!commands.contains(subcommand)) throw ConfigError("unknown subcommand '" + subcommand + "'");
  if (trials < 1) throw ConfigError("--trials must be at least 1");
  if (threads < 1) throw ConfigError("--threads must be at least 1");
  if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
  static const std::set<std::string> cheats = {"honest", "alice-delta", "alice-general", "bob-claim-win"};
  if (!cheats.contains(cheat)) throw ConfigError("--cheat must be one of honest, alice-delta, alice-general, bob-claim-win");
  if (dice && *dice < 2) throw ConfigError("--dice must be at least 2");
  if (dice_case && *dice_case != 1 && *dice_case != 2) throw ConfigError("--case must be 1 or 2");
  if (honest_party && (!dice || *honest_party < 1 || *honest_party > *dice)) {
    throw ConfigError("--honest-party must name one of the --dice parties");
  }
  if (subcommand == "solve") {
    if (target != "balanced" && target != "dice3-case1" && target != "dice3-case2") {
      throw ConfigError("solve target must be balanced, dice3-case1 or dice3-case2");
    }
  }
  if (subcommand == "bound-check" && (!dice || !party)) throw ConfigError("bound-check needs --dice and --party");
  if (grid_points < 1000) throw ConfigError("--grid must be at least 1000");
}

void apply_config(RunConfig& c, const json& doc, const std::set<std::string>& explicit_keys) {
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [raw_key, v] : doc.items()) {
      const std::string key = key_name(raw_key);
      if (explicit_keys.contains(key)) continue;
      if (key == "p") c.p = v.get<double>();
      else if (key == "eta") c.eta = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "cheat") c.cheat = v.get<std::string>();
      else if (key == "alpha") c.alpha = v.get<std::vector<double>>();
      else if (key == "ancilla") c.ancilla = v.get<std::vector<double>>();
      else if (key == "dice") c.dice = v.get<int>();
      else if (key == "case") c.dice_case = v.get<int>();
      else if (key == "honest_party") c.honest_party = v.get<int>();
      else if (key == "stage_eta") c.stage_etas = v.get<std::vector<double>>();
      else if (key == "target") c.target = v.get<std::string>();
      else if (key == "party") c.party = v.get<int>();
      else if (key == "biases") c.biases = v.get<std::vector<double>>();
      else if (key == "trials") c.trials = v.get<std::uint64_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<unsigned>();
      else if (key == "grid") c.grid_points = v.get<std::size_t>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "out") c.out = v.get<std::string>();
      else throw ConfigError("unknown config key '" + raw_key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

json cmd_simulate(const RunConfig& c) { return c.dice ? simulate_dice(c) : simulate_wcf(c); }

json cmd_cheat(const RunConfig& c) {
  const auto params = protocol_params(c);
  json report = skeleton({{"command", "cheat"}, {"p", number(params.p)}, {"eta", number(params.eta)}, {"grid", c.grid_points}});
  const auto alice = adversary::alice_optimal_value(params);
  const auto oracle = adversary::brute_force_alice(params, {c.grid_points, true, 0, c.seed}, 1);
  const auto bob = adversary::bob_optimal_value(params);
  report["analytic"] = {{"honest_alice", number(1.0 - params.p)},
                        {"honest_bob", number(params.p)},
                        {"p_alice_star", number(alice.value)},
                        {"p_alice_star_oracle", number(oracle.value)},
                        {"delta_star", optional_number(alice.delta)},
                        {"p_bob_star", number(bob.value)},
                        {"bias_alice", number(alice.value - (1.0 - params.p))},
                        {"bias_bob", number(bob.value - params.p)}};
  return report;
}

json cmd_solve(const RunConfig& c) {
  json report = skeleton({{"command", "solve"}, {"target", c.target}});
  if (c.target == "balanced") {
    const auto s = fairness::solve_balanced();
    report["analytic"] = {{"target", c.target},
                          {"eta_star", number(s.eta_star)},
                          {"p_alice_star", number(s.lhs)},
                          {"p_bob_star", number(s.rhs)},
                          {"losing_prob", number(s.lhs)},
                          {"bias", number(s.lhs - 0.5)},
                          {"residual", s.residual}};
    return report;
  }
  const int which = c.target == "dice3-case1" ? 1 : 2;
  const auto s = dicer::optimize_three_sided(which);
  report["analytic"] = {{"target", c.target},
                        {"eta_star", number(s.fairness.eta_star)},
                        {"losing_prob", number(s.common_losing)},
                        {"bias", number(s.bias)},
                        {"residual", s.fairness.residual},
                        {"worst_case_losing", numbers(s.report.worst_case_losing)}};
  report["bounds"] = dice_bounds(s.report);
  return report;
}

json cmd_bound_check(const RunConfig& c) {
  json report = skeleton({{"command", "bound-check"}, {"dice", *c.dice}, {"party", *c.party}, {"biases", numbers(c.biases)}});
  const auto b = dicer::bias_bound_check(*c.party, *c.dice, c.biases);
  report["analytic"] = {{"losing_prob", number(b.losing_prob)}};
  report["bounds"] = {{"epsilon", number(b.epsilon)}, {"bound", number(b.bound)}, {"holds", b.holds}};
  return report;
}

json run_command(const RunConfig& c) {
  c.validate();
  if (c.subcommand == "simulate") return cmd_simulate(c);
  if (c.subcommand == "cheat") return cmd_cheat(c);
  if (c.subcommand == "solve") return cmd_solve(c);
  return cmd_bound_check(c);
}

std::string to_csv(const json& report) {
  std::ostringstream os;
  os << "outcome,count,trials,frequency,std_error\n";
  const json& mc = report.at("monte_carlo");
  if (mc.is_null()) return os.str();
  for (const auto& row : mc.at("outcomes")) {
    os << row.at("outcome").get<std::string>() << ',' << row.at("count").get<std::uint64_t>() << ','
       << mc.at("trials").get<std::uint64_t>() << ',' << row.at("frequency").dump() << ',' << row.at("std_error").dump()
       << '\n';
  }
  return os.str();
}

std::string render(const json& report, const RunConfig& c) {
  return c.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
}

std::vector<std::string> validate_report(const json& r) {
  std::vector<std::string> problems;
  if (!r.is_object()) return {"report is not an object"};
  for (const char* key : {"version", "inputs", "analytic", "monte_carlo", "bounds"}) {
    if (!r.contains(key)) problems.push_back(std::string("missing top-level key ") + key);
  }
  if (!problems.empty()) return problems;
  if (!r["version"].is_object() || r["version"].value("schema", 0) != kSchemaVersion ||
      !r["version"].contains("toolkit")) {
    problems.push_back("version must carry schema and toolkit");
  }
  if (!r["inputs"].is_object() || !r["inputs"].contains("command")) problems.push_back("inputs.command missing");
  check_finite(r, problems, "$");
  const json& mc = r["monte_carlo"];
  if (!mc.is_null()) {
    const auto trials = mc.value("trials", std::uint64_t{0});
    if (trials < 1) problems.push_back("monte_carlo.trials must be >= 1");
    std::uint64_t total = 0;
    for (const auto& row : mc.value("outcomes", json::array())) {
      const auto count = row.value("count", std::uint64_t{0});
      total += count;
      const double f = static_cast<double>(count) / static_cast<double>(std::max<std::uint64_t>(trials, 1));
      const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(std::max<std::uint64_t>(trials, 1)));
      if (std::abs(row.value("frequency", -1.0) - f) > 1e-6 * std::max(f, 1e-300) + 1e-15) {
        problems.push_back("frequency of " + row.value("outcome", std::string("?")) + " disagrees with its count");
      }
      if (std::abs(row.value("std_error", -1.0) - se) > 1e-6 * std::max(se, 1e-300) + 1e-15) {
        problems.push_back("std_error of " + row.value("outcome", std::string("?")) + " is not sqrt(f(1-f)/trials)");
      }
    }
    if (total != trials) problems.push_back("outcome counts do not sum to trials");
  }
  return problems;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = render(run_command(config), config);
  } catch (const BracketingError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::domain_error& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  if (config.out) {
    std::ofstream file(*config.out, std::ios::binary);
    if (!file || !(file << text) || !file.flush()) {
      err << "cannot write " << *config.out << '\n';
      return kIoError;
    }
  } else {
    out << text;
  }
  return kOk;
}

}  // namespace qdice::cli
