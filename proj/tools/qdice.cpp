// qdice: simulate the three-round weak coin flip and the dice-rolling ladder,
// compute cheating probabilities and solve the fairness conditions.

#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "qdice/cli.hpp"

namespace {

using qdice::cli::RunConfig;

struct Options {
  RunConfig config;
  std::string config_file;
};

void add_protocol_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--p", c.p, "Bob's honest winning probability");
  sub.add_option("--eta", c.eta, "security parameter, 0 <= eta <= 1 - p");
}

void add_common_options(CLI::App& sub, Options& o) {
  RunConfig& c = o.config;
  sub.add_option("--seed", c.seed, "master seed");
  sub.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--out", c.out, "write the report to PATH instead of stdout");
  sub.add_option("--config", o.config_file, "JSON file with the same keys as the long flags");
}

std::set<std::string> explicit_keys(const CLI::App& sub) {
  std::set<std::string> keys;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name(false, true);
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    for (auto& ch : name) {
      if (ch == '-') ch = '_';
    }
    keys.insert(name);
  }
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum weak coin flipping and dice rolling: simulation and bias analysis"};
  app.set_version_flag("--version", std::string(qdice::cli::kToolkitVersion));
  app.require_subcommand(1);

  Options o;
  RunConfig& c = o.config;

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo runs of the coin flip or the dice ladder");
  add_protocol_options(*simulate, c);
  simulate->add_option("--delta", c.delta, "delta for --cheat alice-delta (default: optimal)");
  simulate->add_option("--cheat", c.cheat, "honest | alice-delta | alice-general | bob-claim-win");
  simulate->add_option("--alpha", c.alpha, "alice-general amplitudes: re im for uu ud du dd")->delimiter(',');
  simulate->add_option("--ancilla", c.ancilla, "alice-general ancilla states, 4 vectors of (re im) pairs")->delimiter(',');
  simulate->add_option("--dice", c.dice, "roll an N-sided die instead of a single coin");
  simulate->add_option("--case", c.dice_case, "three-party ladder implementation (1 or 2)");
  simulate->add_option("--honest-party", c.honest_party, "the one honest party; all others collude");
  simulate->add_flag("--honest", "all parties honest (default)");
  simulate->add_option("--stage-eta", c.stage_etas, "eta per ladder stage")->delimiter(',');
  simulate->add_option("--trials", c.trials, "number of runs");
  simulate->add_option("--threads", c.threads, "worker threads (results do not depend on it)");
  add_common_options(*simulate, o);

  CLI::App* cheat = app.add_subcommand("cheat", "Optimal cheating probabilities, closed form and grid oracle");
  add_protocol_options(*cheat, c);
  cheat->add_option("--grid", c.grid_points, "delta grid size for the oracle");
  add_common_options(*cheat, o);

  CLI::App* solve = app.add_subcommand("solve", "Solve a fairness condition");
  solve->add_option("target", c.target, "balanced | dice3-case1 | dice3-case2")->required();
  add_common_options(*solve, o);

  CLI::App* bound = app.add_subcommand("bound-check", "Composed losing probability against N * max bias");
  bound->add_option("--dice", c.dice, "number of parties N")->required();
  bound->add_option("--party", c.party, "party index n")->required();
  bound->add_option("--biases", c.biases, "per-stage biases, entry stage first")->delimiter(',')->required();
  add_common_options(*bound, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qdice::cli::kValidationError;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    c.subcommand = sub->get_name();
    if (o.config_file.empty()) continue;
    std::ifstream in(o.config_file);
    if (!in) {
      std::cerr << "cannot read config file " << o.config_file << '\n';
      return qdice::cli::kIoError;
    }
    try {
      qdice::cli::apply_config(c, qdice::cli::json::parse(in), explicit_keys(*sub));
    } catch (const std::exception& e) {
      std::cerr << "invalid configuration: " << e.what() << '\n';
      return qdice::cli::kValidationError;
    }
  }
  return qdice::cli::execute(c, std::cout, std::cerr);
}
