#pragma once

// Report-producing commands behind the `qdice` executable. Every command
// returns one JSON document with top-level keys
//   version, inputs, analytic, monte_carlo, bounds
// where sections a command does not produce are null. See
// schemas/report.schema.json.

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qdice::cli {

using json = nlohmann::json;

inline constexpr std::string_view kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kSolverError = 3,
};

/// Bad or inconsistent command-line / config-file input.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct RunConfig {
  std::string subcommand;  // simulate | cheat | solve | bound-check

  std::optional<double> p;
  std::optional<double> eta;
  std::optional<double> delta;
  std::string cheat = "honest";        // honest | alice-delta | alice-general | bob-claim-win
  std::vector<double> alpha;           // 8 reals: (re, im) for ↑↑, ↑↓, ↓↑, ↓↓
  std::vector<double> ancilla;         // 4 * 2 * D reals: one (re, im) vector per term

  std::optional<int> dice;
  std::optional<int> dice_case;        // 1 | 2, three-party ladders only
  std::optional<int> honest_party;     // everyone else colludes
  std::vector<double> stage_etas;

  std::string target;                  // solve: balanced | dice3-case1 | dice3-case2
  std::optional<int> party;            // bound-check
  std::vector<double> biases;          // bound-check

  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t grid_points = 10000;

  std::string format = "json";         // json | csv
  std::optional<std::string> out;

  /// Throws ConfigError.
  void validate() const;
};

/// Fills fields named in `doc` (same keys as the long flags, '-' or '_')
/// unless they appear in `explicit_keys`.
void apply_config(RunConfig& config, const json& doc, const std::set<std::string>& explicit_keys);

json cmd_simulate(const RunConfig& config);
json cmd_cheat(const RunConfig& config);
json cmd_solve(const RunConfig& config);
json cmd_bound_check(const RunConfig& config);

/// Dispatches on config.subcommand.
json run_command(const RunConfig& config);

/// Flattens the Monte Carlo frequency table.
std::string to_csv(const json& report);

/// Renders the report in config.format.
std::string render(const json& report, const RunConfig& config);

/// Structural check against the published schema: required keys, every
/// probability in [0, 1], standard errors equal to sqrt(f (1 - f) / trials).
/// Returns the list of problems (empty when valid).
std::vector<std::string> validate_report(const json& report);

/// Runs the command, writes the output and maps failures to exit codes,
/// printing messages to `err`.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Value rounded to 7 significant digits, as printed in reports.
double round_sig(double value);

}  // namespace qdice::cli
