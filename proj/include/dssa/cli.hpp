#ifndef DSSA_CLI_HPP_
#define DSSA_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dssa/ga.hpp"

namespace dssa {

// Exit codes: 0 success (feasible), 2 finished but infeasible, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

struct RunConfig {
  std::string netlist_path;
  GaConfig ga;
  FitnessConfig fitness;
  int train = 100;
  int test = 50;
  int points_per_decade = 3;
  int max_terms = 15;  // T
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  bool parallel = false;
  bool verbose = false;

  // Flat `key = value` config file; unknown keys are errors.
  void apply_config_file(const std::string& path);
};

struct RunReport {
  std::string rendered;
  EvaluationResult best_eval;
  bool train_feasible = false;
  double avg_dc_error_db = 0.0;
  double max_dc_error_db = 0.0;
  double avg_root_error_pct = 0.0;
  double max_root_error_pct = 0.0;
  std::vector<int> terms_per_polynomial;
  int total_terms = 0;
  double wall_seconds = 0.0;
};

// Full pipeline: parse -> sample -> optimize -> report. Writes result.json,
// errors.csv and response.csv into cfg.output_dir. Returns an exit code.
int cmd_run(const RunConfig& cfg, std::ostream& out, RunReport* report = nullptr);

// Prints the exact symbolic expansion and its term counts.
int cmd_exact(const std::string& netlist_path, std::ostream& out);

// Dumps a Monte Carlo dataset as CSV (d, x_1..x_K, dc_dB, poles, zeros).
int cmd_sample(const std::string& netlist_path, int count, std::uint64_t seed,
               std::ostream& out);

// Re-scores a saved simplified expression on a freshly sampled test set.
int cmd_eval(const std::string& netlist_path, const std::string& result_path,
             std::uint64_t seed, std::ostream& out);

}  // namespace dssa

#endif  // DSSA_CLI_HPP_
