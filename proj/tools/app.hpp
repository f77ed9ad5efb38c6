#pragma once

// Batch front end over the C API: scenario configs in, CSV/JSON tables out.
// Exposed as a library so the binary stays a one-liner and tests can drive
// parsing and command execution in-process.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Configuration diagnostics name the offending key as "$.path".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  double alpha = 0.0;
  double beta = 0.0;
  int n_investors = 0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double alpha_tilde = 0.0;  // meaningful only when has_alpha_tilde
  bool has_alpha_tilde = false;
  std::optional<std::uint64_t> seed;

  std::optional<int> partition_cells;            // partition block (0: most informative)
  std::optional<std::int64_t> sim_replications;  // simulate block
  std::vector<std::string> sim_profiles;         // empty: all three profiles
  std::optional<std::string> scan_dimension;     // scan block
  std::vector<double> scan_grid;
  bool has_repeated = false;                  // repeated block
  std::optional<std::string> repeated_kind;   // absent: every applicable kind
  std::vector<double> delta_grid;             // nonempty: emit payoff streams
  std::int64_t stream_replications = 100000;
};

// Parses and fully validates a config file; throws ConfigError with the
// offending key and constraint.
ScenarioConfig load_config(const std::string& path);

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string formats = "csv,json";  // comma-separated subset of {csv, json}
  std::optional<std::uint64_t> seed_override;
  int workers = 1;
};

// Exit codes: 0 success, 1 configuration error, 2 infeasible request,
// 3 numerical failure.
int run_command(const Options& options);

// Full entry point: argv parsing plus run_command, same exit contract.
int run(int argc, const char* const* argv);

}  // namespace cli
