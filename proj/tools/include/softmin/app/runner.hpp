#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "softmin/app/config.hpp"
#include "softmin/experiments.hpp"

namespace softmin::app {

enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_divergence = 3,
  exit_io_failure = 4,
};

// Output file could not be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// results.csv header, fixed column order.
std::string csv_header();

/// One results.csv line (no trailing newline). Absent values print as NA.
std::string format_row(const ExperimentSetup& setup, const TrialPlan& plan,
                       const TrialOutcome& outcome);

nlohmann::json summary_json(const RunConfig& config, const ExperimentResult& result);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::ostream* log = nullptr;  // per-cell summary table, if set
};

/// Runs the experiment and writes results.csv, summary.json and the plot
/// files into `out_dir`. Rows reach results.csv in plan order as soon as
/// every earlier trial has finished.
int run(RunConfig config, const std::filesystem::path& out_dir, const RunOptions& options = {});

}  // namespace softmin::app
