#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "softmin/experiments.hpp"

namespace softmin::app {

// A config document that could not be turned into a RunConfig. Every
// problem found is listed, one per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct RunConfig {
  ExperimentSetup setup;
  std::string output;  // may be empty; the command line supplies it then
};

/// Parses a YAML document. Only `experiment` and `objective` are required;
/// everything else falls back to the experiment's documented defaults.
///
///   experiment: transition_time
///   objective: double_well{a=1}
///   methods: [softmin_fixed, annealing_geometric]
///   sweep: [0.5, 1, 1.5, 2]
///   n: 100
///   schedule: {beta0: 2, gamma: 0.9995}
///   integrator: {dt: 0.01, sigma: 1, max_steps: 10000000}
///   init: {kind: ball_around_minimum, which_minimum: first, radius: 0.1}
///   stop: {kind: enter_ball, epsilon: 0.25, quorum: first_particle}
///   runs: 96
///   seed: 0
///   threads: 1
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical YAML with every field spelled out. parse_config(normalize(c))
/// reproduces c, so normalize is idempotent under a parse round trip.
std::string normalize(const RunConfig& config);

}  // namespace softmin::app
