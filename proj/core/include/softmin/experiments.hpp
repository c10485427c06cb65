#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softmin/dynamics.hpp"
#include "softmin/objective.hpp"
#include "softmin/swarm.hpp"

namespace softmin {

// ---------------------------------------------------------------------------
// Initialization

enum class InitKind { ball_around_minimum, circle_around_point, explicit_positions };
enum class MinimumSelector { first, highest, lowest };

std::string_view to_string(InitKind k);
std::string_view to_string(MinimumSelector s);

struct InitSpec {
  InitKind kind = InitKind::ball_around_minimum;
  Point center;            // circle_around_point; empty means the origin
  double radius = 0.1;
  double gauss_std = 0.05;  // isotropic jitter added on the circle
  MinimumSelector which_minimum = MinimumSelector::first;
  // Leading particles placed verbatim before sampling the rest. For
  // explicit_positions every particle comes from here.
  std::vector<Point> pinned;
};

const CriticalPoint& select_minimum(const ObjectiveSpec& spec, MinimumSelector which);

/// Deterministic in `seed`. Ball sampling is uniform in volume; circle
/// sampling (d = 2 only) draws a uniform angle plus Gaussian jitter.
Swarm init_swarm(const ObjectiveSpec& spec, const InitSpec& init, std::size_t n,
                 std::uint64_t seed);

/// Where a swarm started in `start` is headed: the global minima when
/// `start` is not one of them, otherwise every other listed minimum.
std::vector<Point> transition_targets(const ObjectiveSpec& spec, std::span<const double> start);

// ---------------------------------------------------------------------------
// Stopping rules

enum class StopKind { none, enter_ball, exit_maximizing_regime, coordinate_threshold };
std::string_view to_string(StopKind k);

struct StoppingSpec {
  StopKind kind = StopKind::enter_ball;
  std::vector<Point> targets;  // enter_ball; resolved per trial when empty
  double epsilon = 0.25;
  std::optional<std::size_t> watched;
  double quorum = 0.0;     // 0: first particle suffices; q in (0,1]: ceil(q n) particles
  double threshold = 0.0;  // coordinate_threshold: first coordinate > threshold
};

StopPredicate make_stop_predicate(const StoppingSpec& stop);

// ---------------------------------------------------------------------------
// Results

struct TrialResult {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  bool hit = false;
  std::optional<double> hitting_time;
  std::int64_t steps_used = 0;
  bool diverged = false;
  std::optional<double> theory_exponent;
};

struct SummaryStats {
  std::size_t count = 0;
  std::size_t hits = 0;
  std::size_t censored = 0;  // includes diverged trials
  std::size_t diverged = 0;
  std::optional<double> mean_time;  // over hitting runs only
  std::optional<double> std_time;   // population standard deviation

  bool flagged() const noexcept { return censored > 0; }
};

/// Mean and std over hitting runs. Times are sorted before a compensated sum,
/// so the result does not depend on the order of `results`.
SummaryStats aggregate(std::span<const TrialResult> results);

// ---------------------------------------------------------------------------
// Experiments

struct MethodSpec {
  std::string name;
  Method dynamics = Method::softmin_flow;
  ScheduleKind schedule = ScheduleKind::fixed;
};

/// softmin_fixed, softmin_geometric, annealing_geometric, annealing_fixed.
std::span<const MethodSpec> known_methods();
MethodSpec method_by_name(std::string_view name);

enum class ExperimentKind { exit_time, transition_time, particle_sweep, entry_time, single_trajectory };
std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

/// Name of the swept quantity: "a", "n", "radius" or "none".
std::string_view sweep_name(ExperimentKind k);

struct ExperimentSetup {
  ExperimentKind kind = ExperimentKind::transition_time;
  ObjectiveSpec objective;
  std::vector<MethodSpec> methods;
  std::vector<double> sweep;  // a, n or radius depending on kind
  std::size_t n = 100;
  double beta0 = 2.0;
  double gamma = 0.9995;
  double dt = 0.01;
  double sigma = 1.0;
  std::int64_t max_steps = 10'000'000;
  InitSpec init;
  StoppingSpec stop;
  std::size_t runs = 96;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  std::int64_t trace_stride = 0;
};

/// Documented defaults for each experiment on the given objective.
ExperimentSetup default_setup(ExperimentKind kind, ObjectiveSpec objective);

/// Throws ContractViolation on an inconsistent setup.
void validate(const ExperimentSetup& setup);

/// Fully resolved description of one trial.
struct TrialPlan {
  std::size_t sweep_index = 0;
  std::size_t method_index = 0;
  std::size_t run_index = 0;
  std::optional<double> sweep_key;
  std::uint64_t seed = 0;
  ObjectiveSpec spec;
  std::size_t n = 0;
  Schedule schedule;
  IntegratorConfig cfg;
  InitSpec init;
  StoppingSpec stop;
  bool attach_theory = false;
  std::int64_t trace_stride = 0;
};

struct TrialOutcome {
  TrialResult result;
  std::vector<StepRecord> trace;
  // Distance of the initially lowest particle to its nearest listed minimum,
  // sampled with the trace (single_trajectory only).
  std::vector<double> trace_distance;
  std::string error;  // divergence diagnostic, empty otherwise
};

/// Trials in output order: sweep-major, then method, then run.
std::vector<TrialPlan> plan_trials(const ExperimentSetup& setup);
TrialOutcome run_trial(const TrialPlan& plan);

struct Cell {
  std::size_t sweep_index = 0;
  std::size_t method_index = 0;
  std::optional<double> sweep_key;
  SummaryStats stats;
  std::optional<double> theory_exponent;  // mean over the cell's trials
};

struct ExperimentResult {
  std::vector<TrialPlan> plans;
  std::vector<TrialOutcome> outcomes;  // parallel to plans
  std::vector<Cell> cells;             // sweep-major, then method
};

/// Called once per finished trial, serialized, in completion order.
using TrialCallback = std::function<void(std::size_t plan_index, const TrialOutcome&)>;

/// Runs every planned trial on `setup.threads` workers. Outcomes depend only
/// on the setup, never on the thread count.
ExperimentResult run_experiment(const ExperimentSetup& setup, const TrialCallback& on_trial = {});

/// Exit time from the maximizing regime on the double well; cells carry
/// the mean theory exponent.
ExperimentResult exit_time_experiment(const ExperimentSetup& setup);
/// Barrier sweep: mean time until the swarm reaches the target well.
ExperimentResult transition_time_experiment(const ExperimentSetup& setup);
/// Double-well transition protocol at fixed a, sweeping the particle count.
ExperimentResult particle_sweep_experiment(const ExperimentSetup& setup);
/// Ackley entry time into the ball around the global minimum, sweeping the
/// initialization radius.
ExperimentResult entry_time_experiment(const ExperimentSetup& setup);

}  // namespace softmin
