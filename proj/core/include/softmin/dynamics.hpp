#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "softmin/energy.hpp"
#include "softmin/objective.hpp"
#include "softmin/swarm.hpp"

namespace softmin {

enum class ScheduleKind { fixed, geometric };
std::string_view to_string(ScheduleKind k);

/// beta_t policy. Geometric schedules multiply by `factor` once per step,
/// so factor < 1 decays and factor > 1 sharpens.
struct Schedule {
  ScheduleKind kind = ScheduleKind::fixed;
  double beta0 = 2.0;
  double factor = 0.9995;
};

double beta_at(const Schedule& schedule, std::int64_t step);

enum class Method { softmin_flow, annealing_baseline };
std::string_view to_string(Method m);

struct IntegratorConfig {
  double dt = 0.01;
  double sigma = 1.0;  // noise enters as sqrt(2 sigma dt) * N(0, 1)
  std::int64_t max_steps = 10'000'000;
  std::uint64_t seed = 0;
  Method method = Method::softmin_flow;
};

void validate(const Schedule& schedule);
void validate(const IntegratorConfig& cfg);

struct StepRecord {
  std::int64_t step = 0;
  double time = 0.0;
  double beta = 0.0;
  double energy = 0.0;  // J_beta at this step
  double min_f = 0.0;
  std::optional<std::vector<double>> prefactors;
};

/// Standard normal block for the transition step -> step + 1. A pure
/// function of (seed, step): the same block comes back on every call.
void draw_noise(std::uint64_t seed, std::int64_t step, Matrix& out);

/// x <- x - n grad J_beta(x) dt + sqrt(2 sigma dt) noise.
/// Throws DivergenceError if any coordinate becomes non-finite.
Swarm step_softmin(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                   const IntegratorConfig& cfg, const Matrix& noise);

/// Independent particles: x_k <- x_k - beta grad f(x_k) dt + sqrt(2 sigma dt) noise_k.
Swarm step_annealing(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                     const IntegratorConfig& cfg, const Matrix& noise);

using StopPredicate = std::function<bool(const Swarm&, const StepRecord&)>;

struct TraceOptions {
  std::int64_t stride = 0;  // 0 disables the trace
  bool prefactors = false;  // keep per-particle A^(k) in trace records
};

struct SimulationResult {
  Swarm final_swarm;
  std::optional<std::int64_t> hit_step;
  std::int64_t steps_used = 0;
  std::vector<StepRecord> trace;
};

/// Integrates with beta_at(schedule, step) until `stop` fires or
/// cfg.max_steps steps have been applied. `stop` is checked before each step,
/// so a predicate that holds initially gives hit_step = 0. The record passed
/// to `stop` always carries prefactors. Divergence propagates as
/// DivergenceError with the offending step index.
SimulationResult run_simulation(const Swarm& initial, const ObjectiveSpec& spec,
                                const Schedule& schedule, const IntegratorConfig& cfg,
                                const StopPredicate& stop, const TraceOptions& trace = {});

}  // namespace softmin
