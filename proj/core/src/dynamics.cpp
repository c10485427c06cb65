#include "softmin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softmin/errors.hpp"
#include "softmin/random.hpp"

namespace softmin {

namespace {

void check_shapes(const Swarm& swarm, const ObjectiveSpec& spec, const Matrix& noise) {
  if (swarm.dim() != spec.dimension) {
    throw ContractViolation("step: swarm dimension does not match " + spec.name);
  }
  if (noise.rows() != swarm.size() || noise.cols() != swarm.dim()) {
    throw ContractViolation("step: noise block shape does not match the swarm");
  }
}

std::int64_t step_index(const Swarm& swarm, double dt) {
  return static_cast<std::int64_t>(std::llround(swarm.time() / dt));
}

// x_k += dt * scale_k * g_k + amplitude * noise_k, in place.
void apply_update(Matrix& x, const Matrix& grad, std::span<const double> scale, double dt,
                  double amplitude, const Matrix& noise) {
  for (std::size_t k = 0; k < x.rows(); ++k) {
    auto xk = x.row(k);
    auto gk = grad.row(k);
    auto nk = noise.row(k);
    for (std::size_t a = 0; a < xk.size(); ++a) {
      xk[a] += dt * scale[k] * gk[a] + amplitude * nk[a];
    }
  }
}

// Per-particle multiplier of grad f in the drift: A^(k) for the soft-min
// flow, -beta for the independent baseline.
std::vector<double> drift_scale(const SwarmEvaluation& ev, Method method, double beta) {
  if (method == Method::softmin_flow) return prefactor_from_values(ev.f, beta).values;
  return std::vector<double>(ev.f.size(), -beta);
}

bool finite_evaluation(const SwarmEvaluation& ev) {
  return ev.grad.all_finite() &&
         std::all_of(ev.f.begin(), ev.f.end(), [](double v) { return std::isfinite(v); });
}

Swarm single_step(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                  const IntegratorConfig& cfg, const Matrix& noise, Method method) {
  check_shapes(swarm, spec, noise);
  validate(cfg);
  const SwarmEvaluation ev = evaluate_swarm(swarm, spec);
  if (!finite_evaluation(ev)) {
    const auto step = step_index(swarm, cfg.dt);
    throw DivergenceError(step, "non-finite objective value or gradient at step " +
                                    std::to_string(step));
  }
  Matrix next = swarm.positions();
  apply_update(next, ev.grad, drift_scale(ev, method, beta), cfg.dt,
               std::sqrt(2.0 * cfg.sigma * cfg.dt), noise);
  if (!next.all_finite()) {
    const auto step = step_index(swarm, cfg.dt) + 1;
    throw DivergenceError(step, "non-finite position after step " + std::to_string(step));
  }
  return Swarm(std::move(next), swarm.time() + cfg.dt);
}

}  // namespace

std::string_view to_string(ScheduleKind k) {
  return k == ScheduleKind::fixed ? "fixed" : "geometric";
}

std::string_view to_string(Method m) {
  return m == Method::softmin_flow ? "softmin_flow" : "annealing_baseline";
}

double beta_at(const Schedule& schedule, std::int64_t step) {
  if (schedule.kind == ScheduleKind::fixed) return schedule.beta0;
  return schedule.beta0 * std::pow(schedule.factor, static_cast<double>(step));
}

void validate(const Schedule& schedule) {
  if (!(schedule.beta0 > 0.0) || !std::isfinite(schedule.beta0)) {
    throw ContractViolation("schedule: beta0 must be positive");
  }
  if (!(schedule.factor > 0.0) || !std::isfinite(schedule.factor)) {
    throw ContractViolation("schedule: factor must be positive");
  }
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw ContractViolation("integrator: dt must be positive");
  }
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
    throw ContractViolation("integrator: sigma must be non-negative");
  }
  if (cfg.max_steps < 1) {
    throw ContractViolation("integrator: max_steps must be positive");
  }
}

void draw_noise(std::uint64_t seed, std::int64_t step, Matrix& out) {
  CounterRng(seed, Stream::noise).fill_normal(static_cast<std::uint64_t>(step), out.values());
}

Swarm step_softmin(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                   const IntegratorConfig& cfg, const Matrix& noise) {
  if (!(beta > 0.0)) throw ContractViolation("step_softmin: beta must be positive");
  return single_step(swarm, spec, beta, cfg, noise, Method::softmin_flow);
}

Swarm step_annealing(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                     const IntegratorConfig& cfg, const Matrix& noise) {
  return single_step(swarm, spec, beta, cfg, noise, Method::annealing_baseline);
}

SimulationResult run_simulation(const Swarm& initial, const ObjectiveSpec& spec,
                                const Schedule& schedule, const IntegratorConfig& cfg,
                                const StopPredicate& stop, const TraceOptions& trace) {
  validate(schedule);
  validate(cfg);
  if (initial.dim() != spec.dimension) {
    throw ContractViolation("run_simulation: swarm dimension does not match " + spec.name);
  }

  SimulationResult result;
  Swarm swarm = initial;
  Matrix noise(swarm.size(), swarm.dim());
  const bool noisy = cfg.sigma > 0.0;
  const double amplitude = std::sqrt(2.0 * cfg.sigma * cfg.dt);

  for (std::int64_t step = 0;; ++step) {
    swarm.set_time(static_cast<double>(step) * cfg.dt);
    const double beta = beta_at(schedule, step);
    const SwarmEvaluation ev = evaluate_swarm(swarm, spec);
    if (!finite_evaluation(ev)) {
      throw DivergenceError(step, "non-finite objective value or gradient at step " +
                                      std::to_string(step));
    }
    std::vector<double> prefactors = prefactor_from_values(ev.f, beta).values;

    StepRecord record;
    record.step = step;
    record.time = swarm.time();
    record.beta = beta;
    record.energy = softmin_energy(ev.f, beta);
    record.min_f = *std::min_element(ev.f.begin(), ev.f.end());
    record.prefactors = prefactors;

    const bool hit = stop && stop(swarm, record);
    const bool last = hit || step >= cfg.max_steps;
    if (trace.stride > 0 && (step % trace.stride == 0 || last)) {
      StepRecord kept = record;
      if (!trace.prefactors) kept.prefactors.reset();
      result.trace.push_back(std::move(kept));
    }
    if (hit) {
      result.hit_step = step;
      break;
    }
    if (last) break;

    if (noisy) draw_noise(cfg.seed, step, noise);
    if (cfg.method == Method::softmin_flow) {
      apply_update(swarm.positions(), ev.grad, prefactors, cfg.dt, amplitude, noise);
    } else {
      apply_update(swarm.positions(), ev.grad, std::vector<double>(swarm.size(), -beta), cfg.dt,
                   amplitude, noise);
    }
    result.steps_used = step + 1;
    if (!swarm.positions().all_finite()) {
      throw DivergenceError(step + 1, "non-finite position after step " + std::to_string(step + 1));
    }
  }
  result.final_swarm = std::move(swarm);
  return result;
}

}  // namespace softmin
