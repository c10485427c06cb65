#include "softmin/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "softmin/energy.hpp"
#include "softmin/errors.hpp"
#include "softmin/random.hpp"
#include "softmin/theory.hpp"

namespace softmin {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d2);
}

std::vector<Point> lowest_minima(const ObjectiveSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : spec.minima) best = std::min(best, m.value);
  std::vector<Point> out;
  for (const auto& m : spec.minima) {
    if (m.value <= best + 1e-12) out.push_back(m.x);
  }
  return out;
}

double nearest_minimum_distance(const ObjectiveSpec& spec, std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : spec.minima) best = std::min(best, distance(m.x, x));
  return best;
}

ObjectiveSpec with_param(const ObjectiveSpec& base, const std::string& key, double value) {
  auto params = base.params;
  params[key] = value;
  return make_objective(base.name, params);
}

// Neumaier compensated summation.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

}  // namespace

std::string_view to_string(InitKind k) {
  switch (k) {
    case InitKind::ball_around_minimum: return "ball_around_minimum";
    case InitKind::circle_around_point: return "circle_around_point";
    case InitKind::explicit_positions: return "explicit";
  }
  return "?";
}

std::string_view to_string(MinimumSelector s) {
  switch (s) {
    case MinimumSelector::first: return "first";
    case MinimumSelector::highest: return "highest";
    case MinimumSelector::lowest: return "lowest";
  }
  return "?";
}

std::string_view to_string(StopKind k) {
  switch (k) {
    case StopKind::none: return "none";
    case StopKind::enter_ball: return "enter_ball";
    case StopKind::exit_maximizing_regime: return "exit_maximizing_regime";
    case StopKind::coordinate_threshold: return "coordinate_threshold";
  }
  return "?";
}

const CriticalPoint& select_minimum(const ObjectiveSpec& spec, MinimumSelector which) {
  if (spec.minima.empty()) throw NotFoundError(spec.name + ": no listed minima");
  switch (which) {
    case MinimumSelector::first:
      return spec.minima.front();
    case MinimumSelector::highest:
      // First of the highest, so ties keep catalog order.
      return *std::max_element(spec.minima.begin(), spec.minima.end(),
                               [](const auto& a, const auto& b) { return a.value + 1e-12 < b.value; });
    case MinimumSelector::lowest:
      return *std::min_element(spec.minima.begin(), spec.minima.end(),
                               [](const auto& a, const auto& b) { return a.value < b.value - 1e-12; });
  }
  return spec.minima.front();
}

Swarm init_swarm(const ObjectiveSpec& spec, const InitSpec& init, std::size_t n,
                 std::uint64_t seed) {
  if (n < 1) throw ContractViolation("init_swarm: need at least one particle");
  if (!(init.radius >= 0.0) || !(init.gauss_std >= 0.0)) {
    throw ContractViolation("init_swarm: radius and gauss_std must be non-negative");
  }
  const std::size_t d = spec.dimension;
  Matrix x(n, d);

  if (init.kind == InitKind::explicit_positions && init.pinned.size() != n) {
    throw ContractViolation("init_swarm: explicit layout has " + std::to_string(init.pinned.size()) +
                            " points for " + std::to_string(n) + " particles");
  }
  const std::size_t pinned = std::min(init.pinned.size(), n);
  for (std::size_t k = 0; k < pinned; ++k) {
    if (init.pinned[k].size() != d) {
      throw ContractViolation("init_swarm: pinned point has the wrong dimension");
    }
    std::copy(init.pinned[k].begin(), init.pinned[k].end(), x.row(k).begin());
  }

  const CounterRng rng(seed, Stream::init);
  std::vector<double> normal(d);
  switch (init.kind) {
    case InitKind::explicit_positions:
      break;
    case InitKind::ball_around_minimum: {
      const Point& center = select_minimum(spec, init.which_minimum).x;
      for (std::size_t k = pinned; k < n; ++k) {
        rng.fill_normal(2 * k, normal);
        const double u = rng.uniform_pair(2 * k + 1, 0)[0];
        double norm = 0.0;
        for (double v : normal) norm += v * v;
        norm = std::sqrt(norm);
        const double r = init.radius * std::pow(u, 1.0 / static_cast<double>(d));
        auto row = x.row(k);
        for (std::size_t a = 0; a < d; ++a) {
          row[a] = center[a] + (norm > 0.0 ? r * normal[a] / norm : 0.0);
        }
      }
      break;
    }
    case InitKind::circle_around_point: {
      if (d != 2) throw ContractViolation("init_swarm: circle initialization needs d = 2");
      const Point center = init.center.empty() ? Point(2, 0.0) : init.center;
      if (center.size() != 2) throw ContractViolation("init_swarm: circle center must be 2-D");
      for (std::size_t k = pinned; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * rng.uniform_pair(2 * k + 1, 0)[0];
        rng.fill_normal(2 * k, normal);
        auto row = x.row(k);
        row[0] = center[0] + init.radius * std::cos(angle) + init.gauss_std * normal[0];
        row[1] = center[1] + init.radius * std::sin(angle) + init.gauss_std * normal[1];
      }
      break;
    }
  }
  return Swarm(std::move(x));
}

std::vector<Point> transition_targets(const ObjectiveSpec& spec, std::span<const double> start) {
  auto lowest = lowest_minima(spec);
  const bool start_is_global =
      std::any_of(lowest.begin(), lowest.end(), [&](const Point& p) { return distance(p, start) < 1e-9; });
  if (!start_is_global) return lowest;
  std::vector<Point> out;
  for (const auto& m : spec.minima) {
    if (distance(m.x, start) > 1e-9) out.push_back(m.x);
  }
  return out;
}

StopPredicate make_stop_predicate(const StoppingSpec& stop) {
  switch (stop.kind) {
    case StopKind::none:
      return [](const Swarm&, const StepRecord&) { return false; };
    case StopKind::enter_ball: {
      if (!(stop.epsilon > 0.0)) throw ContractViolation("stop: epsilon must be positive");
      if (stop.targets.empty()) throw ContractViolation("stop: enter_ball needs a target");
      if (stop.quorum < 0.0 || stop.quorum > 1.0) {
        throw ContractViolation("stop: quorum fraction must lie in [0, 1]");
      }
      return [stop](const Swarm& swarm, const StepRecord&) {
        auto inside = [&](std::size_t k) {
          return std::any_of(stop.targets.begin(), stop.targets.end(), [&](const Point& t) {
            return distance(swarm.row(k), t) < stop.epsilon;
          });
        };
        if (stop.watched) return inside(*stop.watched);
        const std::size_t n = swarm.size();
        const std::size_t needed =
            stop.quorum > 0.0
                ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(stop.quorum * n - 1e-9)))
                : 1;
        std::size_t count = 0;
        for (std::size_t k = 0; k < n && count < needed; ++k) count += inside(k) ? 1 : 0;
        return count >= needed;
      };
    }
    case StopKind::exit_maximizing_regime: {
      const std::size_t watched = stop.watched.value_or(0);
      return [watched](const Swarm&, const StepRecord& record) {
        return record.prefactors && (*record.prefactors)[watched] <= 0.0;
      };
    }
    case StopKind::coordinate_threshold:
      return [stop](const Swarm& swarm, const StepRecord&) {
        if (stop.watched) return swarm.row(*stop.watched)[0] > stop.threshold;
        for (std::size_t k = 0; k < swarm.size(); ++k) {
          if (swarm.row(k)[0] > stop.threshold) return true;
        }
        return false;
      };
  }
  throw ContractViolation("stop: unknown kind");
}

SummaryStats aggregate(std::span<const TrialResult> results) {
  if (results.empty()) throw ContractViolation("aggregate: no trial results");
  SummaryStats s;
  s.count = results.size();
  std::vector<double> times;
  for (const auto& r : results) {
    if (r.hit && r.hitting_time) {
      times.push_back(*r.hitting_time);
    } else {
      ++s.censored;
      if (r.diverged) ++s.diverged;
    }
  }
  s.hits = times.size();
  if (times.empty()) return s;
  std::sort(times.begin(), times.end());
  const double mean = compensated_sum(times) / static_cast<double>(times.size());
  std::vector<double> sq(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) sq[i] = (times[i] - mean) * (times[i] - mean);
  std::sort(sq.begin(), sq.end());
  s.mean_time = mean;
  s.std_time = std::sqrt(compensated_sum(sq) / static_cast<double>(times.size()));
  return s;
}

std::span<const MethodSpec> known_methods() {
  static const std::array<MethodSpec, 4> methods = {{
      {"softmin_fixed", Method::softmin_flow, ScheduleKind::fixed},
      {"softmin_geometric", Method::softmin_flow, ScheduleKind::geometric},
      {"annealing_geometric", Method::annealing_baseline, ScheduleKind::geometric},
      {"annealing_fixed", Method::annealing_baseline, ScheduleKind::fixed},
  }};
  return methods;
}

MethodSpec method_by_name(std::string_view name) {
  for (const auto& m : known_methods()) {
    if (m.name == name) return m;
  }
  throw NotFoundError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::exit_time: return "exit_time";
    case ExperimentKind::transition_time: return "transition_time";
    case ExperimentKind::particle_sweep: return "particle_sweep";
    case ExperimentKind::entry_time: return "entry_time";
    case ExperimentKind::single_trajectory: return "single_trajectory";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  for (auto k : {ExperimentKind::exit_time, ExperimentKind::transition_time,
                 ExperimentKind::particle_sweep, ExperimentKind::entry_time,
                 ExperimentKind::single_trajectory}) {
    if (to_string(k) == s) return k;
  }
  throw NotFoundError("unknown experiment '" + std::string(s) + "'");
}

std::string_view sweep_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::exit_time:
    case ExperimentKind::transition_time: return "a";
    case ExperimentKind::particle_sweep: return "n";
    case ExperimentKind::entry_time: return "radius";
    case ExperimentKind::single_trajectory: return "none";
  }
  return "none";
}

ExperimentSetup default_setup(ExperimentKind kind, ObjectiveSpec objective) {
  ExperimentSetup s;
  s.kind = kind;
  s.objective = std::move(objective);
  s.methods = {method_by_name("softmin_fixed"), method_by_name("softmin_geometric"),
               method_by_name("annealing_geometric")};
  s.init.radius = 0.1;
  s.init.gauss_std = 0.05;
  switch (kind) {
    case ExperimentKind::exit_time:
      s.methods = {method_by_name("softmin_fixed")};
      s.sigma = 0.1;
      s.sweep = {0.5, 0.75, 1.0, 1.25, 1.5};
      s.stop.kind = StopKind::exit_maximizing_regime;
      s.stop.watched = 0;
      break;
    case ExperimentKind::transition_time:
      if (s.objective.kind == ObjectiveKind::quadruple_well) {
        s.sweep = {2.0, 3.0, 4.0, 5.0};
        s.init.which_minimum = MinimumSelector::highest;
        // The n-scaled drift is stiff in the deep wells: Euler needs
        // n * f'' * dt < 2. gamma keeps the same decay per unit model time.
        s.dt = 0.001;
        s.gamma = std::pow(0.9995, 0.1);
      } else {
        s.sweep = {0.5, 1.0, 1.5, 2.0};
      }
      break;
    case ExperimentKind::particle_sweep:
      s.sweep = {4, 10, 25, 50, 100};
      break;
    case ExperimentKind::entry_time:
      s.sweep = {1, 2, 3, 4, 5};
      s.init.kind = InitKind::circle_around_point;
      s.init.center = Point(s.objective.dimension, 0.0);
      s.init.radius = 1.0;
      break;
    case ExperimentKind::single_trajectory:
      s.methods = {method_by_name("softmin_fixed")};
      s.runs = 1;
      s.max_steps = 10'000;
      s.init.radius = 1.0;
      s.stop.kind = StopKind::none;
      s.trace_stride = 100;
      break;
  }
  return s;
}

void validate(const ExperimentSetup& s) {
  auto fail = [](const std::string& msg) { throw ContractViolation("experiment: " + msg); };
  if (s.runs < 1) fail("runs must be at least 1");
  if (s.n < 1) fail("n must be at least 1");
  if (s.methods.empty()) fail("at least one method is required");
  if (s.threads < 1) fail("threads must be at least 1");
  validate(Schedule{ScheduleKind::geometric, s.beta0, s.gamma});
  validate(IntegratorConfig{s.dt, s.sigma, s.max_steps, 0, Method::softmin_flow});
  const bool sweeps_a =
      s.kind == ExperimentKind::exit_time || s.kind == ExperimentKind::transition_time;
  if (sweeps_a && !s.sweep.empty() && !s.objective.params.contains("a")) {
    fail(s.objective.name + " has no parameter 'a' to sweep");
  }
  for (double v : s.sweep) {
    if (!std::isfinite(v)) fail("sweep values must be finite");
  }
  switch (s.kind) {
    case ExperimentKind::exit_time:
      if (s.objective.maxima.empty()) fail("exit_time needs an objective with a listed maximum");
      if (!(s.sigma > 0.0)) fail("exit_time needs sigma > 0");
      for (const auto& m : s.methods) {
        if (m.dynamics != Method::softmin_flow) fail("exit_time is defined for soft-min methods only");
      }
      break;
    case ExperimentKind::transition_time:
      if (s.objective.kind != ObjectiveKind::double_well &&
          s.objective.kind != ObjectiveKind::quadruple_well) {
        fail("transition_time runs on double_well or quadruple_well");
      }
      if (s.stop.kind != StopKind::enter_ball) fail("transition_time stops on enter_ball");
      break;
    case ExperimentKind::particle_sweep:
      for (double v : s.sweep) {
        if (!(v >= 1.0) || v != std::floor(v)) fail("particle counts must be positive integers");
      }
      break;
    case ExperimentKind::entry_time:
      if (s.objective.kind != ObjectiveKind::ackley) fail("entry_time runs on ackley");
      if (s.init.kind != InitKind::circle_around_point) fail("entry_time uses circle initialization");
      for (double v : s.sweep) {
        if (v < 0.0) fail("radii must be non-negative");
      }
      break;
    case ExperimentKind::single_trajectory:
      if (s.sweep.size() > 1) fail("single_trajectory takes at most one sweep value");
      break;
  }
}

std::vector<TrialPlan> plan_trials(const ExperimentSetup& setup) {
  validate(setup);
  std::vector<std::optional<double>> keys;
  for (double v : setup.sweep) keys.emplace_back(v);
  if (keys.empty()) keys.emplace_back(std::nullopt);

  std::vector<TrialPlan> plans;
  plans.reserve(keys.size() * setup.methods.size() * setup.runs);
  for (std::size_t si = 0; si < keys.size(); ++si) {
    const auto& key = keys[si];
    TrialPlan cell;
    cell.sweep_index = si;
    cell.sweep_key = key;
    cell.spec = setup.objective;
    cell.n = setup.n;
    cell.init = setup.init;
    cell.stop = setup.stop;
    cell.trace_stride = setup.trace_stride;
    cell.attach_theory = setup.kind == ExperimentKind::exit_time;
    if (key) {
      switch (setup.kind) {
        case ExperimentKind::exit_time:
        case ExperimentKind::transition_time:
          cell.spec = with_param(setup.objective, "a", *key);
          break;
        case ExperimentKind::particle_sweep:
          cell.n = static_cast<std::size_t>(*key);
          break;
        case ExperimentKind::entry_time:
          cell.init.radius = *key;
          break;
        case ExperimentKind::single_trajectory:
          if (cell.spec.params.contains("a")) cell.spec = with_param(setup.objective, "a", *key);
          break;
      }
    }
    if (setup.kind == ExperimentKind::exit_time && cell.init.pinned.empty()) {
      cell.init.pinned = {cell.spec.maxima.front().x};
    }
    if (cell.stop.kind == StopKind::enter_ball && cell.stop.targets.empty()) {
      cell.stop.targets =
          cell.init.kind == InitKind::ball_around_minimum
              ? transition_targets(cell.spec, select_minimum(cell.spec, cell.init.which_minimum).x)
              : lowest_minima(cell.spec);
    }
    for (std::size_t mi = 0; mi < setup.methods.size(); ++mi) {
      const MethodSpec& method = setup.methods[mi];
      for (std::size_t r = 0; r < setup.runs; ++r) {
        TrialPlan plan = cell;
        plan.method_index = mi;
        plan.run_index = r;
        plan.seed = derive_seed(setup.master_seed, si, r);
        plan.schedule = Schedule{method.schedule, setup.beta0, setup.gamma};
        plan.cfg = IntegratorConfig{setup.dt, setup.sigma, setup.max_steps, plan.seed, method.dynamics};
        plans.push_back(std::move(plan));
      }
    }
  }
  return plans;
}

TrialOutcome run_trial(const TrialPlan& plan) {
  TrialOutcome out;
  out.result.run_index = plan.run_index;
  out.result.seed = plan.seed;
  try {
    const Swarm initial = init_swarm(plan.spec, plan.init, plan.n, plan.seed);
    if (plan.attach_theory) {
      out.result.theory_exponent =
          kramers_exit_bound(plan.spec, initial, plan.stop.watched.value_or(0),
                             plan.schedule.beta0, plan.cfg.sigma)
              .exponent;
    }
    StopPredicate stop = make_stop_predicate(plan.stop);
    if (plan.trace_stride > 0) {
      const auto f0 = objective_values(initial, plan.spec);
      const auto lowest =
          static_cast<std::size_t>(std::min_element(f0.begin(), f0.end()) - f0.begin());
      stop = [inner = std::move(stop), &out, &plan, lowest](const Swarm& swarm,
                                                          const StepRecord& record) {
        const bool hit = inner(swarm, record);
        if (record.step % plan.trace_stride == 0 || hit || record.step >= plan.cfg.max_steps) {
          out.trace_distance.push_back(nearest_minimum_distance(plan.spec, swarm.row(lowest)));
        }
        return hit;
      };
    }
    SimulationResult sim = run_simulation(initial, plan.spec, plan.schedule, plan.cfg, stop,
                                          TraceOptions{plan.trace_stride, false});
    out.result.hit = sim.hit_step.has_value();
    if (sim.hit_step) out.result.hitting_time = static_cast<double>(*sim.hit_step) * plan.cfg.dt;
    out.result.steps_used = sim.steps_used;
    out.trace = std::move(sim.trace);
  } catch (const DivergenceError& e) {
    out.result.hit = false;
    out.result.hitting_time.reset();
    out.result.diverged = true;
    out.result.steps_used = e.step();
    out.error = e.what();
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSetup& setup, const TrialCallback& on_trial) {
  ExperimentResult result;
  result.plans = plan_trials(setup);
  result.outcomes.resize(result.plans.size());

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.plans.size()) return;
      try {
        TrialOutcome outcome = run_trial(result.plans[i]);
        std::lock_guard lock(mutex);
        result.outcomes[i] = std::move(outcome);
        if (on_trial) on_trial(i, result.outcomes[i]);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(result.plans.size());
        return;
      }
    }
  };
  const unsigned width =
      static_cast<unsigned>(std::min<std::size_t>(setup.threads, result.plans.size()));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(width);
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t methods = setup.methods.size();
  const std::size_t sweeps = result.plans.empty() ? 0 : result.plans.back().sweep_index + 1;
  for (std::size_t si = 0; si < sweeps; ++si) {
    for (std::size_t mi = 0; mi < methods; ++mi) {
      Cell cell;
      cell.sweep_index = si;
      cell.method_index = mi;
      std::vector<TrialResult> trials;
      std::vector<double> exponents;
      for (std::size_t i = 0; i < result.plans.size(); ++i) {
        const auto& plan = result.plans[i];
        if (plan.sweep_index != si || plan.method_index != mi) continue;
        cell.sweep_key = plan.sweep_key;
        trials.push_back(result.outcomes[i].result);
        if (trials.back().theory_exponent) exponents.push_back(*trials.back().theory_exponent);
      }
      cell.stats = aggregate(trials);
      if (!exponents.empty()) {
        cell.theory_exponent = compensated_sum(exponents) / static_cast<double>(exponents.size());
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

namespace {

ExperimentResult run_kind(const ExperimentSetup& setup, ExperimentKind expected) {
  if (setup.kind != expected) {
    throw ContractViolation("experiment: setup is for " + std::string(to_string(setup.kind)) +
                            ", expected " + std::string(to_string(expected)));
  }
  return run_experiment(setup);
}

}  // namespace

ExperimentResult exit_time_experiment(const ExperimentSetup& setup) {
  return run_kind(setup, ExperimentKind::exit_time);
}

ExperimentResult transition_time_experiment(const ExperimentSetup& setup) {
  return run_kind(setup, ExperimentKind::transition_time);
}

ExperimentResult particle_sweep_experiment(const ExperimentSetup& setup) {
  return run_kind(setup, ExperimentKind::particle_sweep);
}

ExperimentResult entry_time_experiment(const ExperimentSetup& setup) {
  return run_kind(setup, ExperimentKind::entry_time);
}

}  // namespace softmin
