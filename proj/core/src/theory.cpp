#include "softmin/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "softmin/energy.hpp"
#include "softmin/errors.hpp"
#include "softmin/random.hpp"

namespace softmin {

ExitBound kramers_exit_bound(const ObjectiveSpec& spec, const Swarm& initial, std::size_t watched,
                             double beta, double sigma) {
  if (!(sigma > 0.0)) throw ContractViolation("kramers_exit_bound: sigma must be positive");
  if (!(beta > 0.0)) throw ContractViolation("kramers_exit_bound: beta must be positive");
  if (watched >= initial.size()) {
    throw ContractViolation("kramers_exit_bound: watched index out of range");
  }
  const CriticalPoint* top = find_critical_point(spec, initial.row(watched));
  const bool is_max = top != nullptr && std::any_of(spec.maxima.begin(), spec.maxima.end(),
                                                    [&](const CriticalPoint& m) { return &m == top; });
  if (!is_max) {
    throw ContractViolation("kramers_exit_bound: watched particle is not at a listed maximum of " +
                            spec.name);
  }
  const double J0 = softmin_energy(objective_values(initial, spec), beta);
  ExitBound bound;
  bound.exponent = (top->value - J0 - 1.0 / beta) / sigma;
  bound.c_constant = 1.0;
  bound.bound_value = bound.c_constant * std::exp(bound.exponent);
  return bound;
}

RateFit fit_convergence_rate(std::span<const double> times, std::span<const double> distances,
                             std::optional<double> lambda_theory) {
  if (times.size() != distances.size()) {
    throw ContractViolation("fit_convergence_rate: times and distances differ in length");
  }
  std::size_t used = 0;
  while (used < distances.size() && distances[used] >= 1e-14) ++used;
  if (used < 10) {
    throw ContractViolation("fit_convergence_rate: need at least 10 positive samples, have " +
                            std::to_string(used));
  }

  double mean_t = 0.0, mean_y = 0.0;
  std::vector<double> y(used);
  for (std::size_t i = 0; i < used; ++i) {
    y[i] = -std::log(distances[i]);
    mean_t += times[i];
    mean_y += y[i];
  }
  mean_t /= static_cast<double>(used);
  mean_y /= static_cast<double>(used);

  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double dt = times[i] - mean_t;
    const double dy = y[i] - mean_y;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0)) throw ContractViolation("fit_convergence_rate: times are all equal");

  RateFit fit;
  fit.lambda_fit = sty / stt;
  fit.lambda_theory = lambda_theory;
  fit.samples_used = used;
  // A constant series is fitted exactly by a zero slope.
  fit.r_squared = syy > 0.0 ? std::clamp(sty * sty / (stt * syy), 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

// Range of f over the domain box from a tensor grid plus the listed critical points.
double landscape_range(const ObjectiveSpec& spec) {
  const std::size_t d = spec.dimension;
  const std::size_t per_axis = d == 1 ? 2001 : (d == 2 ? 201 : 11);
  std::size_t total = 1;
  for (std::size_t a = 0; a < d && total < 10'000'000; ++a) total *= per_axis;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  Point x(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t a = 0; a < d; ++a) {
      const auto& box = spec.domain_box[a];
      const double frac = static_cast<double>(rest % per_axis) / static_cast<double>(per_axis - 1);
      rest /= per_axis;
      x[a] = box.lo + frac * (box.hi - box.lo);
    }
    const double v = evaluate(spec, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const auto* list : {&spec.minima, &spec.maxima, &spec.saddles}) {
    for (const auto& cp : *list) {
      lo = std::min(lo, cp.value);
      hi = std::max(hi, cp.value);
    }
  }
  return hi - lo;
}

}  // namespace

MaximizingProbability maximizing_probability(const ObjectiveSpec& spec, double beta, std::size_t n,
                                             std::size_t samples, std::uint64_t seed) {
  if (!(beta > 0.0)) throw ContractViolation("maximizing_probability: beta must be positive");
  if (n < 1 || samples < 1) {
    throw ContractViolation("maximizing_probability: need n >= 1 and samples >= 1");
  }
  MaximizingProbability out;
  out.hypothesis_holds = beta * landscape_range(spec) > 1.0;

  const CounterRng rng(seed, Stream::sampling);
  const std::size_t d = spec.dimension;
  std::vector<double> u(n * d);
  std::vector<double> f(n);
  std::size_t with_max = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    rng.fill_uniform(s, u);
    for (std::size_t k = 0; k < n; ++k) {
      Point x(d);
      for (std::size_t a = 0; a < d; ++a) {
        const auto& box = spec.domain_box[a];
        x[a] = box.lo + u[k * d + a] * (box.hi - box.lo);
      }
      f[k] = evaluate(spec, x);
    }
    const Prefactor p = prefactor_from_values(f, beta);
    if (std::any_of(p.values.begin(), p.values.end(), [](double v) { return v > 0.0; })) {
      ++with_max;
    }
  }
  out.probability = static_cast<double>(with_max) / static_cast<double>(samples);
  return out;
}

}  // namespace softmin
