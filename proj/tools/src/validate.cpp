#include "softmin/app/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "softmin/dynamics.hpp"
#include "softmin/random.hpp"
#include "softmin/theory.hpp"

namespace softmin::app {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Swarm uniform_swarm(const ObjectiveSpec& spec, std::size_t n, const CounterRng& rng,
                    std::uint64_t block) {
  Matrix m(n, spec.dimension);
  rng.fill_uniform(block, m.values());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < spec.dimension; ++j) {
      const Interval& box = spec.domain_box[j];
      m(k, j) = box.lo + (box.hi - box.lo) * m(k, j);
    }
  }
  return Swarm(std::move(m));
}

CheckResult objective_gradients(const LandscapeCatalog& catalog, const CounterRng& rng) {
  double worst = 0.0;
  std::string where;
  std::uint64_t block = 0;
  for (const auto& spec : catalog.entries()) {
    for (int i = 0; i < 1000; ++i) {
      const Swarm s = uniform_swarm(spec, 1, rng, block++);
      const Point g = gradient(spec, s.row(0));
      const Point fd = fd_gradient(spec, s.row(0));
      Point diff(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) diff[j] = g[j] - fd[j];
      const double err = norm(diff) / (1.0 + norm(g));
      if (err > worst) {
        worst = err;
        where = objective_label(spec);
      }
    }
  }
  return {"objective gradient vs central differences", worst < 1e-5,
          fmt::format("max rel err {:.2e} ({})", worst, where)};
}

CheckResult critical_points(const LandscapeCatalog& catalog) {
  double worst = 0.0;
  for (const auto& spec : catalog.entries()) {
    for (const auto* list : {&spec.minima, &spec.maxima, &spec.saddles}) {
      for (const auto& cp : *list) worst = std::max(worst, norm(gradient(spec, cp.x)));
    }
  }
  return {"listed critical points are stationary", worst < 1e-8,
          fmt::format("max |grad f| {:.2e}", worst)};
}

CheckResult softmin_gradients(const LandscapeCatalog& catalog, const GradientFn& grad,
                              const CounterRng& rng) {
  constexpr double h = 1e-6;
  double worst = 0.0;
  std::size_t configs = 0;
  std::uint64_t block = 1'000'000;
  for (const auto& spec : catalog.entries()) {
    for (std::size_t n : {1u, 2u, 5u, 20u}) {
      for (double beta : {0.5, 2.0, 10.0}) {
        Swarm s = uniform_swarm(spec, n, rng, block++);
        const Matrix g = grad(s, spec, beta);
        double err2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t j = 0; j < spec.dimension; ++j) {
            const double x0 = s.positions()(k, j);
            s.positions()(k, j) = x0 + h;
            const double up = scaled_energy(s, spec, beta);
            s.positions()(k, j) = x0 - h;
            const double down = scaled_energy(s, spec, beta);
            s.positions()(k, j) = x0;
            const double d = g(k, j) - (up - down) / (2.0 * h);
            err2 += d * d;
          }
        }
        worst = std::max(worst, std::sqrt(err2) / (1.0 + norm(g.values())));
        ++configs;
      }
    }
  }
  return {"soft-min gradient vs differences of n*J", worst < 1e-6,
          fmt::format("{} configs, max rel err {:.2e}", configs, worst)};
}

CheckResult prefactor_identity(const LandscapeCatalog& catalog, const GradientFn& grad,
                               const CounterRng& rng) {
  double worst = 0.0;
  std::uint64_t block = 2'000'000;
  for (const auto& spec : catalog.entries()) {
    const Swarm s = uniform_swarm(spec, 7, rng, block++);
    const Matrix g = grad(s, spec, 2.0);
    const Prefactor a = prefactor(s, spec, 2.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const Point gf = gradient(spec, s.row(k));
      for (std::size_t j = 0; j < gf.size(); ++j) {
        const double expect = -a.values[k] * gf[j];
        worst = std::max(worst, std::abs(g(k, j) - expect) / (1.0 + std::abs(expect)));
      }
    }
  }
  return {"gradient row k equals -A_k grad f(x_k)", worst < 1e-12,
          fmt::format("max deviation {:.2e}", worst)};
}

CheckResult beta_zero(const CounterRng& rng) {
  double worst = 0.0;
  for (std::uint64_t b = 0; b < 50; ++b) {
    std::vector<double> f(3 + b % 17);
    rng.fill_uniform(3'000'000 + b, f);
    for (double& v : f) v = 100.0 * (v - 0.5);
    const auto w = softmin_weights(f, 0.0);
    for (double x : w) worst = std::max(worst, std::abs(x - 1.0 / static_cast<double>(f.size())));
  }
  return {"beta = 0 gives uniform weights", worst < 1e-12, fmt::format("max |w - 1/n| {:.2e}", worst)};
}

CheckResult beta_large(const CounterRng& rng) {
  double worst = 0.0;
  for (std::uint64_t b = 0; b < 50; ++b) {
    std::vector<double> gaps(2 + b % 10);
    rng.fill_uniform(4'000'000 + b, gaps);
    std::vector<double> f{-1.0 + 0.01 * static_cast<double>(b)};
    for (double g : gaps) f.push_back(f.front() + 0.5 + 3.0 * g);
    worst = std::max(worst, std::abs(softmin_energy(f, 50.0) - f.front()));
  }
  return {"beta = 50 recovers the minimum", worst < 1e-8, fmt::format("max |J - min f| {:.2e}", worst)};
}

CheckResult energy_bounds(const CounterRng& rng) {
  std::size_t bad = 0;
  const std::vector<double> betas{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  for (std::uint64_t b = 0; b < 200; ++b) {
    std::vector<double> f(2 + b % 30);
    rng.fill_uniform(5'000'000 + b, f);
    for (double& v : f) v = 20.0 * v - 10.0;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    double prev = softmin_energy(f, 0.0);
    for (double beta : betas) {
      const double j = softmin_energy(f, beta);
      if (j < *lo - 1e-12 || j > *hi + 1e-12 || j > prev + 1e-12) ++bad;
      prev = j;
    }
  }
  return {"min f <= J <= max f, J non-increasing in beta", bad == 0,
          fmt::format("{} violations", bad)};
}

CheckResult highest_particle_bound(const LandscapeCatalog& catalog, const CounterRng& rng) {
  std::size_t checked = 0;
  double worst = -1e300;
  std::uint64_t block = 6'000'000;
  for (const auto& spec : catalog.entries()) {
    for (double beta : {0.5, 2.0, 10.0}) {
      for (int i = 0; i < 100; ++i) {
        const Swarm s = uniform_swarm(spec, 2 + i % 40, rng, block++);
        const auto f = objective_values(s, spec);
        const auto k = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
        if (!condition_sum_holds(f, k, beta)) continue;
        worst = std::max(worst, prefactor_from_values(f, beta).values[k]);
        ++checked;
      }
    }
  }
  return {"pre-factor of the highest particle <= 1", checked > 0 && worst <= 1.0 + 1e-12,
          fmt::format("{} swarms, max A {:.4f}", checked, worst)};
}

CheckResult strongly_minimizing(const LandscapeCatalog& catalog, const CounterRng& rng) {
  std::size_t bad = 0;
  std::size_t seen = 0;
  std::uint64_t block = 7'000'000;
  for (const auto& spec : catalog.entries()) {
    for (double beta : {0.5, 2.0, 10.0}) {
      for (int i = 0; i < 50; ++i) {
        const Swarm s = uniform_swarm(spec, 1 + i % 25, rng, block++);
        const Prefactor a = prefactor(s, spec, beta);
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (a.regimes[k] != Regime::strongly_minimizing) continue;
          ++seen;
          if (a.values[k] > -1.0 + 1e-12) ++bad;
        }
      }
    }
  }
  return {"strongly minimizing implies A <= -1", bad == 0,
          fmt::format("{} particles, {} violations", seen, bad)};
}

CheckResult symmetric_persistence() {
  // Particles evenly spaced on a circle around the quadratic minimum keep
  // equal objective values under the noiseless flow, so A stays -1.
  const ObjectiveSpec spec = make_quadratic(2.0, 2);
  std::vector<Point> pts;
  constexpr std::size_t n = 8;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
    pts.push_back({1.5 * std::cos(t), 1.5 * std::sin(t)});
  }
  const IntegratorConfig cfg{0.001, 0.0, 2000, 1, Method::softmin_flow};
  std::size_t bad = 0;
  run_simulation(Swarm::from_points(pts), spec, Schedule{ScheduleKind::fixed, 2.0, 1.0}, cfg,
                 [&bad](const Swarm&, const StepRecord& r) {
                   for (double a : *r.prefactors) bad += a >= 0.0 ? 1 : 0;
                   return false;
                 });
  return {"regime persistence on a symmetric swarm", bad == 0, fmt::format("{} sign flips", bad)};
}

CheckResult energy_descent(const CounterRng& rng) {
  const ObjectiveSpec spec = make_double_well(1.0);
  std::size_t bad = 0;
  for (std::uint64_t b = 0; b < 5; ++b) {
    const Swarm s = uniform_swarm(spec, 5, rng, 8'000'000 + b);
    const IntegratorConfig cfg{0.001, 0.0, 2000, b, Method::softmin_flow};
    double prev = std::numeric_limits<double>::infinity();
    run_simulation(s, spec, Schedule{ScheduleKind::fixed, 2.0, 1.0}, cfg,
                   [&](const Swarm&, const StepRecord& r) {
                     if (r.energy > prev + 1e-10) ++bad;
                     prev = r.energy;
                     return false;
                   });
  }
  return {"J non-increasing under the noiseless flow", bad == 0, fmt::format("{} increases", bad)};
}

CheckResult rate_fit() {
  const ObjectiveSpec spec = make_quadratic(2.0, 2);
  const Swarm s = Swarm::from_points({{0.3, -0.2}, {1.0, 1.2}, {-1.5, 0.4}, {0.8, -1.7}, {-1.1, -1.3}});
  const IntegratorConfig cfg{0.001, 0.0, 3000, 0, Method::softmin_flow};
  std::vector<double> t;
  std::vector<double> d;
  run_simulation(s, spec, Schedule{ScheduleKind::fixed, 2.0, 1.0}, cfg,
                 [&](const Swarm& sw, const StepRecord& r) {
                   if (r.step % 10 == 0) {
                     t.push_back(r.time);
                     d.push_back(norm(sw.row(0)));
                   }
                   return false;
                 });
  const RateFit fit = fit_convergence_rate(t, d, 2.0);
  return {"convergence rate of a strongly minimizing particle",
          fit.lambda_fit >= 2.0 * (1.0 - 0.02) && fit.r_squared > 0.999,
          fmt::format("lambda_fit {:.4f} (theory 2), r^2 {:.6f}", fit.lambda_fit, fit.r_squared)};
}

CheckResult single_particle_match(const CounterRng& rng) {
  const ObjectiveSpec spec = make_ackley();
  std::size_t bad = 0;
  for (std::uint64_t b = 0; b < 20; ++b) {
    const Swarm s = uniform_swarm(spec, 1, rng, 9'000'000 + b);
    Matrix noise(1, 2);
    draw_noise(b, 0, noise);
    const IntegratorConfig cfg{0.01, 1.0, 1, b, Method::softmin_flow};
    if (!(step_softmin(s, spec, 1.0, cfg, noise) == step_annealing(s, spec, 1.0, cfg, noise))) ++bad;
  }
  return {"n = 1 soft-min step equals annealing step at beta = 1", bad == 0,
          fmt::format("{} mismatches", bad)};
}

CheckResult determinism() {
  const ObjectiveSpec spec = make_double_well(1.0);
  std::vector<Point> pts;
  for (int k = 0; k < 20; ++k) pts.push_back({-1.4 + 0.01 * k});
  const IntegratorConfig cfg{0.01, 1.0, 500, 99, Method::softmin_flow};
  const TraceOptions trace{50, true};
  auto never = [](const Swarm&, const StepRecord&) { return false; };
  const Schedule sched{ScheduleKind::geometric, 2.0, 0.999};
  const auto a = run_simulation(Swarm::from_points(pts), spec, sched, cfg, never, trace);
  const auto b = run_simulation(Swarm::from_points(pts), spec, sched, cfg, never, trace);
  bool same = a.final_swarm == b.final_swarm && a.trace.size() == b.trace.size();
  for (std::size_t i = 0; same && i < a.trace.size(); ++i) {
    same = a.trace[i].energy == b.trace[i].energy && a.trace[i].prefactors == b.trace[i].prefactors;
  }
  return {"seeded runs are bitwise reproducible", same, same ? "identical" : "differs"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const ValidateOptions& options) {
  const LandscapeCatalog catalog;
  const CounterRng rng(options.seed, Stream::sampling);
  return {
      objective_gradients(catalog, rng),
      critical_points(catalog),
      softmin_gradients(catalog, options.gradient, rng),
      prefactor_identity(catalog, options.gradient, rng),
      beta_zero(rng),
      beta_large(rng),
      energy_bounds(rng),
      highest_particle_bound(catalog, rng),
      strongly_minimizing(catalog, rng),
      symmetric_persistence(),
      energy_descent(rng),
      rate_fit(),
      single_particle_match(rng),
      determinism(),
  };
}

int validate(std::ostream& out, const ValidateOptions& options) {
  const auto results = run_invariant_suite(options);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << fmt::format("{}  {:<56} {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    failed += r.passed ? 0 : 1;
  }
  out << fmt::format("{} of {} checks passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace softmin::app
