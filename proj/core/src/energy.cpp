#include "softmin/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softmin/errors.hpp"

namespace softmin {

namespace {

void check_values(std::span<const double> f, double beta) {
  if (f.empty()) {
    throw ContractViolation("softmin: need at least one objective value");
  }
  if (!std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); })) {
    throw ContractViolation("softmin: objective values must be finite");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ContractViolation("softmin: beta must be finite and non-negative");
  }
}

void check_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ContractViolation("softmin: beta must be positive, got " + std::to_string(beta));
  }
}

void check_swarm(const Swarm& swarm, const ObjectiveSpec& spec) {
  if (swarm.dim() != spec.dimension) {
    throw ContractViolation("softmin: swarm dimension " + std::to_string(swarm.dim()) +
                            " does not match " + spec.name + " dimension " +
                            std::to_string(spec.dimension));
  }
}

// Weights with the min-shift; returns the unnormalized exponentials' sum too.
std::vector<double> shifted_exponentials(std::span<const double> f, double beta, double& sum) {
  const double f_min = *std::min_element(f.begin(), f.end());
  std::vector<double> e(f.size());
  sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    e[i] = std::exp(-beta * (f[i] - f_min));
    sum += e[i];
  }
  return e;
}

double energy_from_weights(std::span<const double> f, std::span<const double> w) {
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  double excess = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) excess += w[i] * (f[i] - *lo);
  return std::min(*lo + excess, *hi);
}

}  // namespace

std::vector<double> softmin_weights(std::span<const double> f_values, double beta) {
  check_values(f_values, beta);
  double sum = 0.0;
  auto w = shifted_exponentials(f_values, beta, sum);
  for (double& v : w) v /= sum;
  return w;
}

double softmin_energy(std::span<const double> f_values, double beta) {
  const auto w = softmin_weights(f_values, beta);
  return energy_from_weights(f_values, w);
}

SoftminState softmin_state(std::span<const double> f_values, double beta) {
  SoftminState s;
  s.weights = softmin_weights(f_values, beta);
  s.energy = energy_from_weights(f_values, s.weights);
  s.f_values.assign(f_values.begin(), f_values.end());
  s.beta = beta;
  return s;
}

SwarmEvaluation evaluate_swarm(const Swarm& swarm, const ObjectiveSpec& spec) {
  check_swarm(swarm, spec);
  SwarmEvaluation ev{std::vector<double>(swarm.size()), Matrix(swarm.size(), swarm.dim())};
  for (std::size_t k = 0; k < swarm.size(); ++k) {
    ev.f[k] = evaluate(spec, swarm.row(k));
    gradient(spec, swarm.row(k), ev.grad.row(k));
  }
  return ev;
}

std::vector<double> objective_values(const Swarm& swarm, const ObjectiveSpec& spec) {
  check_swarm(swarm, spec);
  std::vector<double> f(swarm.size());
  for (std::size_t k = 0; k < swarm.size(); ++k) f[k] = evaluate(spec, swarm.row(k));
  return f;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::maximizing: return "maximizing";
    case Regime::minimizing: return "minimizing";
    case Regime::strongly_minimizing: return "strongly_minimizing";
  }
  return "?";
}

Prefactor prefactor_from_values(std::span<const double> f_values, double beta) {
  const SoftminState s = softmin_state(f_values, beta);
  const std::size_t n = f_values.size();
  Prefactor p{std::vector<double>(n), std::vector<Regime>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    // beta [f - J - 1/beta] == beta (f - J) - 1, which stays finite at beta = 0.
    p.values[k] = (beta * (f_values[k] - s.energy) - 1.0) * static_cast<double>(n) * s.weights[k];
    if (p.values[k] > 0.0) {
      p.regimes[k] = Regime::maximizing;
    } else if (f_values[k] <= s.energy) {
      p.regimes[k] = Regime::strongly_minimizing;
    } else {
      p.regimes[k] = Regime::minimizing;
    }
  }
  return p;
}

Prefactor prefactor(const Swarm& swarm, const ObjectiveSpec& spec, double beta) {
  check_positive_beta(beta);
  return prefactor_from_values(objective_values(swarm, spec), beta);
}

Matrix softmin_gradient(const Swarm& swarm, const ObjectiveSpec& spec, double beta) {
  check_positive_beta(beta);
  SwarmEvaluation ev = evaluate_swarm(swarm, spec);
  const Prefactor p = prefactor_from_values(ev.f, beta);
  for (std::size_t k = 0; k < swarm.size(); ++k) {
    for (double& g : ev.grad.row(k)) g *= -p.values[k];
  }
  return std::move(ev.grad);
}

double scaled_energy(const Swarm& swarm, const ObjectiveSpec& spec, double beta) {
  return static_cast<double>(swarm.size()) * softmin_energy(objective_values(swarm, spec), beta);
}

Matrix scaled_energy_hessian(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                             double h) {
  if (!(h > 0.0)) throw ContractViolation("scaled_energy_hessian: h must be positive");
  const std::size_t dim = swarm.size() * swarm.dim();
  Matrix hess(dim, dim);
  Swarm probe = swarm;
  auto coords = probe.positions().values();
  for (std::size_t j = 0; j < dim; ++j) {
    const double x0 = coords[j];
    coords[j] = x0 + h;
    const Matrix up = softmin_gradient(probe, spec, beta);
    coords[j] = x0 - h;
    const Matrix down = softmin_gradient(probe, spec, beta);
    coords[j] = x0;
    for (std::size_t i = 0; i < dim; ++i) {
      hess(i, j) = (up.values()[i] - down.values()[i]) / (2.0 * h);
    }
  }
  return hess;
}

std::string_view to_string(StationaryClass c) {
  switch (c) {
    case StationaryClass::stable_all_min: return "stable_all_min";
    case StationaryClass::source_in_component: return "source_in_component";
    case StationaryClass::mixed: return "mixed";
    case StationaryClass::not_stationary: return "not_stationary";
  }
  return "?";
}

StationaryReport classify_stationary(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                                     double tol_grad, double tol_level) {
  check_positive_beta(beta);
  if (!(tol_grad > 0.0) || !(tol_level > 0.0)) {
    throw ContractViolation("classify_stationary: tolerances must be positive");
  }
  const SwarmEvaluation ev = evaluate_swarm(swarm, spec);
  const double J = softmin_energy(ev.f, beta);
  StationaryReport report;
  bool covered = true;
  bool zero_grad_at_minima = true;
  for (std::size_t k = 0; k < swarm.size(); ++k) {
    double g2 = 0.0;
    for (double g : ev.grad.row(k)) g2 += g * g;
    const bool flat = std::sqrt(g2) < tol_grad;
    const bool level = std::abs(ev.f[k] - J - 1.0 / beta) < tol_level;
    if (flat) {
      report.zero_gradient.push_back(k);
      const CriticalPoint* cp = find_critical_point(spec, swarm.row(k), 1e-6);
      const bool at_min = cp != nullptr && std::any_of(spec.minima.begin(), spec.minima.end(),
                                                       [&](const CriticalPoint& m) { return &m == cp; });
      zero_grad_at_minima = zero_grad_at_minima && at_min;
    }
    if (level) report.threshold_particles.push_back(k);
    covered = covered && (flat || level);
  }
  report.m = report.zero_gradient.size();
  report.is_stationary = covered;
  const std::size_t n = swarm.size();
  if (!covered) {
    report.classification = StationaryClass::not_stationary;
  } else if (report.m == n && zero_grad_at_minima) {
    report.classification = StationaryClass::stable_all_min;
  } else if (n >= 2 && report.m == n - 1) {
    report.classification = StationaryClass::source_in_component;
  } else {
    report.classification = StationaryClass::mixed;
  }
  return report;
}

bool condition_sum_holds(std::span<const double> f_values, std::size_t k, double beta) {
  check_values(f_values, beta);
  if (k >= f_values.size()) {
    throw ContractViolation("condition_sum_holds: particle index out of range");
  }
  double sum = 0.0;
  const auto e = shifted_exponentials(f_values, beta, sum);
  return sum > static_cast<double>(f_values.size()) * e[k];
}

}  // namespace softmin
