#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "softmin/objective.hpp"
#include "softmin/swarm.hpp"

namespace softmin {

/// Kramers-type upper bound on the mean exit time from the maximizing regime,
/// C exp((f(x*) - J_beta(x_0) - 1/beta) / sigma), with the Hessian-dependent
/// constant fixed to C = 1.
struct ExitBound {
  double exponent = 0.0;
  double c_constant = 1.0;
  double bound_value = 0.0;
};

/// The watched particle must sit (within 1e-9) at a listed maximum of `spec`.
ExitBound kramers_exit_bound(const ObjectiveSpec& spec, const Swarm& initial, std::size_t watched,
                             double beta, double sigma);

struct RateFit {
  double lambda_fit = 0.0;              // OLS slope of -log d(t) against t
  std::optional<double> lambda_theory;  // strong convexity constant, if known
  double r_squared = 0.0;
  std::size_t samples_used = 0;
};

/// Least squares on -log distance. The series is truncated at the first
/// distance below 1e-14; at least 10 samples must remain.
RateFit fit_convergence_rate(std::span<const double> times, std::span<const double> distances,
                             std::optional<double> lambda_theory = std::nullopt);

struct MaximizingProbability {
  double probability = 0.0;
  // beta * (max_D f - min_D f) > 1; estimated over a grid of the domain box.
  bool hypothesis_holds = false;
};

/// Fraction of `samples` swarms of n particles, uniform on the domain box,
/// that contain at least one particle with A^(k) > 0. Deterministic in
/// (seed, samples).
MaximizingProbability maximizing_probability(const ObjectiveSpec& spec, double beta, std::size_t n,
                                             std::size_t samples, std::uint64_t seed);

}  // namespace softmin
