#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "softmin/objective.hpp"
#include "softmin/swarm.hpp"

namespace softmin {

// Soft-min Energy of a swarm:
//
//   J_beta(x) = sum_i w_i f(x_i),   w_i = exp(-beta f(x_i)) / sum_j exp(-beta f(x_j)).
//
// All exponentials are taken after subtracting min_j f(x_j), so beta * f may
// be arbitrarily large without overflow. beta = 0 gives uniform weights.

std::vector<double> softmin_weights(std::span<const double> f_values, double beta);
double softmin_energy(std::span<const double> f_values, double beta);

struct SoftminState {
  std::vector<double> weights;
  double energy = 0.0;
  std::vector<double> f_values;
  double beta = 0.0;
};

SoftminState softmin_state(std::span<const double> f_values, double beta);

/// f(x_k) and grad f(x_k) for every particle.
struct SwarmEvaluation {
  std::vector<double> f;
  Matrix grad;
};

SwarmEvaluation evaluate_swarm(const Swarm& swarm, const ObjectiveSpec& spec);
std::vector<double> objective_values(const Swarm& swarm, const ObjectiveSpec& spec);

enum class Regime { maximizing, minimizing, strongly_minimizing };
std::string_view to_string(Regime r);

/// A^(k) = beta [f(x_k) - J - 1/beta] n w_k. Particle k's drift is
/// +A^(k) grad f(x_k): positive values ascend f.
struct Prefactor {
  std::vector<double> values;
  std::vector<Regime> regimes;
};

/// Pre-factors from objective values alone. Accepts beta = 0 (all A = -1),
/// which the schedule-driven integrator can reach through underflow.
Prefactor prefactor_from_values(std::span<const double> f_values, double beta);

/// Throws ContractViolation when beta <= 0.
Prefactor prefactor(const Swarm& swarm, const ObjectiveSpec& spec, double beta);

/// Row k = n dJ/dx_k = -A^(k) grad f(x_k). Throws ContractViolation when
/// beta <= 0 or the swarm dimension differs from the objective's.
Matrix softmin_gradient(const Swarm& swarm, const ObjectiveSpec& spec, double beta);

/// n * J_beta, the potential whose gradient is softmin_gradient.
double scaled_energy(const Swarm& swarm, const ObjectiveSpec& spec, double beta);

/// (nd x nd) Hessian of n * J_beta by central differences of the analytic
/// gradient. Index i * d + a addresses coordinate a of particle i.
Matrix scaled_energy_hessian(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                             double h = 1e-5);

enum class StationaryClass { stable_all_min, source_in_component, mixed, not_stationary };
std::string_view to_string(StationaryClass c);

struct StationaryReport {
  std::size_t m = 0;                             // particles with |grad f| < tol_grad
  std::vector<std::size_t> zero_gradient;
  std::vector<std::size_t> threshold_particles;  // |f - J - 1/beta| < tol_level
  bool is_stationary = false;
  StationaryClass classification = StationaryClass::not_stationary;
};

StationaryReport classify_stationary(const Swarm& swarm, const ObjectiveSpec& spec, double beta,
                                     double tol_grad = 1e-8, double tol_level = 1e-6);

/// sum_j exp(-beta f_j) > n exp(-beta f_k), evaluated as
/// mean_j exp(-beta (f_j - f_k)) > 1 after a shift by min f.
bool condition_sum_holds(std::span<const double> f_values, std::size_t k, double beta);

}  // namespace softmin
