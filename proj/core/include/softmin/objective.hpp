#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softmin/swarm.hpp"

namespace softmin {

enum class ObjectiveKind {
  double_well,     // f(x) = x^4/4 - a x^2                       (d = 1)
  quadruple_well,  // f(x,y) = x^4 + y^4 - a (x^2 + y^2) - x y    (d = 2)
  ackley,          // two-dimensional Ackley, f(0,0) = 0          (d = 2)
  quadratic,       // f(x) = (lambda/2) |x|^2                     (any d)
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CriticalPoint {
  Point x;
  double value = 0.0;
};

/// A benchmark potential together with its landscape metadata.
///
/// Critical points are derived analytically when the spec is built. Minima
/// are ordered so that `minima.front()` is the conventional starting well:
/// the negative well of the double well, the global minimum otherwise.
struct ObjectiveSpec {
  std::string name;
  ObjectiveKind kind = ObjectiveKind::quadratic;
  std::size_t dimension = 1;
  std::map<std::string, double> params;
  std::vector<Interval> domain_box;
  std::vector<CriticalPoint> minima;
  std::vector<CriticalPoint> maxima;
  std::vector<CriticalPoint> saddles;
  std::optional<double> strong_convexity_lambda;

  double param(const std::string& key) const;
};

ObjectiveSpec make_double_well(double a);
ObjectiveSpec make_quadruple_well(double a);
ObjectiveSpec make_ackley();
ObjectiveSpec make_quadratic(double lambda, std::size_t dim = 2);

/// Builds a catalog objective by name. Unknown names throw NotFoundError,
/// unknown or out-of-range parameters throw ContractViolation.
ObjectiveSpec make_objective(std::string_view name, const std::map<std::string, double>& params);

/// Parses the addressing form used in configs, e.g. `double_well{a=1.5}`,
/// `quadratic{lambda=2,dim=1}` or plain `ackley`.
ObjectiveSpec parse_objective(std::string_view text);

/// Inverse of parse_objective: `double_well{a=1.5}`.
std::string objective_label(const ObjectiveSpec& spec);

/// Parameters only, `a=1.5` (multiple entries separated by ';').
std::string format_params(const ObjectiveSpec& spec);

double evaluate(const ObjectiveSpec& spec, std::span<const double> x);
void gradient(const ObjectiveSpec& spec, std::span<const double> x, std::span<double> out);
Point gradient(const ObjectiveSpec& spec, std::span<const double> x);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
Point fd_gradient(const ObjectiveSpec& spec, std::span<const double> x, double h = 1e-5);

/// f(over) - f(from_minimum). Both points must be listed critical points
/// (within 1e-9), otherwise NotFoundError.
double barrier_height(const ObjectiveSpec& spec, std::span<const double> from_minimum,
                      std::span<const double> over);

/// Closest listed critical point of any type within `tol`, if any.
const CriticalPoint* find_critical_point(const ObjectiveSpec& spec, std::span<const double> x,
                                         double tol = 1e-9);

class LandscapeCatalog {
 public:
  // Seeded with double_well{a=1}, double_well{a=2}, quadruple_well{a=1},
  // quadruple_well{a=2}, ackley, quadratic{lambda=2,dim=2} and
  // quadratic{lambda=1,dim=1}.
  LandscapeCatalog();

  void add(ObjectiveSpec spec);
  const std::vector<ObjectiveSpec>& entries() const noexcept { return entries_; }
  // Returns the entry with the given label, building it on demand.
  ObjectiveSpec get(std::string_view label) const;

 private:
  std::vector<ObjectiveSpec> entries_;
};

}  // namespace softmin
