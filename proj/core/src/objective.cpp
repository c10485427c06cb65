#include "softmin/objective.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "softmin/errors.hpp"

namespace softmin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dimension(const ObjectiveSpec& spec, std::size_t got) {
  if (got != spec.dimension) {
    throw ContractViolation(spec.name + ": expected a point of dimension " +
                            std::to_string(spec.dimension) + ", got " + std::to_string(got));
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ContractViolation("cannot parse number '" + std::string(text) + "' in " +
                            std::string(context));
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void add_point(std::vector<CriticalPoint>& out, const ObjectiveSpec& spec, Point x) {
  const double v = evaluate(spec, x);
  out.push_back({std::move(x), v});
}

std::vector<Interval> symmetric_box(double half_width, std::size_t dim) {
  return std::vector<Interval>(dim, Interval{-half_width, half_width});
}

}  // namespace

double ObjectiveSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) {
    throw NotFoundError(name + ": no parameter '" + key + "'");
  }
  return it->second;
}

ObjectiveSpec make_double_well(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ContractViolation("double_well: parameter a must be positive, got " + format_number(a));
  }
  ObjectiveSpec spec;
  spec.name = "double_well";
  spec.kind = ObjectiveKind::double_well;
  spec.dimension = 1;
  spec.params = {{"a", a}};
  spec.domain_box = symmetric_box(2.0 * std::sqrt(a) + 1.0, 1);
  const double well = std::sqrt(2.0 * a);
  add_point(spec.minima, spec, {-well});
  add_point(spec.minima, spec, {well});
  add_point(spec.maxima, spec, {0.0});
  return spec;
}

ObjectiveSpec make_quadruple_well(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ContractViolation("quadruple_well: parameter a must be positive, got " +
                            format_number(a));
  }
  ObjectiveSpec spec;
  spec.name = "quadruple_well";
  spec.kind = ObjectiveKind::quadruple_well;
  spec.dimension = 2;
  spec.params = {{"a", a}};
  spec.domain_box = symmetric_box(2.0 * std::sqrt(a) + 1.0, 2);

  // Along x = y: 4s^3 - (2a + 1)s = 0. Always the global minima.
  const double g = std::sqrt((2.0 * a + 1.0) / 4.0);
  add_point(spec.minima, spec, {g, g});
  add_point(spec.minima, spec, {-g, -g});

  // Along x = -y: 4s^3 - (2a - 1)s = 0, real for a > 1/2. Local minima for
  // a >= 1 (degenerate at a = 1), saddles for 1/2 < a < 1.
  if (a > 0.5) {
    const double s = std::sqrt((2.0 * a - 1.0) / 4.0);
    auto& bucket = a >= 1.0 ? spec.minima : spec.saddles;
    add_point(bucket, spec, {s, -s});
    add_point(bucket, spec, {-s, s});
  }

  // Off-axis saddles: x^2 + y^2 = a/2 and xy = -1/4, distinct for a > 1.
  if (a > 1.0) {
    const double p = std::sqrt((a - 1.0) / 2.0);  // x + y
    const double q = std::sqrt((a + 1.0) / 2.0);  // x - y
    for (double sp : {1.0, -1.0}) {
      for (double sq : {1.0, -1.0}) {
        add_point(spec.saddles, spec, {(sp * p + sq * q) / 2.0, (sp * p - sq * q) / 2.0});
      }
    }
  }

  // Origin: Hessian eigenvalues -2a +- 1.
  add_point(a > 0.5 ? spec.maxima : spec.saddles, spec, {0.0, 0.0});
  return spec;
}

ObjectiveSpec make_ackley() {
  ObjectiveSpec spec;
  spec.name = "ackley";
  spec.kind = ObjectiveKind::ackley;
  spec.dimension = 2;
  spec.domain_box = symmetric_box(5.0, 2);
  add_point(spec.minima, spec, {0.0, 0.0});
  return spec;
}

ObjectiveSpec make_quadratic(double lambda, std::size_t dim) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ContractViolation("quadratic: lambda must be positive, got " + format_number(lambda));
  }
  if (dim < 1) {
    throw ContractViolation("quadratic: dim must be at least 1");
  }
  ObjectiveSpec spec;
  spec.name = "quadratic";
  spec.kind = ObjectiveKind::quadratic;
  spec.dimension = dim;
  spec.params = {{"dim", static_cast<double>(dim)}, {"lambda", lambda}};
  spec.domain_box = symmetric_box(3.0, dim);
  spec.strong_convexity_lambda = lambda;
  add_point(spec.minima, spec, Point(dim, 0.0));
  return spec;
}

ObjectiveSpec make_objective(std::string_view name, const std::map<std::string, double>& params) {
  auto only = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : params) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ContractViolation(std::string(name) + ": unknown parameter '" + key + "'");
      }
    }
  };
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };

  if (name == "double_well") {
    only({"a"});
    return make_double_well(get("a", 1.0));
  }
  if (name == "quadruple_well") {
    only({"a"});
    return make_quadruple_well(get("a", 1.0));
  }
  if (name == "ackley") {
    only({});
    return make_ackley();
  }
  if (name == "quadratic") {
    only({"lambda", "dim"});
    const double dim = get("dim", 2.0);
    if (!(dim >= 1.0) || dim != std::floor(dim) || dim > 1e6) {
      throw ContractViolation("quadratic: dim must be a positive integer");
    }
    return make_quadratic(get("lambda", 1.0), static_cast<std::size_t>(dim));
  }
  throw NotFoundError("unknown objective '" + std::string(name) + "'");
}

ObjectiveSpec parse_objective(std::string_view text) {
  text = trim(text);
  const auto brace = text.find('{');
  if (brace == std::string_view::npos) {
    return make_objective(text, {});
  }
  if (text.back() != '}') {
    throw ContractViolation("objective '" + std::string(text) + "': missing closing brace");
  }
  const std::string_view name = trim(text.substr(0, brace));
  std::string_view body = text.substr(brace + 1, text.size() - brace - 2);
  std::map<std::string, double> params;
  while (!trim(body).empty()) {
    const auto sep = body.find_first_of(",;");
    const std::string_view item = trim(body.substr(0, sep));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ContractViolation("objective '" + std::string(text) + "': expected key=value, got '" +
                              std::string(item) + "'");
    }
    const std::string key(trim(item.substr(0, eq)));
    params[key] = parse_number(trim(item.substr(eq + 1)), text);
    if (sep == std::string_view::npos) break;
    body = body.substr(sep + 1);
  }
  return make_objective(name, params);
}

std::string format_params(const ObjectiveSpec& spec) {
  std::string out;
  for (const auto& [key, value] : spec.params) {
    if (!out.empty()) out += ';';
    out += key + "=" + format_number(value);
  }
  return out;
}

std::string objective_label(const ObjectiveSpec& spec) {
  if (spec.params.empty()) return spec.name;
  std::string body = format_params(spec);
  std::replace(body.begin(), body.end(), ';', ',');
  return spec.name + "{" + body + "}";
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> x) {
  check_dimension(spec, x.size());
  switch (spec.kind) {
    case ObjectiveKind::double_well: {
      const double a = spec.params.at("a");
      const double x2 = x[0] * x[0];
      return 0.25 * x2 * x2 - a * x2;
    }
    case ObjectiveKind::quadruple_well: {
      const double a = spec.params.at("a");
      const double x2 = x[0] * x[0];
      const double y2 = x[1] * x[1];
      return x2 * x2 + y2 * y2 - a * (x2 + y2) - x[0] * x[1];
    }
    case ObjectiveKind::ackley: {
      const double r = std::sqrt(0.5 * (x[0] * x[0] + x[1] * x[1]));
      const double c = 0.5 * (std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]));
      return -20.0 * std::exp(-0.2 * r) - std::exp(c) + std::numbers::e + 20.0;
    }
    case ObjectiveKind::quadratic: {
      const double lambda = spec.params.at("lambda");
      return 0.5 * lambda * std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    }
  }
  return 0.0;
}

void gradient(const ObjectiveSpec& spec, std::span<const double> x, std::span<double> out) {
  check_dimension(spec, x.size());
  check_dimension(spec, out.size());
  switch (spec.kind) {
    case ObjectiveKind::double_well: {
      const double a = spec.params.at("a");
      out[0] = x[0] * x[0] * x[0] - 2.0 * a * x[0];
      return;
    }
    case ObjectiveKind::quadruple_well: {
      const double a = spec.params.at("a");
      out[0] = 4.0 * x[0] * x[0] * x[0] - 2.0 * a * x[0] - x[1];
      out[1] = 4.0 * x[1] * x[1] * x[1] - 2.0 * a * x[1] - x[0];
      return;
    }
    case ObjectiveKind::ackley: {
      const double r = std::sqrt(0.5 * (x[0] * x[0] + x[1] * x[1]));
      const double e = std::exp(0.5 * (std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1])));
      // The radial term has a cone tip at the origin; take the zero subgradient there.
      const double radial = r > 0.0 ? 2.0 * std::exp(-0.2 * r) / r : 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        out[i] = radial * x[i] + std::numbers::pi * std::sin(kTwoPi * x[i]) * e;
      }
      return;
    }
    case ObjectiveKind::quadratic: {
      const double lambda = spec.params.at("lambda");
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = lambda * x[i];
      return;
    }
  }
}

Point gradient(const ObjectiveSpec& spec, std::span<const double> x) {
  Point g(spec.dimension);
  gradient(spec, x, g);
  return g;
}

Point fd_gradient(const ObjectiveSpec& spec, std::span<const double> x, double h) {
  check_dimension(spec, x.size());
  if (!(h > 0.0)) {
    throw ContractViolation("fd_gradient: step h must be positive");
  }
  Point probe(x.begin(), x.end());
  Point g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = evaluate(spec, probe);
    probe[i] = x[i] - h;
    const double down = evaluate(spec, probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

const CriticalPoint* find_critical_point(const ObjectiveSpec& spec, std::span<const double> x,
                                         double tol) {
  if (x.size() != spec.dimension) return nullptr;
  const CriticalPoint* best = nullptr;
  double best_dist = tol;
  for (const auto* list : {&spec.minima, &spec.maxima, &spec.saddles}) {
    for (const auto& cp : *list) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d2 += (cp.x[i] - x[i]) * (cp.x[i] - x[i]);
      const double dist = std::sqrt(d2);
      if (dist <= best_dist) {
        best = &cp;
        best_dist = dist;
      }
    }
  }
  return best;
}

double barrier_height(const ObjectiveSpec& spec, std::span<const double> from_minimum,
                      std::span<const double> over) {
  const CriticalPoint* low = find_critical_point(spec, from_minimum);
  const CriticalPoint* high = find_critical_point(spec, over);
  if (low == nullptr || high == nullptr) {
    throw NotFoundError(spec.name + ": barrier_height needs listed critical points");
  }
  return high->value - low->value;
}

LandscapeCatalog::LandscapeCatalog() {
  entries_.push_back(make_double_well(1.0));
  entries_.push_back(make_double_well(2.0));
  entries_.push_back(make_quadruple_well(1.0));
  entries_.push_back(make_quadruple_well(2.0));
  entries_.push_back(make_ackley());
  entries_.push_back(make_quadratic(2.0, 2));
  entries_.push_back(make_quadratic(1.0, 1));
}

void LandscapeCatalog::add(ObjectiveSpec spec) {
  const std::string label = objective_label(spec);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const ObjectiveSpec& e) { return objective_label(e) == label; });
  if (it != entries_.end()) {
    *it = std::move(spec);
  } else {
    entries_.push_back(std::move(spec));
  }
}

ObjectiveSpec LandscapeCatalog::get(std::string_view label) const {
  const ObjectiveSpec wanted = parse_objective(label);
  const std::string key = objective_label(wanted);
  for (const auto& e : entries_) {
    if (objective_label(e) == key) return e;
  }
  return wanted;
}

}  // namespace softmin
