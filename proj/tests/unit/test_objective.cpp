#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "softmin/errors.hpp"
#include "softmin/objective.hpp"
#include "softmin/random.hpp"

using namespace softmin;

namespace {

double norm(const Point& p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

// Written out independently of the library for cross-checks.
double quadruple(double a, double x, double y) {
  return std::pow(x, 4) + std::pow(y, 4) - a * (x * x + y * y) - x * y;
}

// Newton's method on grad f = 0 from a grid of starts, deduplicated.
std::vector<Point> quadruple_critical_points(double a) {
  std::vector<Point> found;
  for (double x0 = -2.5; x0 <= 2.5; x0 += 0.25) {
    for (double y0 = -2.5; y0 <= 2.5; y0 += 0.25) {
      double x = x0;
      double y = y0;
      for (int it = 0; it < 100; ++it) {
        const double gx = 4 * x * x * x - 2 * a * x - y;
        const double gy = 4 * y * y * y - 2 * a * y - x;
        const double hxx = 12 * x * x - 2 * a;
        const double hyy = 12 * y * y - 2 * a;
        const double det = hxx * hyy - 1.0;
        if (std::abs(det) < 1e-14) break;
        x -= (hyy * gx + gy) / det;
        y -= (hxx * gy + gx) / det;
      }
      const double gx = 4 * x * x * x - 2 * a * x - y;
      const double gy = 4 * y * y * y - 2 * a * y - x;
      if (std::hypot(gx, gy) > 1e-10 || std::abs(x) > 10 || std::abs(y) > 10) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](const Point& p) {
        return std::hypot(p[0] - x, p[1] - y) < 1e-6;
      });
      if (!dup) found.push_back({x, y});
    }
  }
  return found;
}

}  // namespace

TEST(Evaluate, ReferenceValues) {
  EXPECT_NEAR(evaluate(make_ackley(), Point{0.0, 0.0}), 0.0, 1e-14);
  EXPECT_EQ(evaluate(make_quadratic(2.0), Point{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(make_double_well(1.0), Point{1.0}), -0.75);
  const double r = std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(evaluate(make_quadruple_well(1.0), Point{r, r}), -1.125, 1e-14);
}

TEST(Evaluate, AckleyMatchesPrintedFormula) {
  const double x = 0.7;
  const double y = -1.9;
  const double expect = -20.0 * std::exp(-0.2 * std::sqrt(0.5 * (x * x + y * y))) -
                        std::exp(0.5 * (std::cos(2 * M_PI * x) + std::cos(2 * M_PI * y))) +
                        std::exp(1.0) + 20.0;
  EXPECT_NEAR(evaluate(make_ackley(), Point{x, y}), expect, 1e-13);
}

TEST(Evaluate, DimensionMismatch) {
  EXPECT_THROW(evaluate(make_double_well(1.0), Point{1.0, 2.0}), ContractViolation);
  EXPECT_THROW(gradient(make_ackley(), Point{1.0}), ContractViolation);
  EXPECT_THROW(fd_gradient(make_quadratic(1.0, 3), Point{1.0, 2.0}), ContractViolation);
}

TEST(Gradient, ReferenceValues) {
  EXPECT_EQ(gradient(make_double_well(1.0), Point{0.0})[0], 0.0);
  EXPECT_NEAR(gradient(make_double_well(1.0), Point{std::sqrt(2.0)})[0], 0.0, 1e-14);
  const Point g = gradient(make_quadratic(2.0), Point{1.0, 1.0});
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 2.0);
}

TEST(Gradient, AckleyOriginIsZero) {
  const Point g = gradient(make_ackley(), Point{0.0, 0.0});
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
}

TEST(FdGradient, Examples) {
  const Point q = fd_gradient(make_quadratic(2.0), Point{1.0, 0.0}, 1e-5);
  EXPECT_NEAR(q[0], 2.0, 1e-8);
  EXPECT_NEAR(q[1], 0.0, 1e-8);

  const auto dw = make_double_well(1.0);
  const double g = gradient(dw, Point{1.3})[0];
  EXPECT_NEAR(fd_gradient(dw, Point{1.3}, 1e-5)[0], g, 1e-7 * std::abs(g));

  const auto ack = make_ackley();
  const Point ga = gradient(ack, Point{0.5, -0.3});
  const Point fa = fd_gradient(ack, Point{0.5, -0.3}, 1e-6);
  EXPECT_LT(std::hypot(ga[0] - fa[0], ga[1] - fa[1]), 1e-5 * norm(ga));
}

TEST(BarrierHeight, DoubleWell) {
  const auto a1 = make_double_well(1.0);
  EXPECT_NEAR(barrier_height(a1, Point{-std::sqrt(2.0)}, Point{0.0}), 1.0, 1e-12);
  const auto a2 = make_double_well(2.0);
  EXPECT_NEAR(barrier_height(a2, Point{-2.0}, Point{0.0}), 4.0, 1e-12);
}

TEST(BarrierHeight, QuadrupleWellGap) {
  const auto q = make_quadruple_well(1.0);
  const double g = std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(barrier_height(q, Point{g, g}, Point{0.5, -0.5}), 1.0, 1e-12);
}

TEST(BarrierHeight, UnlistedPointThrows) {
  const auto dw = make_double_well(1.0);
  EXPECT_THROW(barrier_height(dw, Point{-1.0}, Point{0.0}), NotFoundError);
  EXPECT_THROW(barrier_height(dw, Point{-std::sqrt(2.0)}, Point{0.3}), NotFoundError);
}

TEST(Landscape, DoubleWellMetadata) {
  for (double a : {0.25, 1.0, 2.0, 3.5}) {
    const auto s = make_double_well(a);
    ASSERT_EQ(s.minima.size(), 2u);
    EXPECT_NEAR(s.minima[0].x[0], -std::sqrt(2 * a), 1e-14);
    EXPECT_NEAR(s.minima[1].x[0], std::sqrt(2 * a), 1e-14);
    EXPECT_NEAR(s.minima[0].value, -a * a, 1e-12);
    EXPECT_NEAR(s.domain_box[0].hi, 2 * std::sqrt(a) + 1, 1e-14);
    EXPECT_FALSE(s.strong_convexity_lambda.has_value());
  }
}

TEST(Landscape, QuadrupleWellMatchesNewtonOracle) {
  for (double a : {0.75, 1.5, 2.0, 3.0, 5.0}) {
    const auto spec = make_quadruple_well(a);
    const auto oracle = quadruple_critical_points(a);
    std::vector<const CriticalPoint*> listed;
    for (const auto* list : {&spec.minima, &spec.maxima, &spec.saddles}) {
      for (const auto& cp : *list) listed.push_back(&cp);
    }
    EXPECT_EQ(listed.size(), oracle.size()) << "a=" << a;
    for (const Point& p : oracle) {
      const CriticalPoint* cp = find_critical_point(spec, p, 1e-7);
      ASSERT_NE(cp, nullptr) << "a=" << a << " missing (" << p[0] << ", " << p[1] << ")";
      EXPECT_NEAR(cp->value, quadruple(a, p[0], p[1]), 1e-10);
    }
    const double g2 = (2 * a + 1) / 4;
    EXPECT_NEAR(spec.minima.front().value, -(2 * a + 1) * (2 * a + 1) / 8, 1e-12);
    EXPECT_NEAR(spec.minima.front().x[0], std::sqrt(g2), 1e-12);
  }
}

TEST(Landscape, QuadrupleWellClassification) {
  // At a = 3 the x = -y branch is a local minimum, guarded by four off-axis
  // saddles at height -a^2/4 + 1/8.
  const auto s = make_quadruple_well(3.0);
  EXPECT_EQ(s.minima.size(), 4u);
  EXPECT_EQ(s.maxima.size(), 1u);
  EXPECT_EQ(s.saddles.size(), 4u);
  for (const auto& sd : s.saddles) EXPECT_NEAR(sd.value, -9.0 / 4 + 0.125, 1e-12);
  const double local = -(2 * 3.0 - 1) * (2 * 3.0 - 1) / 8;
  const auto& hi = *std::max_element(s.minima.begin(), s.minima.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
  EXPECT_NEAR(hi.value, local, 1e-12);
  EXPECT_NEAR(barrier_height(s, hi.x, s.saddles.front().x), (3.0 - 1) * (3.0 - 1) / 4, 1e-12);
}

// Every catalog entry: analytic gradient agrees with central differences on
// 1000 points of the domain box.
TEST(Property, CatalogGradientsMatchFiniteDifferences) {
  const LandscapeCatalog catalog;
  const CounterRng rng(1234, Stream::sampling);
  std::uint64_t block = 0;
  for (const auto& spec : catalog.entries()) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Point x(spec.dimension);
      rng.fill_uniform(block++, x);
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = spec.domain_box[j].lo + (spec.domain_box[j].hi - spec.domain_box[j].lo) * x[j];
      }
      const Point g = gradient(spec, x);
      const Point fd = fd_gradient(spec, x, 1e-5);
      Point d(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) d[j] = g[j] - fd[j];
      worst = std::max(worst, norm(d) / (1.0 + norm(g)));
    }
    EXPECT_LT(worst, 1e-5) << objective_label(spec);
  }
}

TEST(Property, ListedCriticalPointsAreStationaryAndOrdered) {
  const LandscapeCatalog catalog;
  for (const auto& spec : catalog.entries()) {
    double lowest_other = std::numeric_limits<double>::infinity();
    for (const auto* list : {&spec.maxima, &spec.saddles}) {
      for (const auto& cp : *list) lowest_other = std::min(lowest_other, cp.value);
    }
    for (const auto* list : {&spec.minima, &spec.maxima, &spec.saddles}) {
      for (const auto& cp : *list) {
        EXPECT_LT(norm(gradient(spec, cp.x)), 1e-8) << objective_label(spec);
        EXPECT_NEAR(evaluate(spec, cp.x), cp.value, 1e-12);
        for (std::size_t j = 0; j < spec.dimension; ++j) {
          EXPECT_GE(cp.x[j], spec.domain_box[j].lo);
          EXPECT_LE(cp.x[j], spec.domain_box[j].hi);
        }
      }
    }
    for (const auto& m : spec.minima) EXPECT_LE(m.value, lowest_other) << objective_label(spec);
  }
}

TEST(Property, Symmetries) {
  const auto dw = make_double_well(1.7);
  const auto qw = make_quadruple_well(2.3);
  const CounterRng rng(77, Stream::sampling);
  for (std::uint64_t b = 0; b < 500; ++b) {
    const auto [u, v] = rng.uniform_pair(b, 0);
    const double x = 8 * u - 4;
    const double y = 8 * v - 4;
    EXPECT_EQ(evaluate(dw, Point{x}), evaluate(dw, Point{-x}));
    EXPECT_EQ(evaluate(qw, Point{x, y}), evaluate(qw, Point{-x, -y}));
  }
}

TEST(Property, AckleyNonNegativeWithMinimumAtOrigin) {
  const auto ack = make_ackley();
  const CounterRng rng(5, Stream::sampling);
  for (std::uint64_t b = 0; b < 5000; ++b) {
    const auto [u, v] = rng.uniform_pair(b, 0);
    const Point x{10 * u - 5, 10 * v - 5};
    const double f = evaluate(ack, x);
    EXPECT_GE(f, 0.0);
    if (norm(x) > 1e-6) EXPECT_GT(f, 1e-12);
  }
}

TEST(Catalog, Addressing) {
  const auto s = parse_objective("double_well{a=1.5}");
  EXPECT_EQ(s.kind, ObjectiveKind::double_well);
  EXPECT_EQ(s.param("a"), 1.5);
  EXPECT_EQ(objective_label(s), "double_well{a=1.5}");
  EXPECT_EQ(format_params(s), "a=1.5");

  const auto q = parse_objective(" quadratic{lambda=2, dim=3} ");
  EXPECT_EQ(q.dimension, 3u);
  EXPECT_EQ(q.strong_convexity_lambda, 2.0);
  EXPECT_EQ(parse_objective(objective_label(q)).params, q.params);
  EXPECT_EQ(parse_objective("ackley").dimension, 2u);
}

TEST(Catalog, Errors) {
  EXPECT_THROW(parse_objective("rosenbrock"), NotFoundError);
  EXPECT_THROW(parse_objective("double_well{b=1}"), ContractViolation);
  EXPECT_THROW(parse_objective("double_well{a=-1}"), ContractViolation);
  EXPECT_THROW(parse_objective("double_well{a=x}"), ContractViolation);
  EXPECT_THROW(parse_objective("double_well{a=1"), ContractViolation);
  EXPECT_THROW(make_double_well(1.0).param("lambda"), NotFoundError);
}

TEST(Catalog, ContainsRequiredEntries) {
  const LandscapeCatalog catalog;
  std::set<ObjectiveKind> kinds;
  for (const auto& s : catalog.entries()) kinds.insert(s.kind);
  EXPECT_EQ(kinds.size(), 4u);
  EXPECT_EQ(catalog.get("double_well{a=2}").minima.front().value, -4.0);
  EXPECT_EQ(catalog.get("double_well{a=3}").param("a"), 3.0);
}

TEST(Catalog, AddReplacesByLabel) {
  LandscapeCatalog catalog;
  const auto before = catalog.entries().size();
  catalog.add(make_double_well(7.0));
  EXPECT_EQ(catalog.entries().size(), before + 1);
  EXPECT_EQ(catalog.get("double_well{a=7}").param("a"), 7.0);
}
