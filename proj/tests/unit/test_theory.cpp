#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "softmin/dynamics.hpp"
#include "softmin/energy.hpp"
#include "softmin/errors.hpp"
#include "softmin/theory.hpp"

using namespace softmin;

namespace {

// 99 particles in the left well, the watched one on top of the barrier.
Swarm exit_layout(double a, std::size_t n) {
  std::vector<Point> pts(n, Point{-std::sqrt(2.0 * a)});
  pts[0] = {0.0};
  return Swarm::from_points(pts);
}

}  // namespace

TEST(ExitBound, HandEvaluatedLayout) {
  const auto spec = make_double_well(1.0);
  const ExitBound b = kramers_exit_bound(spec, exit_layout(1.0, 100), 0, 2.0, 0.1);
  // Shifted by +1: 99 weights e^0 and one e^-2.
  const long double e2 = std::exp(-2.0L);
  const long double j0 = -1.0L + e2 / (99.0L + e2);
  EXPECT_NEAR(static_cast<double>(j0), -0.99863, 1e-5);
  EXPECT_NEAR(b.exponent, static_cast<double>((0.0L - j0 - 0.5L) / 0.1L), 1e-12);
  EXPECT_NEAR(b.exponent, 4.986, 1e-3);
  EXPECT_EQ(b.c_constant, 1.0);
  EXPECT_DOUBLE_EQ(b.bound_value, std::exp(b.exponent));
}

TEST(ExitBound, LargeBetaLimit) {
  for (double a : {0.5, 1.0, 1.5}) {
    const auto spec = make_double_well(a);
    const ExitBound b = kramers_exit_bound(spec, exit_layout(a, 100), 0, 1e6, 0.1);
    EXPECT_NEAR(b.exponent, a * a / 0.1, 1e-4);
  }
}

TEST(ExitBound, SigmaScaling) {
  const auto spec = make_double_well(1.2);
  const Swarm s = exit_layout(1.2, 50);
  const double e1 = kramers_exit_bound(spec, s, 0, 2.0, 0.1).exponent;
  const double e2 = kramers_exit_bound(spec, s, 0, 2.0, 0.2).exponent;
  EXPECT_DOUBLE_EQ(e2, e1 / 2.0);
}

TEST(ExitBound, Errors) {
  const auto spec = make_double_well(1.0);
  const Swarm s = exit_layout(1.0, 10);
  EXPECT_THROW(kramers_exit_bound(spec, s, 1, 2.0, 0.1), ContractViolation);
  EXPECT_THROW(kramers_exit_bound(spec, s, 10, 2.0, 0.1), ContractViolation);
  EXPECT_THROW(kramers_exit_bound(spec, s, 0, 2.0, 0.0), ContractViolation);
  EXPECT_THROW(kramers_exit_bound(spec, Swarm::from_points({{0.3}}), 0, 2.0, 0.1), ContractViolation);
}

TEST(ExitBound, ShiftCancellation) {
  std::vector<double> f(100, -1.0);
  f[0] = 0.0;
  const double beta = 2.0;
  const double base = f[0] - softmin_energy(f, beta);
  for (double c : {-50.0, 3.5, 1e3}) {
    std::vector<double> g = f;
    for (double& v : g) v += c;
    EXPECT_NEAR(g[0] - softmin_energy(g, beta), base, 1e-10);
  }
}

TEST(RateFit, ExactExponential) {
  std::vector<double> t, d;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.1 * i);
    d.push_back(std::exp(-3.0 * 0.1 * i));
  }
  const RateFit fit = fit_convergence_rate(t, d, 3.0);
  EXPECT_NEAR(fit.lambda_fit, 3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.samples_used, 50u);
  EXPECT_EQ(fit.lambda_theory, std::optional<double>(3.0));
}

TEST(RateFit, ConstantSeries) {
  std::vector<double> t, d;
  for (int i = 0; i < 20; ++i) {
    t.push_back(i);
    d.push_back(0.7);
  }
  EXPECT_EQ(fit_convergence_rate(t, d).lambda_fit, 0.0);
}

TEST(RateFit, TruncatesAtResolutionFloor) {
  std::vector<double> t, d;
  for (int i = 0; i < 30; ++i) {
    t.push_back(i);
    d.push_back(i < 15 ? std::exp(-2.0 * i) : 0.0);
  }
  const RateFit fit = fit_convergence_rate(t, d);
  EXPECT_EQ(fit.samples_used, 15u);
  EXPECT_NEAR(fit.lambda_fit, 2.0, 1e-10);
}

TEST(RateFit, Errors) {
  const std::vector<double> t(9, 1.0);
  const std::vector<double> d(9, 1.0);
  EXPECT_THROW(fit_convergence_rate(t, d), ContractViolation);
  EXPECT_THROW(fit_convergence_rate(std::vector<double>(12, 1.0), std::vector<double>(11, 1.0)),
               ContractViolation);
  EXPECT_THROW(fit_convergence_rate(std::vector<double>(12, 1.0), std::vector<double>(12, 1.0)),
               ContractViolation);
}

TEST(RateFit, NoiselessQuadraticFlow) {
  const double lambda = 2.0;
  for (double dt : {0.001, 0.005}) {
    const auto spec = make_quadratic(lambda, 2);
    // Particle 0 starts lowest, so it is strongly minimizing throughout.
    std::vector<double> t, d;
    run_simulation(Swarm::from_points({{0.5, -0.3}, {2.0, 1.0}, {-1.5, 2.5}}), spec,
                                    Schedule{ScheduleKind::fixed, 2.0, 1.0},
                                    IntegratorConfig{dt, 0.0, 3000, 0, Method::softmin_flow},
                                    [&](const Swarm& s, const StepRecord& rec) {
                                      if (rec.step % 10 == 0) {
                                        t.push_back(rec.time);
                                        d.push_back(std::hypot(s.row(0)[0], s.row(0)[1]));
                                      }
                                      return false;
                                    });
    const RateFit fit = fit_convergence_rate(t, d, lambda);
    EXPECT_GE(fit.lambda_fit, lambda * (1.0 - 10.0 * dt * lambda)) << "dt " << dt;
    EXPECT_GT(fit.r_squared, 0.99);
  }
}

TEST(MaxProbability, SingleParticleNeverMaximizes) {
  const auto p = maximizing_probability(make_double_well(1.0), 2.0, 1, 500, 1);
  EXPECT_EQ(p.probability, 0.0);
  EXPECT_TRUE(p.hypothesis_holds);
}

TEST(MaxProbability, GrowsWithSwarmSize) {
  const auto spec = make_double_well(1.0);
  const double p5 = maximizing_probability(spec, 2.0, 5, 10'000, 77).probability;
  const double p100 = maximizing_probability(spec, 2.0, 100, 10'000, 77).probability;
  EXPECT_GE(p100, p5);
  EXPECT_GT(p100, 0.99);
}

TEST(MaxProbability, DeterministicAndBounded) {
  const LandscapeCatalog catalog;
  for (const auto& spec : catalog.entries()) {
    const auto a = maximizing_probability(spec, 1.0, 7, 300, 5);
    const auto b = maximizing_probability(spec, 1.0, 7, 300, 5);
    EXPECT_EQ(a.probability, b.probability);
    EXPECT_GE(a.probability, 0.0);
    EXPECT_LE(a.probability, 1.0);
  }
}

TEST(MaxProbability, HypothesisFlag) {
  // x^4/4 - 0.01 x^2 on [-1.2, 1.2] spans about 0.504.
  const auto spec = make_double_well(0.01);
  EXPECT_TRUE(maximizing_probability(spec, 2.5, 4, 10, 0).hypothesis_holds);
  EXPECT_FALSE(maximizing_probability(spec, 1.5, 4, 10, 0).hypothesis_holds);
  EXPECT_FALSE(maximizing_probability(spec, 1e-9, 4, 10, 0).hypothesis_holds);
  EXPECT_THROW(maximizing_probability(spec, 0.0, 4, 10, 0), ContractViolation);
  EXPECT_THROW(maximizing_probability(spec, 1.0, 0, 10, 0), ContractViolation);
}
