#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levyspde/error.hpp"
#include "levyspde/quadrature.hpp"

using namespace levyspde;
using std::numbers::pi;

namespace {

HalfLineIntegrand plain(std::function<double(double)> f) {
  HalfLineIntegrand h;
  h.full = std::move(f);
  return h;
}

}  // namespace

TEST(Interval, SmoothAndEndpointSingular) {
  auto r = integrate_interval([](double x) { return std::sin(x); }, 0.0, pi, 1e-14, 1e-14);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  auto s = integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12);
  EXPECT_NEAR(s.value, 2.0, 1e-9);
  EXPECT_GT(s.evaluations, r.evaluations);
}

TEST(HalfLine, Lorentzian) {
  auto r = integrate_halfline(plain([](double x) { return 1.0 / (1.0 + x * x); }), 0.0, {});
  EXPECT_EQ(r.status, QuadStatus::converged);
  EXPECT_NEAR(r.value, pi / 2, 1e-10);
  EXPECT_NEAR(r.tail.p, 2.0, 1e-3);
}

TEST(HalfLine, FractionalPowerDecay) {
  for (double a : {1.2, 1.5, 3.0}) {
    auto r = integrate_halfline(plain([a](double x) { return 1.0 / (1.0 + std::pow(x, a)); }), 0.0, {});
    ASSERT_EQ(r.status, QuadStatus::converged) << a;
    EXPECT_NEAR(r.value, (pi / a) / std::sin(pi / a), 1e-8 * r.value) << a;
  }
}

TEST(HalfLine, LogarithmicTail) {
  // d/dx [-1/log(e + x)] = 1 / ((e + x) log^2(e + x)); the integral from 0 is 1.
  auto f = [](double x) {
    const double l = std::log(std::numbers::e + x);
    return 1.0 / ((std::numbers::e + x) * l * l);
  };
  auto r = integrate_halfline(plain(f), 0.0, {});
  ASSERT_EQ(r.status, QuadStatus::converged);
  EXPECT_NEAR(r.value, 1.0, 1e-6);
}

TEST(HalfLine, DivergentPowerGrowth) {
  auto r = integrate_halfline(plain([](double x) { return 1.0 / (1.0 + std::pow(x, 0.8)); }), 0.0, {});
  EXPECT_EQ(r.status, QuadStatus::divergent);
  EXPECT_NEAR(r.growth_exponent, 0.2, 0.01);
  auto h = integrate_halfline(plain([](double x) { return 1.0 / (1.0 + x); }), 0.0, {});
  EXPECT_EQ(h.status, QuadStatus::divergent);
}

TEST(HalfLine, Oscillatory) {
  HalfLineIntegrand f;
  f.full = [](double x) { return (1.0 - std::cos(x)) / (1.0 + x * x); };
  f.smooth = [](double x) { return 1.0 / (1.0 + x * x); };
  f.oscillations = {{[](double x) { return -1.0 / (1.0 + x * x); }, [](double x) { return x; }}};
  auto r = integrate_halfline(f, 0.0, {});
  ASSERT_EQ(r.status, QuadStatus::converged);
  EXPECT_NEAR(r.value, pi / 2 * (1.0 - std::exp(-1.0)), 1e-9);
}

TEST(HalfLine, PositiveLowerLimit) {
  auto r = integrate_halfline(plain([](double x) { return std::pow(x, -3.0); }), 2.0, {});
  EXPECT_NEAR(r.value, 0.125, 1e-10);
}

TEST(HalfLine, Preconditions) {
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  bad.abs_tol = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_THROW(integrate_halfline(plain([](double) { return 1.0; }), -1.0, {}), Error);
}

TEST(TailFit, RecoversPowerAndLog) {
  QuadratureSpec q;
  auto f = fit_tail([](double x) { return 3.0 * std::pow(x, -2.5); }, 1e6, q);
  EXPECT_TRUE(f.accepted);
  EXPECT_NEAR(f.p, 2.5, 1e-8);
  EXPECT_NEAR(f.q, 0.0, 1e-6);
  auto g = fit_tail([](double x) { return std::pow(x, -1.0) * std::pow(std::log(x), -3.0); }, 1e8, q);
  EXPECT_TRUE(g.snapped);
  EXPECT_NEAR(g.q, 3.0, 1e-6);
  // integral of x^-1 log^-3 x from X is 1 / (2 log^2 X)
  const double X = 1e8;
  EXPECT_NEAR(analytic_tail(g, X, std::pow(X, -1.0) * std::pow(std::log(X), -3.0)),
              0.5 / std::pow(std::log(X), 2.0), 1e-10);
}

TEST(Trend, ThreePoint) {
  double r = 0;
  EXPECT_EQ(three_point_trend(1.0, 1.5, 1.6, &r), Trend::holds);
  EXPECT_NEAR(r, 0.2, 1e-12);
  EXPECT_EQ(three_point_trend(1.0, 2.0, 3.0), Trend::fails);
  EXPECT_EQ(three_point_trend(1.0, 2.0, 2.95), Trend::inconclusive);
  EXPECT_EQ(three_point_trend(0.0, 0.0, 0.0), Trend::holds);
}

TEST(Geometry, SphereArea) {
  EXPECT_DOUBLE_EQ(sphere_area(1), 2.0);
  EXPECT_NEAR(sphere_area(2), 2 * pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * pi, 1e-13);
}

TEST(GaussLegendre, ExactForPolynomials) {
  std::vector<double> x, w;
  for (std::size_t n : {1u, 4u, 7u, 20u}) {
    gauss_legendre(n, -1.0, 3.0, x, w);
    ASSERT_EQ(x.size(), n);
    double sum = 0, poly = 0;
    const int deg = static_cast<int>(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      sum += w[i];
      poly += w[i] * std::pow(x[i], deg);
    }
    EXPECT_NEAR(sum, 4.0, 1e-13);
    EXPECT_NEAR(poly, (std::pow(3.0, deg + 1) - 1.0) / (deg + 1), 1e-11 * std::pow(3.0, deg + 1));
    for (std::size_t i = 1; i < n; ++i) EXPECT_LT(x[i - 1], x[i]);
  }
}
