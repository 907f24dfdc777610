#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levyspde/error.hpp"
#include "levyspde/functionals.hpp"
#include "levyspde/moments.hpp"
#include "oracles.hpp"

using namespace levyspde;
using std::numbers::pi;

namespace {

double normal_pdf(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2 * pi * var); }

// (2t)^{1-1/a} (-Gamma(1/a - 1)) / (2 a pi): heat variance of delta_0 under |xi|^a
double stable_heat_variance(double a, double t) {
  return std::pow(2 * t, 1 - 1 / a) * -std::tgamma(1 / a - 1) / (2 * a * pi);
}

// (1/pi) (2/a) C t^{3-2/a}/(3-2/a) with C = integral sin^2 v v^{mu-1}, mu = 2/a - 2
double stable_wave_variance(double a, double t) {
  const double mu = 2 / a - 2;
  const double c = a == 2.0 ? pi / 2 : -std::tgamma(mu) * std::cos(pi * mu / 2) / std::pow(2.0, mu + 1);
  return (2 / a) * c * std::pow(t, 3 - 2 / a) / (3 - 2 / a) / pi;
}

std::vector<Symbol> matrix_symbols() {
  return {Symbol::brownian(), Symbol::stable(1.5), Symbol::stable(1.2)};
}

std::vector<TestFunction> matrix_functions() {
  return {TestFunction::delta(0.0), TestFunction::gaussian(0.0, 1.0), TestFunction::box(0.3, 0.5)};
}

void expect_margin(const InequalityReport& r, const std::string& what) {
  EXPECT_TRUE(r.pass) << what;
  EXPECT_GT(r.margin_lo, 10 * r.tolerance) << what << " lower " << r.lower << " middle " << r.middle;
  EXPECT_GT(r.margin_hi, 10 * r.tolerance) << what << " upper " << r.upper << " middle " << r.middle;
}

}  // namespace

TEST(HeatKernel, SeriesBranchContinuity) {
  for (double t : {0.5, 2.0}) {
    for (double u : {1e-8 / t, 0.4e-4 / t, 0.6e-4 / t, 1e-2 / t, 3.0 / t}) {
      const double exact = -std::expm1(-2.0 * u * t) / (2.0 * u);
      EXPECT_NEAR(heat_kernel(u, t), exact, 1e-13 * exact) << u;
    }
    EXPECT_NEAR(heat_kernel(1e-30, t), t, 1e-15);
  }
}

TEST(HeatVariance, ZeroTime) {
  EXPECT_EQ(heat_variance(Symbol::stable(1.5), TestFunction::delta(0.0), 0.0).value, 0.0);
}

TEST(HeatVariance, BrownianDelta) {
  for (double t : {0.25, 1.0, 4.0}) {
    EXPECT_NEAR(heat_variance(Symbol::brownian(), TestFunction::delta(0.0), t).value,
                std::sqrt(t / (2 * pi)), 1e-9 * std::sqrt(t));
  }
}

TEST(HeatVariance, BrownianDeltaTwoDimensionalBruteForce) {
  // integral over s in [0, 1] of (1/pi) integral_0^inf e^{-2 s xi^2} d xi, the xi integral by quadrature
  auto inner = [](double s) {
    const double cut = 12.0 / std::sqrt(s);
    return oracle::composite([s](double x) { return std::exp(-2 * s * x * x); }, 0.0, cut, 40) / pi;
  };
  // s = u^2 removes the endpoint singularity
  const double brute = oracle::composite([&](double u) { return 2 * u * inner(u * u); }, 1e-300, 1.0, 20);
  EXPECT_NEAR(heat_variance(Symbol::brownian(), TestFunction::delta(0.0), 1.0).value, brute, 1e-8);
}

TEST(HeatVariance, StableGammaClosedForm) {
  for (double a : {1.2, 1.5, 1.8}) {
    for (double t : {0.3, 1.0, 3.0}) {
      const double v = heat_variance(Symbol::stable(a), TestFunction::delta(0.0), t).value;
      EXPECT_NEAR(v, stable_heat_variance(a, t), 1e-9 * v) << a << " " << t;
    }
  }
}

TEST(HeatVariance, ContractionBound) {
  for (const auto& sym : matrix_symbols()) {
    for (double t : {0.5, 2.0}) {
      const auto g = TestFunction::gaussian(0.0, 0.7);
      EXPECT_LE(heat_variance(sym, g, t).value, t * g.l2_norm_squared());
    }
  }
}

TEST(HeatVariance, MonotoneInTime) {
  double prev = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double v = heat_variance(Symbol::stable(1.5), TestFunction::box(0.0, 0.2), t).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(HeatIncrement, BilinearityIdentity) {
  const auto sym = Symbol::brownian();
  const auto d = TestFunction::delta(0.0);
  const double inc = heat_increment_variance(sym, d, 1.0, 0.1).value;
  const double a = heat_variance(sym, d, 1.1).value;
  const double b = heat_variance(sym, d, 1.0).value;
  const double c = heat_cross_covariance(sym, d, d, 1.0, 1.1).value;
  EXPECT_NEAR(inc, a + b - 2 * c, 1e-8);
  EXPECT_EQ(heat_increment_variance(sym, d, 1.0, 0.0).value, 0.0);
}

TEST(HeatIncrement, AsymmetricIdentity) {
  LevyTriplet tr;
  tr.sigma2 = 0.8;
  tr.drift = 0.7;
  const auto sym = Symbol::levy_khintchine(tr);
  const auto g = TestFunction::gaussian(0.2, 0.4);
  const double inc = heat_increment_variance(sym, g, 0.6, 0.3).value;
  const double a = heat_variance(sym, g, 0.9).value;
  const double b = heat_variance(sym, g, 0.6).value;
  const double c = heat_cross_covariance(sym, g, g, 0.6, 0.9).value;
  EXPECT_NEAR(inc, a + b - 2 * c, 1e-9);
}

TEST(HeatIncrement, ReducesToVarianceAtZero) {
  const auto sym = Symbol::stable(1.5);
  const auto d = TestFunction::delta(0.0);
  EXPECT_NEAR(heat_increment_variance(sym, d, 0.0, 0.2).value, heat_variance(sym, d, 0.2).value, 1e-12);
}

TEST(HeatCrossCovariance, DiagonalAndZero) {
  const auto sym = Symbol::stable(1.5);
  const auto d = TestFunction::delta(0.0);
  EXPECT_EQ(heat_cross_covariance(sym, d, d, 0.0, 1.0).value, 0.0);
  EXPECT_NEAR(heat_cross_covariance(sym, d, d, 0.7, 0.7).value, heat_variance(sym, d, 0.7).value, 1e-12);
  EXPECT_THROW(heat_cross_covariance(sym, d, d, 1.0, 0.5), Error);
}

TEST(HeatCrossCovariance, BrownianGaussianBruteForce) {
  // (1/pi) int_0^s dr int_0^inf e^{-(t - r) xi^2 - (s - r) xi^2 - xi^2} d xi
  const double s = 0.5, t = 1.0;
  auto inner = [&](double r) {
    const double c = t + s - 2 * r + 1.0;
    return oracle::composite([c](double x) { return std::exp(-c * x * x); }, 0.0, 12.0, 60) / pi;
  };
  const double brute = oracle::composite(inner, 0.0, s, 20);
  const auto g = TestFunction::gaussian(0.0, 1.0);
  EXPECT_NEAR(heat_cross_covariance(Symbol::brownian(), g, g, s, t).value, brute, 1e-7);
}

TEST(HeatCrossCovariance, AsymmetricRealSpaceOracle) {
  // X_u ~ N(b u, sigma2 u); P*_u maps the N(a, w^2) density to the N(a + b u, w^2 + sigma2 u) density.
  LevyTriplet tr;
  tr.sigma2 = 0.8;
  tr.drift = 0.7;
  const auto sym = Symbol::levy_khintchine(tr);
  const double a = 0.3, w = 0.5, c = -0.4, v = 0.8;
  const auto phi = TestFunction::gaussian(a, w);
  const auto psi = TestFunction::gaussian(c, v);
  for (auto [s, t] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.5}, std::pair{0.8, 0.8}}) {
    auto integrand = [&](double r) {
      return normal_pdf(a - c + tr.drift * (t - s), w * w + v * v + tr.sigma2 * (t + s - 2 * r));
    };
    const double oracle_value = oracle::composite(integrand, 0.0, s, 20);
    EXPECT_NEAR(heat_cross_covariance(sym, phi, psi, s, t).value, oracle_value, 1e-10) << s << " " << t;
  }
  // drift direction matters: the mirrored oracle differs
  auto mirrored = [&](double r) {
    return normal_pdf(a - c - tr.drift * 0.5, w * w + v * v + tr.sigma2 * (1.5 - 2 * r));
  };
  EXPECT_GT(std::abs(heat_cross_covariance(sym, phi, psi, 0.5, 1.0).value -
                     oracle::composite(mirrored, 0.0, 0.5, 20)),
            1e-4);
}

TEST(HeatCrossCovariance, SymmetricAndAdditive) {
  const auto sym = Symbol::stable(1.5);
  const auto f = TestFunction::gaussian(0.0, 0.5), g = TestFunction::box(0.4, 0.3),
             h = TestFunction::gaussian(-0.2, 0.9);
  const double fg = heat_cross_covariance(sym, f, g, 0.6, 0.6).value;
  const double gf = heat_cross_covariance(sym, g, f, 0.6, 0.6).value;
  EXPECT_NEAR(fg, gf, 1e-12);
  const double sum = heat_cross_covariance(sym, f + h, g, 0.4, 0.9).value;
  const double parts = heat_cross_covariance(sym, f, g, 0.4, 0.9).value +
                       heat_cross_covariance(sym, h, g, 0.4, 0.9).value;
  EXPECT_NEAR(sum, parts, 1e-10);
}

TEST(WaveMode, DiagonalMatchesTimeIntegral) {
  for (double psi : {1e-8, 0.3, 4.0, 900.0}) {
    const double w = std::sqrt(psi);
    for (double t : {0.2, 1.0, 3.0}) {
      const double brute =
          oracle::composite([&](double s) { return std::pow(std::sin(w * s), 2) / psi; }, 0.0, t, 200);
      EXPECT_NEAR(wave_mode_covariance(psi, t, t), brute, 1e-12 * (1 + brute)) << psi << " " << t;
      const double s = 0.6 * t;
      const double cross = oracle::composite(
          [&](double r) { return std::sin(w * (t - r)) * std::sin(w * (s - r)) / psi; }, 0.0, s, 200);
      EXPECT_NEAR(wave_mode_covariance(psi, s, t), cross, 1e-12 * (1 + std::abs(cross)));
      const double eps = 0.15;
      const double inc = wave_mode_covariance(psi, t + eps, t + eps) + wave_mode_covariance(psi, t, t) -
                         2 * wave_mode_covariance(psi, t, t + eps);
      EXPECT_NEAR(wave_mode_increment(psi, t, eps), inc, 1e-11 * (1 + inc));
    }
  }
}

TEST(WaveVariance, Basics) {
  const auto d = TestFunction::delta(0.0);
  EXPECT_EQ(wave_variance(Symbol::stable(1.5), d, 0.0).value, 0.0);
  for (double t : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(wave_variance(Symbol::brownian(), d, t).value, t * t / 4, 1e-9 * t * t);
  }
  try {
    wave_variance(Symbol::stable(1.5, 1.0, 0.5), d, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::symmetry_required);
  }
}

TEST(WaveVariance, StableGammaClosedForm) {
  for (double a : {1.2, 1.5, 2.0}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double v = wave_variance(Symbol::stable(a), TestFunction::delta(0.0), t).value;
      EXPECT_NEAR(v, stable_wave_variance(a, t), 1e-9 * v) << a << " " << t;
    }
  }
}

TEST(WaveVariance, GaussianTwoDimensionalBruteForce) {
  // (1/pi) int_0^inf e^{-w^2 xi^2} int_0^t sin^2(s sqrt(Psi)) / Psi ds d xi
  for (const auto& sym : {Symbol::stable(1.5), Symbol::stable(1.2)}) {
    const double t = 1.0, w = 0.5;
    auto outer = [&](double x) {
      const double p = sym.real_part(x);
      if (p == 0.0) return t * t * t / 3;
      const double om = std::sqrt(p);
      const int panels = 4 + static_cast<int>(om * t);
      return std::exp(-w * w * x * x) *
             oracle::composite([&](double s) { return std::pow(std::sin(om * s), 2) / p; }, 0.0, t, panels);
    };
    const double brute = oracle::composite(outer, 0.0, 14.0, 400) / pi;
    const double v = wave_variance(sym, TestFunction::gaussian(0.0, w), t).value;
    EXPECT_NEAR(v, brute, 1e-9 * v);
  }
}

TEST(WaveVariance, PlancherelBoundAndMonotone) {
  const auto g = TestFunction::gaussian(0.0, 0.6);
  double prev = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double v = wave_variance(Symbol::stable(1.5), g, t).value;
    EXPECT_LE(v, t * t * t / 3 * g.l2_norm_squared());
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(WaveIncrement, BilinearityIdentity) {
  const auto sym = Symbol::stable(1.5);
  const auto d = TestFunction::delta(0.0);
  for (auto [t, e] : {std::pair{1.0, 0.1}, std::pair{4.0, 0.01}, std::pair{0.0, 0.3}}) {
    const double inc = wave_increment_variance(sym, d, t, e).value;
    const double a = wave_variance(sym, d, t + e).value;
    const double b = t > 0 ? wave_variance(sym, d, t).value : 0.0;
    const double c = t > 0 ? wave_cross_covariance(sym, d, d, t, t + e).value : 0.0;
    EXPECT_NEAR(inc, a + b - 2 * c, 1e-8 * (a + b)) << t << " " << e;
  }
}

TEST(Suites, HeatQuasiIsometryExamples) {
  const auto r = verify_heat_quasi_isometry(Symbol::brownian(), TestFunction::delta(0.0), 1.0, 1.0);
  expect_margin(r, "brownian");
  EXPECT_NEAR(r.middle, std::sqrt(1 / (2 * pi)), 1e-9);
  EXPECT_NEAR(r.lower, (1 - std::exp(-2.0)) / 4, 1e-9);
  EXPECT_NEAR(r.upper, std::exp(2.0) / 4, 1e-9);
  // lambda = t: constants (1 - e^-2)/2 > 1/3 and e^2/2 < 4
  for (double t : {0.5, 2.0}) {
    const auto s = verify_heat_quasi_isometry(Symbol::stable(1.5), TestFunction::delta(0.0), t, t);
    const double e = energy_E(Symbol::stable(1.5), TestFunction::delta(0.0), t).value;
    EXPECT_GT(s.lower, e / 3);
    EXPECT_LT(s.upper, 4 * e);
    expect_margin(s, "lambda = t");
  }
  const auto z = verify_heat_quasi_isometry(Symbol::brownian(), TestFunction::delta(0.0), 0.0, 1.0);
  EXPECT_TRUE(z.pass);
  EXPECT_EQ(z.lower + z.middle + z.upper, 0.0);
}

TEST(Suites, ProbeMatrix) {
  for (const auto& sym : matrix_symbols()) {
    for (const auto& phi : matrix_functions()) {
      for (double t : {0.5, 1.0, 2.0}) {
        const std::string tag = sym.describe() + " " + phi.describe() + " t=" + std::to_string(t);
        for (double l : {0.5, 1.0, 2.0}) expect_margin(verify_heat_quasi_isometry(sym, phi, t, l), tag);
        for (double e : {0.01, 0.1, 0.5}) {
          expect_margin(verify_heat_temporal_bounds(sym, phi, t, e), tag + " heat eps");
          expect_margin(verify_wave_temporal_bounds(sym, phi, t, e), tag + " wave eps");
        }
        expect_margin(verify_wave_quasi_isometry(sym, phi, t), tag + " wave");
      }
    }
    for (double t : {0.5, 1.0, 2.0}) {
      for (double r : {0.05, 0.5, 2.0}) expect_margin(verify_spatial_bounds(sym, t, 0.0, r), sym.describe());
    }
  }
}

TEST(Suites, DegenerateCases) {
  const auto d = TestFunction::delta(0.0);
  EXPECT_TRUE(verify_heat_temporal_bounds(Symbol::brownian(), d, 1.0, 0.0).pass);
  EXPECT_TRUE(verify_wave_quasi_isometry(Symbol::brownian(), d, 0.0).pass);
  const auto same = verify_spatial_bounds(Symbol::stable(1.5), 1.0, 0.3, 0.3);
  EXPECT_TRUE(same.pass);
  EXPECT_EQ(same.middle, 0.0);
  EXPECT_THROW(verify_wave_quasi_isometry(Symbol::stable(1.5, 1.0, 0.3), d, 1.0), Error);
}

TEST(Suites, BrownianSpatialClosedForms) {
  const auto r = verify_spatial_bounds(Symbol::brownian(), 1.0, 0.0, 1.0);
  const double h = (1 - std::exp(-1.0)) / 2;
  EXPECT_NEAR(r.lower, (1 - std::exp(-2.0)) * h, 1e-9);
  EXPECT_NEAR(r.upper, std::exp(2.0) * h, 1e-8);
  EXPECT_GT(r.middle, 0.8647 * 0.3161);
  EXPECT_LT(r.middle, 7.389 * 0.3161);
}

TEST(Suites, CsvRow) {
  const auto r = InequalityReport::make("q", 1.0, 2.0, 3.0, 0.0);
  EXPECT_EQ(InequalityReport::csv_header(), "quantity,lower,middle,upper,margin_lo,margin_hi,pass");
  EXPECT_EQ(r.csv_row(), "q,1,2,3,1,1,true");
  EXPECT_FALSE(InequalityReport::make("q", 2.0, 1.0, 3.0, 0.5).pass);
  EXPECT_TRUE(InequalityReport::make("q", 2.0, 1.6, 3.0, 0.5).pass);
}

TEST(JointHolder, Brownian) {
  const auto j = joint_holder_exponents(Symbol::brownian());
  EXPECT_NEAR(j.spatial_variance, 1.0, 1e-12);
  EXPECT_NEAR(j.temporal_variance, 0.5, 1e-12);
  EXPECT_NEAR(j.spatial_path, 0.5, 1e-12);
  EXPECT_NEAR(j.temporal_path, 0.25, 1e-12);
  EXPECT_TRUE(j.consistent);
}

TEST(JointHolder, StableRegressionOracle) {
  const auto j = joint_holder_exponents(Symbol::stable(1.5));
  EXPECT_NEAR(j.spatial_path, 0.25, 1e-12);
  EXPECT_NEAR(j.temporal_path, 1.0 / 6, 1e-12);
  EXPECT_NEAR(j.fitted_spatial_path, 0.25, 0.03);
  EXPECT_NEAR(j.fitted_temporal_path, 1.0 / 6, 0.03);
  EXPECT_TRUE(j.consistent);
  EXPECT_THROW(joint_holder_exponents(Symbol::stable(0.9)), Error);
}
