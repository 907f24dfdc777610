#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levyspde/error.hpp"
#include "levyspde/rng.hpp"
#include "levyspde/semilinear.hpp"
#include "oracles.hpp"

using namespace levyspde;
using std::numbers::pi;

namespace {

Lattice picard_lattice() {
  Lattice lat{2 * pi, 32, {}};
  for (int i = 0; i <= 32; ++i) lat.times.push_back(i / 32.0);
  return lat;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Nonlinearity, ParseAndBounds) {
  EXPECT_EQ(Nonlinearity::parse("tanh", 2.0).name(), "tanh");
  EXPECT_EQ(Nonlinearity::parse("clipped-sine", 1.0).kind, Nonlinearity::Kind::clipped_sine);
  EXPECT_THROW(Nonlinearity::parse("cubic", 1.0), Error);
  EXPECT_EQ(Nonlinearity::zero().sup(), 0.0);
  EXPECT_EQ(Nonlinearity::constant(-0.3).lipschitz(), 0.0);
  RngStream draw(KeyedRng(4), Stream::semilinear, 0, 0);
  for (const auto& b : {Nonlinearity::scaled_tanh(1.5), Nonlinearity::clipped_sine(0.7), Nonlinearity::constant(2.0)}) {
    for (int i = 0; i < 2000; ++i) {
      const double u = 6 * draw.normal(), v = 6 * draw.normal();
      EXPECT_LE(std::abs(b(u)), b.sup() + 1e-15);
      EXPECT_LE(std::abs(b(u) - b(v)), b.lipschitz() * std::abs(u - v) + 1e-15);
    }
  }
}

TEST(Density, BrownianPeak) {
  const Lattice lat{40.0, 400, {1.0}};
  const auto p = transition_density(Symbol::brownian(), 1.0, lat);
  EXPECT_NEAR(p.at(0), 0.2820948, 1e-6);
  EXPECT_NEAR(p.at(0), 1 / std::sqrt(4 * pi), 1e-9);
  EXPECT_NEAR(p.mass, 1.0, 1e-6);
  double s = 0.0;
  for (double v : p.values) s += v * lat.spacing();
  EXPECT_NEAR(s, 1.0, 1e-12);
  // p_1(x) = e^{-x^2/4} / sqrt(4 pi)
  const int j = 20;
  EXPECT_NEAR(p.at(j), std::exp(-std::pow(lat.x(j), 2) / 4) / std::sqrt(4 * pi), 1e-9);
}

TEST(Density, StableAgainstFourierIntegral) {
  const Lattice lat{16001.0 / 16, 8000, {1.0}};
  const auto p = transition_density(Symbol::stable(1.5), 1.0, lat);
  for (int x : {0, 1, 2}) {
    const double oracle_value =
        oracle::composite([x](double k) { return std::cos(x * k) * std::exp(-std::pow(k, 1.5)); }, 0.0, 40.0, 200) / pi;
    EXPECT_NEAR(p.at(16 * x), oracle_value, 1e-6) << x;
  }
  EXPECT_NEAR(p.mass, 1.0, 1e-6);
}

TEST(Density, SemigroupProperty) {
  const Lattice lat{20.0, 200, {1.0}};
  EXPECT_LT(semigroup_defect(Symbol::brownian(), 0.3, 0.7, lat), 1e-8);
  EXPECT_LT(semigroup_defect(Symbol::stable(1.5), 0.5, 0.5, lat), 1e-8);
}

TEST(Density, Preconditions) {
  const Lattice lat{20.0, 64, {1.0}};
  try {
    transition_density(Symbol::stable(0.8), 1.0, lat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::existence_required);
  }
  EXPECT_THROW(transition_density(Symbol::brownian(), 0.0, lat), Error);
}

TEST(Density, GrowthReport) {
  Lattice lat{10.0, 64, {0.25, 0.5, 1.0, 2.0}};
  const auto g = density_growth(Symbol::brownian(), lat);
  ASSERT_EQ(g.values.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_GT(g.values[i], g.values[i - 1]);
  EXPECT_TRUE(g.bound_holds);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(g.values[i], g.c_fit * std::exp(g.eta_fit * g.times[i]) * (1 + 1e-12));
    EXPECT_LE(g.values[i], g.c_bound * std::exp(2 * g.times[i]));
  }
  EXPECT_GT(g.eta_fit, 0.0);
}

TEST(Picard, ZeroDriftReproducesH) {
  const auto lat = picard_lattice();
  const auto h = simulate_heat_field(Symbol::brownian(), lat, 3, 1)[0];
  const auto r = picard_solve(Symbol::brownian(), Nonlinearity::zero(), h, lat);
  EXPECT_EQ(r.solution.values, h.values);
  EXPECT_TRUE(r.diagnostics.converged);
}

TEST(Picard, ConstantDriftAddsLinearTrend) {
  const auto lat = picard_lattice();
  const auto h = simulate_heat_field(Symbol::stable(1.5), lat, 3, 1)[0];
  const double c = 0.4;
  const auto r = picard_solve(Symbol::stable(1.5), Nonlinearity::constant(c), h, lat);
  const int n = lat.points();
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.times.size(); ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(r.solution.at(i, j) - h.at(i, j) - c * lat.times[i]));
  EXPECT_LT(worst, 1e-8);
}

TEST(Picard, TanhContractsAndSolves) {
  const auto lat = picard_lattice();
  const auto h = simulate_heat_field(Symbol::brownian(), lat, 5, 1)[0];
  const auto b = Nonlinearity::scaled_tanh(1.0);
  const auto r = picard_solve(Symbol::brownian(), b, h, lat);
  const auto& d = r.diagnostics;
  EXPECT_TRUE(d.converged);
  ASSERT_GE(d.ratios.size(), 1u);
  for (double q : d.ratios) EXPECT_LE(q, 0.55);
  EXPECT_LT(d.residual, 1e-3);
  EXPECT_NEAR(d.residual, fixed_point_residual(r.solution, h, b, Symbol::brownian(), lat), 1e-15);
  EXPECT_LE(max_abs_difference(r.solution.values, h.values), b.sup() * lat.times.back() + 1e-6);
  const auto again = picard_solve(Symbol::brownian(), b, h, lat);
  EXPECT_EQ(again.solution.values, r.solution.values);
}

TEST(Picard, Preconditions) {
  Lattice lat{2 * pi, 8, {0.5, 1.0}};
  const auto h = simulate_heat_field(Symbol::brownian(), lat, 1, 1)[0];
  EXPECT_THROW(picard_solve(Symbol::brownian(), Nonlinearity::zero(), h, lat), Error);
  const auto other = picard_lattice();
  EXPECT_THROW(picard_solve(Symbol::brownian(), Nonlinearity::zero(), h, other), Error);
}

TEST(Upsilon, MatchesDirectSum) {
  const Lattice lat{1.0, 2, {0.0, 0.5, 1.5}};
  std::vector<double> f(15);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(1.0 + i);
  const double dx = 0.2, lam = 0.7;
  const double w[3] = {0.25, 0.75, 0.5};
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j) s += w[i] * std::exp(-lam * lat.times[i]) * f[i * 5 + j] * f[i * 5 + j] * dx;
  EXPECT_NEAR(upsilon_norm(f, lat, lam), std::sqrt(s), 1e-14);
}

TEST(Colocation, SupBoundAndInclusions) {
  const auto lat = picard_lattice();
  const auto h = simulate_heat_field(Symbol::brownian(), lat, 8, 1)[0];
  const auto b = Nonlinearity::clipped_sine(0.8);
  const auto hb = picard_solve(Symbol::brownian(), b, h, lat).solution;
  const auto rep = blowup_colocation_report(h, hb, lat, b, {0.1, 0.5, 1.0});
  EXPECT_TRUE(rep.sup_bound_holds);
  EXPECT_NEAR(rep.shift, 0.8, 1e-15);
  ASSERT_EQ(rep.sup_difference.size(), lat.times.size());
  EXPECT_EQ(rep.sup_difference.front(), 0.0);
  for (std::size_t i = 0; i < lat.times.size(); ++i) EXPECT_LE(rep.sup_difference[i], 0.8 * lat.times[i] + 1e-6);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.inner_inclusion);
    EXPECT_TRUE(row.outer_inclusion);
  }
  const auto same = blowup_colocation_report(h, h, lat, Nonlinearity::zero(), {0.5});
  EXPECT_TRUE(same.rows[0].identical);
}
