#include "levyspde/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "levyspde/error.hpp"

namespace levyspde {

namespace {

using std::numbers::pi;

Estimate energy_unchecked(const Symbol& sym, const TestFunction& phi, double lambda,
                          const QuadratureSpec& q) {
  const double shift = 1.0 / lambda;
  SpectralKernel k;
  k.real = [&sym, shift](double x) { return 1.0 / (shift + sym.real_part(x)); };
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  if (phi.is_zero()) return {};
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 100.0 * shift));
  return finish(integrate_halfline(f, 0.0, q), "energy_E");
}

void require_random_field(const Symbol& sym, const QuadratureSpec& q) {
  require(sym.dimension() == 1, ErrorCode::precondition, "h is defined for d = 1");
  auto h = hawkes_existence(sym, 1.0, q);
  require(h.finite, ErrorCode::existence_required,
          "no random-field solution: Hawkes integral is not finite for " + sym.describe());
}

Estimate h_unchecked(const Symbol& sym, double r, const QuadratureSpec& q) {
  if (r == 0.0) return {};
  auto e = energy_unchecked(sym, TestFunction::delta_difference(0.0, r), 1.0, q);
  return {0.5 * e.value, 0.5 * e.error};
}

}  // namespace

double crossover_frequency(const Symbol& sym, double level) {
  for (int k = -3; k <= 300; ++k) {
    const double x = std::pow(10.0, k);
    if (sym.real_part(x) >= level) return x;
  }
  return 0.0;
}

void require_admissible(const Symbol& sym, const TestFunction& phi, const QuadratureSpec& q) {
  if (!phi.has_points()) return;
  auto h = hawkes_existence(sym, 1.0, q);
  require(h.finite, ErrorCode::divergence_detected,
          "point-mass test functions need a finite Hawkes integral for " + sym.describe());
}

Estimate energy_E(const Symbol& sym, const TestFunction& phi, double lambda,
                  const QuadratureSpec& q) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::precondition, "lambda must be > 0");
  if (phi.is_zero()) return {};
  require_admissible(sym, phi, q);
  return energy_unchecked(sym, phi, lambda, q);
}

Estimate energy_F(const Symbol& sym, const TestFunction& phi, double eps, const QuadratureSpec& q) {
  require(eps >= 0.0 && std::isfinite(eps), ErrorCode::precondition, "eps must be >= 0");
  if (eps == 0.0 || phi.is_zero()) return {};
  require_admissible(sym, phi, q);
  SpectralKernel k;
  k.real = [&sym, eps](double x) {
    const double m = eps * std::abs(sym(x));
    return std::min(1.0, m * m) / (1.0 + sym.real_part(x));
  };
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 100.0));
  return finish(integrate_halfline(f, 0.0, q), "energy_F");
}

HawkesResult hawkes_existence(const Symbol& sym, double theta, const QuadratureSpec& q) {
  require(theta > 0.0 && std::isfinite(theta), ErrorCode::precondition, "theta must be > 0");
  const int d = sym.dimension();
  const double s = sphere_area(d);
  HalfLineIntegrand f;
  f.full = [&sym, theta, s, d](double x) {
    return s * std::pow(x, d - 1) / (theta + sym.real_part(x));
  };
  f.tail_from = crossover_frequency(sym, 100.0 * theta);
  HawkesResult out;
  out.detail = integrate_halfline(f, 0.0, q);
  out.finite = out.detail.status == QuadStatus::converged;
  out.value = out.detail.value;
  out.growth_exponent = out.detail.status == QuadStatus::divergent ? out.detail.growth_exponent : 0.0;
  if (out.detail.status == QuadStatus::inconclusive ||
      out.detail.status == QuadStatus::tolerance_not_met) {
    throw Error(ErrorCode::inconclusive,
                "Hawkes integral neither flattens nor grows like a power for " + sym.describe());
  }
  return out;
}

Estimate h_function(const Symbol& sym, double r, const QuadratureSpec& q) {
  require(r >= 0.0 && std::isfinite(r), ErrorCode::precondition, "r must be >= 0");
  require_random_field(sym, q);
  return h_unchecked(sym, r, q);
}

double Rearrangement::operator()(double r) const {
  if (grid.empty()) return 0.0;
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  if (it == grid.begin()) return values.front();
  return values[static_cast<std::size_t>(it - grid.begin()) - 1];
}

Rearrangement rearrange_nondecreasing(const std::vector<double>& grid,
                                      const std::vector<double>& samples) {
  require(grid.size() == samples.size(), ErrorCode::precondition, "grid and samples differ in size");
  require(grid.size() >= 64, ErrorCode::precondition, "rearrangement needs >= 64 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], ErrorCode::precondition, "grid must be strictly increasing");
  }
  require(grid.front() == 0.0, ErrorCode::precondition, "grid must start at 0");
  // each sample owns the cell [r_i, r_{i+1})
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });
  std::vector<double> cumulative(order.size());
  double m = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    m += i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
    cumulative[k] = std::min(m, grid.back() - grid.front());
  }
  Rearrangement out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.flagged.assign(grid.size(), false);
  const double largest = samples[order.back()];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), grid[i]);
    if (it == cumulative.end()) {
      out.values[i] = largest;
      out.flagged[i] = true;
    } else {
      out.values[i] = samples[order[static_cast<std::size_t>(it - cumulative.begin())]];
    }
  }
  return out;
}

std::vector<double> barlow_grid() {
  std::vector<double> g{0.0};
  for (int k = -12 * 8; k <= 0; ++k) {
    const double r = 0.5 * std::pow(10.0, k / 8.0);
    if (r >= 1e-12) g.push_back(r);
  }
  for (int k = 1; k <= 32; ++k) g.push_back(0.5 + k / 64.0);
  return g;
}

double barlow_partial(const Rearrangement& hbar, double delta, double r0) {
  require(delta > 0.0 && delta < r0 && r0 < 1.0, ErrorCode::precondition,
          "Barlow partial integral needs 0 < delta < r0 < 1");
  auto antiderivative = [](double r) { return -2.0 * std::sqrt(-std::log(r)); };
  std::vector<double> cuts{delta, r0};
  for (double g : hbar.grid) {
    if (g > delta && g < r0) cuts.push_back(g);
  }
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    s += hbar(a) * (antiderivative(b) - antiderivative(a));
  }
  return s;
}

BarlowResult barlow_condition_from_profile(const Rearrangement& hbar) {
  BarlowResult out;
  out.profile = hbar;
  out.deltas = {1e-3, 1e-6, 1e-12};
  for (double d : out.deltas) out.partials.push_back(barlow_partial(hbar, d));
  out.trend = three_point_trend(out.partials[0], out.partials[1], out.partials[2], &out.ratio);
  out.holds = out.trend == Trend::holds;
  out.value = out.partials.back();
  return out;
}

BarlowResult barlow_condition(const Symbol& sym, const QuadratureSpec& q) {
  require_random_field(sym, q);
  const auto grid = barlow_grid();
  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = h_unchecked(sym, grid[i], q).value;
  return barlow_condition_from_profile(rearrange_nondecreasing(grid, h));
}

IndexEstimate small_scale_index(const std::vector<double>& grid, const std::vector<double>& samples) {
  require(grid.size() == samples.size() && grid.size() >= 11, ErrorCode::precondition,
          "index estimate needs >= 11 grid points");
  IndexEstimate out;
  out.grid = grid;
  out.samples = samples;
  const std::size_t n = grid.size();
  std::vector<double> lx, ly;
  for (std::size_t i = n - 11; i < n; ++i) {
    if (samples[i] > 0.0 && std::isfinite(samples[i])) {
      lx.push_back(std::log(grid[i]));
      ly.push_back(std::log(samples[i]));
    }
  }
  if (lx.size() < 2) {
    throw Error(ErrorCode::degenerate_symbol, "curve vanishes on the tail window");
  }
  out.value = std::numeric_limits<double>::infinity();
  out.log_ratio_minimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < lx.size(); ++i) {
    out.value = std::min(out.value, (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
    out.log_ratio_minimum = std::min(out.log_ratio_minimum, ly[i] / lx[i]);
  }
  const double m = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.fitted_slope = sxy / sxx;
  return out;
}

IndexEstimate lower_index_E(const Symbol& sym, const TestFunction& phi, const QuadratureSpec& q) {
  require(!phi.is_zero(), ErrorCode::precondition, "index of the zero test function");
  energy_E(sym, phi, 1.0, q);
  std::vector<double> grid, vals;
  for (int j = 1; j <= 40; ++j) {
    const double eps = std::ldexp(1.0, -j);
    grid.push_back(eps);
    vals.push_back(energy_unchecked(sym, phi, eps, q).value);
  }
  auto out = small_scale_index(grid, vals);
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

IndexEstimate lower_index_h(const Symbol& sym, const QuadratureSpec& q) {
  require_random_field(sym, q);
  std::vector<double> grid, vals;
  for (int j = 1; j <= 40; ++j) {
    const double r = std::ldexp(1.0, -j);
    grid.push_back(r);
    vals.push_back(h_unchecked(sym, r, q).value);
  }
  auto out = small_scale_index(grid, vals);
  out.value = std::clamp(out.value, 0.0, 2.0);
  return out;
}

GaugeReport is_gauge(const GaugeSpec& gs) {
  require(static_cast<bool>(gs.g), ErrorCode::precondition, "gauge has no rule");
  GaugeReport rep;
  const auto& g = gs.g;

  rep.monotone = true;
  double prev = g(1.0);
  for (int k = 1; k <= 8 * 300; ++k) {
    const double v = g(std::pow(10.0, k / 8.0));
    if (!(v > 0.0) || v < prev - 1e-12 * std::abs(prev)) {
      rep.monotone = false;
      break;
    }
    prev = v;
  }

  auto variation = [&](double s) { return g(2.0 * s) / g(s); };
  const double r1 = variation(1e10), r3 = variation(1e300);
  rep.variation_ratio = r3;
  rep.slowly_varying = std::abs(r3 - 1.0) < 0.01 && std::abs(r3 - 1.0) <= std::abs(r1 - 1.0) + 1e-12;

  // integral over (0+, 1/10] of ds / (s log(1/s) g(1/s)), as integral of du / (u g(e^u))
  auto integrand = [&](double u) { return 1.0 / (u * g(std::exp(u))); };
  const double u0 = std::log(10.0);
  std::vector<double> partial;
  double acc = 0.0, lo = u0;
  for (double hi : {3.0, 30.0, 300.0}) {
    const double uh = hi * std::log(10.0);
    acc += integrate_interval(integrand, lo, uh, 1e-15, 1e-12).value;
    partial.push_back(acc);
    lo = uh;
  }
  rep.integrable = three_point_trend(partial[0], partial[1], partial[2], &rep.trend_ratio);
  rep.is_gauge = rep.monotone && rep.slowly_varying && rep.integrable == Trend::holds;
  return rep;
}

ConditionResult temporal_continuity_condition(const Symbol& sym, const TestFunction& phi,
                                              const GaugeSpec& gs, const QuadratureSpec& q) {
  require(is_gauge(gs).is_gauge, ErrorCode::precondition, "g is not a gauge function");
  ConditionResult out;
  if (phi.is_zero()) {
    out.finite = true;
    return out;
  }
  SpectralKernel k;
  k.real = [&sym, g = gs.g](double x) {
    const double re = sym.real_part(x);
    return std::log1p(re) * g(1.0 + std::abs(sym(x))) / (1.0 + re);
  };
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 100.0));
  out.detail = integrate_halfline(f, 0.0, q);
  out.value = out.detail.value;
  if (out.detail.status == QuadStatus::converged) out.finite = true;
  else if (out.detail.status != QuadStatus::divergent) {
    throw Error(ErrorCode::inconclusive, "temporal continuity integral trend is ambiguous");
  }
  return out;
}

SlowVariationTail slow_variation_tail(const GaugeSpec& gs, double alpha, double x,
                                      const QuadratureSpec& q) {
  require(alpha > 1.0 && x > 0.0, ErrorCode::precondition, "need alpha > 1 and x > 0");
  HalfLineIntegrand f;
  f.full = [g = gs.g, alpha](double t) { return std::pow(t, -alpha) * g(t); };
  auto r = finish(integrate_halfline(f, x, q), "slow_variation_tail");
  SlowVariationTail out;
  out.integral = r.value;
  out.ratio = r.value / (gs.g(x) / ((alpha - 1.0) * std::pow(x, alpha - 1.0)));
  return out;
}

}  // namespace levyspde
