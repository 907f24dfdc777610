#include "levyspde/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levyspde/error.hpp"
#include "levyspde/functionals.hpp"

namespace levyspde {

namespace {

using std::numbers::pi;

constexpr double half_pi = 0.5 * pi;

double min_positive(double a, double b) {
  if (a <= 0.0) return b;
  if (b <= 0.0) return a;
  return std::min(a, b);
}

// sin(z) / z
double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

// Gauss-Legendre integral of g over [a, b]
template <class G>
double gl(G&& g, double a, double b, std::size_t n = 24) {
  static thread_local std::vector<double> x, w;
  static thread_local std::size_t cached = 0;
  if (cached != n) {
    gauss_legendre(n, -1.0, 1.0, x, w);
    cached = n;
  }
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * g(c + h * x[i]);
  return h * s;
}

void require_time(double t, const char* name) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::precondition,
          std::string(name) + " must be finite and >= 0");
}

void require_symmetric(const Symbol& sym) {
  require(sym.symmetric(), ErrorCode::symmetry_required,
          "wave equation needs a symmetric symbol, got " + sym.describe());
}

MomentReport report(const char* label, const Estimate& e) { return {label, e.value, e.error}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

InequalityReport InequalityReport::make(std::string quantity, double lower, double middle,
                                        double upper, double tolerance) {
  InequalityReport r;
  r.quantity = std::move(quantity);
  r.lower = lower;
  r.middle = middle;
  r.upper = upper;
  r.margin_lo = middle - lower;
  r.margin_hi = upper - middle;
  r.tolerance = tolerance;
  r.pass = r.margin_lo >= -tolerance && r.margin_hi >= -tolerance;
  return r;
}

std::string InequalityReport::csv_header() {
  return "quantity,lower,middle,upper,margin_lo,margin_hi,pass";
}

std::string InequalityReport::csv_row() const {
  return quantity + "," + fmt(lower) + "," + fmt(middle) + "," + fmt(upper) + "," + fmt(margin_lo) +
         "," + fmt(margin_hi) + "," + (pass ? "true" : "false");
}

double heat_kernel(double u, double t) {
  const double x = 2.0 * t * u;
  if (x < 1e-4) return t * (1.0 - t * u + (2.0 / 3.0) * t * t * u * u);
  return -std::expm1(-x) / (2.0 * u);
}

double wave_mode_covariance(double psi, double s, double t) {
  if (s > t) std::swap(s, t);
  if (s <= 0.0) return 0.0;
  const double w = std::sqrt(psi);
  if (w * t < 1e-2) {
    return gl([&](double r) { return (t - r) * (s - r) * sinc(w * (t - r)) * sinc(w * (s - r)); },
              0.0, s);
  }
  return (s * std::cos(w * (t - s)) - (std::sin(w * (t + s)) - std::sin(w * (t - s))) / (2.0 * w)) /
         (2.0 * psi);
}

double wave_mode_increment(double psi, double t, double eps) {
  if (eps <= 0.0) return 0.0;
  const double w = std::sqrt(psi);
  auto S = [w](double u) { return u * sinc(w * u); };
  if (w * (t + eps) < 1e-2) {
    const double t1 = t > 0.0 ? gl([&](double u) {
      const double d = S(u + eps) - S(u);
      return d * d;
    }, 0.0, t) : 0.0;
    return t1 + gl([&](double u) { return S(u) * S(u); }, 0.0, eps);
  }
  const double se = std::sin(0.5 * w * eps);
  const double t1 = 4.0 * se * se / psi *
                    (0.5 * t + (std::sin(2.0 * w * t + w * eps) - std::sin(w * eps)) / (4.0 * w));
  const double t2 = w * eps < 1e-2 ? gl([&](double u) { return S(u) * S(u); }, 0.0, eps)
                                   : (0.5 * eps - std::sin(2.0 * w * eps) / (4.0 * w)) / psi;
  return t1 + t2;
}

MomentReport heat_variance(const Symbol& sym, const TestFunction& phi, double t,
                           const QuadratureSpec& q) {
  require_time(t, "t");
  if (t == 0.0 || phi.is_zero()) return {"heat_variance", 0.0, 0.0};
  require_admissible(sym, phi, q);
  SpectralKernel k;
  k.real = [&sym, t](double x) { return heat_kernel(sym.real_part(x), t); };
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 50.0 / t));
  return report("heat_variance", finish(integrate_halfline(f, 0.0, q), "heat_variance"));
}

MomentReport heat_increment_variance(const Symbol& sym, const TestFunction& phi, double t,
                                     double eps, const QuadratureSpec& q) {
  require_time(t, "t");
  require_time(eps, "eps");
  if (eps == 0.0 || phi.is_zero()) return {"heat_increment_variance", 0.0, 0.0};
  require_admissible(sym, phi, q);
  SpectralKernel k;
  k.real = [&sym, t, eps](double x) {
    const std::complex<double> z = sym(x);
    const double a = eps * z.real(), b = eps * z.imag();
    const double sb = std::sin(0.5 * b);
    // 1 - e^{-eps Psi}
    const double re = -(std::expm1(-a) * std::cos(b) - 2.0 * sb * sb);
    const double im = std::exp(-a) * std::sin(b);
    const double t1 = t > 0.0 ? (re * re + im * im) * heat_kernel(z.real(), t) : 0.0;
    return t1 + heat_kernel(z.real(), eps);
  };
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 50.0 / min_positive(t, eps)));
  return report("heat_increment_variance",
                finish(integrate_halfline(f, 0.0, q), "heat_increment_variance"));
}

Estimate heat_cross_covariance(const Symbol& sym, const TestFunction& phi, const TestFunction& psi,
                               double s, double t, const QuadratureSpec& q) {
  require_time(s, "s");
  require_time(t, "t");
  require(s <= t, ErrorCode::precondition, "heat_cross_covariance needs s <= t");
  if (s == 0.0 || phi.is_zero() || psi.is_zero()) return {};
  require_admissible(sym, phi, q);
  require_admissible(sym, psi, q);
  SpectralKernel k;
  const double u = t - s;
  if (u == 0.0) {
    k.real = [&sym, s](double x) { return heat_kernel(sym.real_part(x), s); };
  } else {
    k.general = [&sym, s, u](double x, std::complex<double> c) {
      const std::complex<double> z = sym(x);
      return (std::exp(-u * z) * c).real() * heat_kernel(z.real(), s);
    };
  }
  auto f = spectral_integrand(k, phi, psi, sym.dimension());
  f.tail_from = std::max(f.tail_from, crossover_frequency(sym, 50.0 / s));
  return finish(integrate_halfline(f, 0.0, q), "heat_cross_covariance");
}

MomentReport wave_variance(const Symbol& sym, const TestFunction& phi, double t,
                           const QuadratureSpec& q) {
  require_symmetric(sym);
  require_time(t, "t");
  if (t == 0.0 || phi.is_zero()) return {"wave_variance", 0.0, 0.0};
  require_admissible(sym, phi, q);
  SpectralKernel k;
  k.real = [&sym, t](double x) {
    const double p = sym.real_part(x);
    const double z = 2.0 * std::sqrt(p) * t;
    if (z < 1e-2) {
      return t * t * t / 3.0 - p * std::pow(t, 5) / 15.0 + 2.0 * p * p * std::pow(t, 7) / 315.0;
    }
    return t / (2.0 * p) * (1.0 - std::sin(z) / z);
  };
  k.terms.push_back({[&sym, t](double x) { return t / (2.0 * sym.real_part(x)); }, {}});
  k.terms.push_back({[&sym](double x) {
                       const double p = sym.real_part(x);
                       return -1.0 / (4.0 * std::sqrt(p) * p);
                     },
                     [&sym, t](double x) { return 2.0 * t * std::sqrt(sym.real_part(x)) - half_pi; }});
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  return report("wave_variance", finish(integrate_halfline(f, 0.0, q), "wave_variance"));
}

MomentReport wave_increment_variance(const Symbol& sym, const TestFunction& phi, double t,
                                     double eps, const QuadratureSpec& q) {
  require_symmetric(sym);
  require_time(t, "t");
  require_time(eps, "eps");
  if (eps == 0.0 || phi.is_zero()) return {"wave_increment_variance", 0.0, 0.0};
  require_admissible(sym, phi, q);
  SpectralKernel k;
  k.real = [&sym, t, eps](double x) { return wave_mode_increment(sym.real_part(x), t, eps); };
  auto p = [&sym](double x) { return sym.real_part(x); };
  auto w = [&sym](double x) { return std::sqrt(sym.real_part(x)); };
  k.terms.push_back({[=](double x) { return (t + 0.5 * eps) / p(x); }, {}});
  if (t > 0.0) {
    k.terms.push_back({[=](double x) { return -t / p(x); }, [=](double x) { return w(x) * eps; }});
    k.terms.push_back({[=](double x) { return 1.0 / (2.0 * w(x) * p(x)); },
                       [=](double x) { return w(x) * (2.0 * t + eps) - half_pi; }});
    k.terms.push_back({[=](double x) { return -1.0 / (2.0 * w(x) * p(x)); },
                       [=](double x) { return w(x) * eps - half_pi; }});
    k.terms.push_back({[=](double x) { return -1.0 / (4.0 * w(x) * p(x)); },
                       [=](double x) { return 2.0 * w(x) * (t + eps) - half_pi; }});
    k.terms.push_back({[=](double x) { return -1.0 / (4.0 * w(x) * p(x)); },
                       [=](double x) { return 2.0 * w(x) * t - half_pi; }});
  } else {
    k.terms.push_back({[=](double x) { return -1.0 / (4.0 * w(x) * p(x)); },
                       [=](double x) { return 2.0 * w(x) * eps - half_pi; }});
  }
  auto f = spectral_integrand(k, phi, phi, sym.dimension());
  return report("wave_increment_variance",
                finish(integrate_halfline(f, 0.0, q), "wave_increment_variance"));
}

Estimate wave_cross_covariance(const Symbol& sym, const TestFunction& phi, const TestFunction& psi,
                               double s, double t, const QuadratureSpec& q) {
  require_symmetric(sym);
  require_time(s, "s");
  require_time(t, "t");
  require(s <= t, ErrorCode::precondition, "wave_cross_covariance needs s <= t");
  if (s == 0.0 || phi.is_zero() || psi.is_zero()) return {};
  require_admissible(sym, phi, q);
  require_admissible(sym, psi, q);
  SpectralKernel k;
  k.real = [&sym, s, t](double x) { return wave_mode_covariance(sym.real_part(x), s, t); };
  auto p = [&sym](double x) { return sym.real_part(x); };
  auto w = [&sym](double x) { return std::sqrt(sym.real_part(x)); };
  k.terms.push_back({[=](double x) { return s / (2.0 * p(x)); },
                     [=](double x) { return w(x) * (t - s); }});
  k.terms.push_back({[=](double x) { return -1.0 / (4.0 * w(x) * p(x)); },
                     [=](double x) { return w(x) * (t + s) - half_pi; }});
  k.terms.push_back({[=](double x) { return 1.0 / (4.0 * w(x) * p(x)); },
                     [=](double x) { return w(x) * (t - s) - half_pi; }});
  auto f = spectral_integrand(k, phi, psi, sym.dimension());
  return finish(integrate_halfline(f, 0.0, q), "wave_cross_covariance");
}

InequalityReport verify_heat_quasi_isometry(const Symbol& sym, const TestFunction& phi, double t,
                                            double lambda, const QuadratureSpec& q) {
  require_time(t, "t");
  require(lambda > 0.0, ErrorCode::precondition, "lambda must be > 0");
  if (t == 0.0) return InequalityReport::make("heat_quasi_isometry", 0.0, 0.0, 0.0, 0.0);
  const auto e = energy_E(sym, phi, lambda, q);
  const auto m = heat_variance(sym, phi, t, q);
  const double lo = -std::expm1(-2.0 * t / lambda) / 2.0, hi = std::exp(2.0 * t / lambda) / 2.0;
  return InequalityReport::make("heat_quasi_isometry", lo * e.value, m.value, hi * e.value,
                                m.error + hi * e.error);
}

InequalityReport verify_wave_quasi_isometry(const Symbol& sym, const TestFunction& phi, double t,
                                            const QuadratureSpec& q) {
  require_symmetric(sym);
  require_time(t, "t");
  if (t == 0.0) return InequalityReport::make("wave_quasi_isometry", 0.0, 0.0, 0.0, 0.0);
  const auto e = energy_E(sym, phi, t * t, q);
  const auto m = wave_variance(sym, phi, t, q);
  return InequalityReport::make("wave_quasi_isometry", 0.25 * t * e.value, m.value,
                                2.0 * t * e.value, m.error + 2.0 * t * e.error);
}

InequalityReport verify_heat_temporal_bounds(const Symbol& sym, const TestFunction& phi, double t,
                                             double eps, const QuadratureSpec& q) {
  require_time(t, "t");
  require_time(eps, "eps");
  if (eps == 0.0) return InequalityReport::make("heat_temporal", 0.0, 0.0, 0.0, 0.0);
  const auto e = energy_E(sym, phi, eps, q);
  const auto f = energy_F(sym, phi, eps, q);
  const auto m = heat_increment_variance(sym, phi, t, eps, q);
  const double growth = std::exp(2.0 * t);
  return InequalityReport::make("heat_temporal", 0.5 * e.value, m.value,
                                e.value + growth * f.value,
                                m.error + e.error + growth * f.error);
}

InequalityReport verify_wave_temporal_bounds(const Symbol& sym, const TestFunction& phi, double t,
                                             double eps, const QuadratureSpec& q) {
  require_symmetric(sym);
  require_time(t, "t");
  require_time(eps, "eps");
  if (eps == 0.0) return InequalityReport::make("wave_temporal", 0.0, 0.0, 0.0, 0.0);
  const auto e = energy_E(sym, phi, eps * eps, q);
  const auto m = wave_increment_variance(sym, phi, t, eps, q);
  const double c = 8.0 * t + 6.0 * eps;
  return InequalityReport::make("wave_temporal", 0.0, m.value, c * e.value, m.error + c * e.error);
}

InequalityReport verify_spatial_bounds(const Symbol& sym, double t, double x, double y,
                                       const QuadratureSpec& q) {
  require_time(t, "t");
  const double r = std::abs(x - y);
  if (r == 0.0 || t == 0.0) return InequalityReport::make("spatial", 0.0, 0.0, 0.0, 0.0);
  const auto h = h_function(sym, r, q);
  const auto m = heat_variance(sym, TestFunction::delta_difference(x, y), t, q);
  const double lo = -std::expm1(-2.0 * t), hi = std::exp(2.0 * t);
  return InequalityReport::make("spatial", lo * h.value, m.value, hi * h.value,
                                m.error + hi * h.error);
}

JointHolder joint_holder_exponents(const Symbol& sym, const QuadratureSpec& q) {
  require(sym.dimension() == 1, ErrorCode::precondition, "joint Holder exponents need d = 1");
  const auto probe = geometric_grid(1.0, 2.0, 64);
  JointHolder out;
  out.beta = lower_index(sym, probe).value;
  require(out.beta > 1.0, ErrorCode::precondition,
          "joint Holder exponents need a lower index above the dimension");
  out.spatial_variance = out.beta - 1.0;
  out.temporal_variance = (out.beta - 1.0) / out.beta;
  out.spatial_path = 0.5 * out.spatial_variance;
  out.temporal_path = 0.5 * out.temporal_variance;

  auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += std::log(x[i]);
      my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
      sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
  };
  std::vector<double> r, vs, vt;
  for (int j = 12; j <= 20; ++j) {
    const double d = std::ldexp(1.0, -j);
    r.push_back(d);
    vs.push_back(heat_variance(sym, TestFunction::delta_difference(0.0, d), 1.0, q).value);
    vt.push_back(heat_increment_variance(sym, TestFunction::delta(0.0), 1.0, d, q).value);
  }
  out.fitted_spatial_path = 0.5 * slope(r, vs);
  out.fitted_temporal_path = 0.5 * slope(r, vt);
  out.consistent = out.fitted_spatial_path >= out.spatial_path - 0.05 &&
                   out.fitted_temporal_path >= out.temporal_path - 0.05;
  return out;
}

}  // namespace levyspde
