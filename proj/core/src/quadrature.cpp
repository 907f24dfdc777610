#include "levyspde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "levyspde/error.hpp"

namespace levyspde {

namespace {

using std::numbers::pi;
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk31(const std::function<double(double)>& f, double a, double b, std::size_t& evals) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  evals += 31;
  // the estimate refers to the interval mapped onto [-1, 1]
  return {a, b, v, 0.5 * (b - a) * err};
}

double numeric_slope(const std::function<double(double)>& f, double x, double h) {
  return (f(x * (1.0 + h)) - f(x * (1.0 - h))) / (2.0 * x * h);
}

// Integration-by-parts data of one oscillation at x: g = e/theta', r = g'/theta'.
struct IbpTerms {
  double g = nan_v;
  double r = nan_v;
  double theta = nan_v;
};

IbpTerms ibp_terms(const Oscillation& o, double x) {
  auto dtheta = [&](double y) { return numeric_slope(o.phase, y, 1e-5); };
  auto g = [&](double y) { return o.envelope(y) / dtheta(y); };
  IbpTerms t;
  const double d = dtheta(x);
  if (!(std::abs(d) > 0.0) || !std::isfinite(d)) return t;
  t.g = g(x);
  t.r = numeric_slope(g, x, 1e-3) / d;
  t.theta = o.phase(x);
  return t;
}

int phase_splits(const std::vector<Oscillation>& osc, double a, double b) {
  double most = 0.0;
  for (const auto& o : osc) most = std::max(most, std::abs(o.phase(b) - o.phase(a)));
  if (!std::isfinite(most)) return 1;
  return std::max(1, static_cast<int>(std::ceil(most / pi)));
}

}  // namespace

void QuadratureSpec::validate() const {
  require(abs_tol > 0.0 && rel_tol > 0.0, ErrorCode::precondition, "tolerances must be positive");
  require(initial_cutoff > 0.0, ErrorCode::precondition, "initial cutoff must be positive");
  require(max_cutoff > initial_cutoff, ErrorCode::precondition,
          "max cutoff must exceed the initial cutoff");
  require(panels_per_decade >= 1, ErrorCode::precondition, "panels per decade must be >= 1");
  require(fit_residual_max > 0.0, ErrorCode::precondition, "fit residual threshold must be > 0");
}

std::string to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::converged: return "converged";
    case QuadStatus::divergent: return "divergent";
    case QuadStatus::inconclusive: return "inconclusive";
    case QuadStatus::tolerance_not_met: return "tolerance-not-met";
  }
  return "unknown";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::holds: return "holds";
    case Trend::fails: return "fails";
    case Trend::inconclusive: return "inconclusive";
  }
  return "unknown";
}

IntervalResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol) {
  IntervalResult out;
  if (a == b) return out;
  std::priority_queue<Piece> heap;
  heap.push(gk31(f, a, b, out.evaluations));
  double total = heap.top().value;
  double err = heap.top().error;
  for (int it = 0; it < 4000; ++it) {
    if (!(err > std::max(abs_tol, rel_tol * std::abs(total)))) break;
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    Piece l = gk31(f, worst.a, mid, out.evaluations);
    Piece r = gk31(f, mid, worst.b, out.evaluations);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }
  // fixed-order resummation so the value does not depend on heap history
  std::vector<Piece> parts;
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });
  out.value = 0.0;
  out.error = 0.0;
  for (const auto& p : parts) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

TailFit fit_tail(const std::function<double(double)>& s, double x, const QuadratureSpec& spec) {
  TailFit fit;
  constexpr int n = 5;
  Eigen::VectorXd lx(n), llx(n), ly(n);
  double sign = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = x * std::pow(10.0, -0.5 * i);
    const double v = s(xi);
    if (!(v != 0.0) || !std::isfinite(v) || xi <= std::numbers::e) return fit;
    const double sg = v > 0 ? 1.0 : -1.0;
    if (sign != 0.0 && sg != sign) return fit;
    sign = sg;
    lx(i) = std::log(xi);
    llx(i) = std::log(lx(i));
    ly(i) = std::log(std::abs(v));
  }
  Eigen::MatrixXd A(n, 3);
  const double mx = lx.mean(), mlx = llx.mean();
  A.col(0).setOnes();
  A.col(1) = -(lx.array() - mx).matrix();
  A.col(2) = -(llx.array() - mlx).matrix();
  Eigen::Vector3d c = A.colPivHouseholderQr().solve(ly);
  fit.p = c(1);
  fit.q = c(2);
  fit.residual = std::sqrt((A * c - ly).squaredNorm() / n);
  if (std::abs(fit.p - 1.0) < 0.01) {
    Eigen::MatrixXd B(n, 2);
    B.col(0).setOnes();
    B.col(1) = A.col(2);
    Eigen::VectorXd y1 = ly + lx;
    Eigen::Vector2d c2 = B.colPivHouseholderQr().solve(y1);
    fit.p = 1.0;
    fit.q = c2(1);
    fit.snapped = true;
    fit.residual = std::sqrt((B * c2 - y1).squaredNorm() / n);
  }
  fit.accepted = fit.residual < spec.fit_residual_max;
  return fit;
}

double analytic_tail(const TailFit& fit, double x, double fx) {
  if (!fit.accepted) return nan_v;
  const double L0 = std::log(x);
  if (fit.snapped) {
    if (fit.q <= 1.0) return nan_v;
    return x * fx * L0 / (fit.q - 1.0);
  }
  const double kappa = fit.p - 1.0;
  if (kappa <= 0.0) return nan_v;
  if (fit.q == 0.0) return x * fx / kappa;
  const double q = fit.q;
  auto g = [=](double y) {
    const double l = -y - q * std::log1p(y / (kappa * L0));
    return l > -745.0 ? std::exp(l) : 0.0;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double J = integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity());
  return x * fx * J / kappa;
}

HalfLineResult integrate_halfline(const HalfLineIntegrand& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  require(static_cast<bool>(f.full), ErrorCode::precondition, "integrand has no full rule");
  require(a >= 0.0 && std::isfinite(a), ErrorCode::precondition, "lower limit must be >= 0");
  require(f.oscillations.empty() || static_cast<bool>(f.smooth), ErrorCode::precondition,
          "oscillatory integrand needs an explicit smooth part");

  HalfLineResult out;
  const double probe_lo = std::max({1.0, a, f.valid_from, spec.initial_cutoff});

  // oscillations whose phase stays constant are not oscillations
  std::vector<Oscillation> osc, folded;
  for (const auto& o : f.oscillations) {
    const double t1 = o.phase(probe_lo), t2 = o.phase(probe_lo * 1e6);
    // cancelling phases leave a rounding residual that grows with x
    const bool flat = std::abs(t2 - t1) < 1e-8 * (1.0 + std::abs(t1)) ||
                      std::abs(t2 - t1) < 1e-14 * probe_lo * 1e6;
    if (flat) folded.push_back(o);
    else osc.push_back(o);
  }
  std::function<double(double)> smooth = f.smooth ? f.smooth : f.full;
  if (!folded.empty()) {
    smooth = [base = smooth, folded](double x) {
      double v = base(x);
      for (const auto& o : folded) v += o.envelope(x) * std::cos(o.phase(x));
      return v;
    };
  }

  double running = 0.0, gk_error = 0.0;
  std::size_t subpanels = 0;
  auto tol_at = [&](double v) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(v)); };

  // oscillations still integrated panel by panel; the others were closed by parts
  std::vector<Oscillation> active = osc;
  double osc_tail = 0.0, osc_err = 0.0;
  std::function<double(double)> panel_f = f.full;
  auto rebuild = [&] {
    panel_f = [base = smooth, act = active](double y) {
      double v = base(y);
      for (const auto& o : act) v += o.envelope(y) * std::cos(o.phase(y));
      return v;
    };
  };

  auto add_panel = [&](const std::function<double(double)>& g, double lo, double hi, bool split) {
    const int n = split ? phase_splits(active, lo, hi) : 1;
    subpanels += static_cast<std::size_t>(n);
    const double h = (hi - lo) / n;
    const double tol = 0.01 * tol_at(running) / std::sqrt(static_cast<double>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double l = lo + i * h;
      const double r = (i + 1 == n) ? hi : lo + (i + 1) * h;
      auto res = integrate_interval(g, l, r, tol, 0.01 * spec.rel_tol);
      sum += res.value;
      gk_error += res.error;
      out.evaluations += res.evaluations;
    }
    return sum;
  };

  double x = a;
  if (a == 0.0) {
    running += add_panel(f.full, 0.0, 1.0, true);
    x = 1.0;
  }
  const double ratio = std::pow(10.0, 1.0 / spec.panels_per_decade);
  const double b_min = std::max({spec.initial_cutoff, f.valid_from, 100.0 * x, 1e3});

  // closes every oscillation whose integration-by-parts remainder at `at` is below tolerance
  auto retire = [&](double at) {
    bool changed = false;
    for (auto it = active.begin(); it != active.end();) {
      auto t = ibp_terms(*it, at);
      if (std::isfinite(t.r) && std::abs(t.r) <= tol_at(running)) {
        osc_tail += -t.g * std::sin(t.theta) - t.r * std::cos(t.theta);
        osc_err += std::abs(t.r);
        it = active.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    if (changed) rebuild();
  };

  for (long step = 0;; ++step) {
    if (x >= b_min && step % spec.panels_per_decade == 0) {
      retire(x);
      if (active.empty()) break;
    }
    if (x > spec.max_cutoff || subpanels > spec.max_subpanels) {
      out.value = running;
      out.error = std::abs(running);
      out.status = QuadStatus::tolerance_not_met;
      out.resolved_cutoff = out.final_cutoff = x;
      return out;
    }
    running += add_panel(panel_f, x, x * ratio, true);
    x *= ratio;
  }
  const double B = x;
  out.resolved_cutoff = B;

  double smooth_sum = 0.0;
  double X = B;
  auto estimate = [&](double at, TailFit& fit) {
    const double sx = smooth(at);
    if (std::abs(sx) * at <= 1e-3 * tol_at(running + smooth_sum) &&
        std::abs(smooth(at / 10.0)) * at / 10.0 <= tol_at(running + smooth_sum)) {
      fit = TailFit{};
      fit.p = std::numeric_limits<double>::infinity();
      fit.accepted = true;
      return running + osc_tail + smooth_sum;
    }
    fit = fit_tail(smooth, at, spec);
    const double T = analytic_tail(fit, at, sx);
    return running + osc_tail + smooth_sum + T;
  };

  auto smooth_decade = [&] {
    double decade = 0.0;
    double lo = X;
    for (int i = 0; i < spec.panels_per_decade; ++i) {
      decade += add_panel(smooth, lo, lo * ratio, false);
      lo *= ratio;
    }
    smooth_sum += decade;
    X = lo;
  };
  while (X < f.tail_from && X <= spec.max_cutoff) smooth_decade();

  TailFit fit;
  double prev = estimate(X, fit);
  int diverging = 0;
  for (;;) {
    smooth_decade();
    const double est = estimate(X, fit);
    out.tail = fit;
    out.final_cutoff = X;

    const bool power_growth = fit.accepted && !fit.snapped && fit.p < 0.99;
    const bool log_growth = fit.accepted && fit.snapped && fit.q < 0.5;
    diverging = (power_growth || log_growth) ? diverging + 1 : 0;
    if (diverging >= 3) {
      out.status = QuadStatus::divergent;
      out.growth_exponent = 1.0 - fit.p;
      out.value = running + osc_tail + smooth_sum;
      out.error = std::numeric_limits<double>::infinity();
      return out;
    }
    if (std::isfinite(est) && std::isfinite(prev) && std::abs(est - prev) <= tol_at(est)) {
      out.status = QuadStatus::converged;
      out.value = est;
      out.error = std::abs(est - prev) + gk_error + osc_err;
      return out;
    }
    if (X > spec.max_cutoff) {
      const bool ambiguous = fit.accepted && fit.snapped && fit.q >= 0.5 && fit.q <= 1.5;
      out.status = ambiguous ? QuadStatus::inconclusive : QuadStatus::tolerance_not_met;
      out.value = std::isfinite(est) ? est : running + osc_tail + smooth_sum;
      out.error = std::isfinite(est) && std::isfinite(prev) ? std::abs(est - prev)
                                                            : std::numeric_limits<double>::infinity();
      return out;
    }
    prev = est;
  }
}

Trend three_point_trend(double i1, double i2, double i3, double* ratio) {
  const double d1 = i2 - i1, d2 = i3 - i2;
  double r = 0.0;
  Trend t;
  if (d1 == 0.0 && d2 == 0.0) {
    t = Trend::holds;
  } else if (d1 == 0.0) {
    r = std::numeric_limits<double>::infinity();
    t = Trend::fails;
  } else {
    r = std::abs(d2 / d1);
    if (r < 0.9) t = Trend::holds;
    else if (r >= 1.0 - 1e-6) t = Trend::fails;
    else t = Trend::inconclusive;
  }
  if (ratio) *ratio = r;
  return t;
}

double sphere_area(int d) {
  require(d >= 1, ErrorCode::precondition, "dimension must be >= 1");
  return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
  require(n >= 1, ErrorCode::precondition, "Gauss-Legendre needs n >= 1");
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  x.clear();
  w.clear();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto push = [&](double z) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), z);
    x.push_back(c + h * z);
    w.push_back(h * 2.0 / ((1.0 - z * z) * dp * dp));
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) push(-*it);
  }
  for (double z : zeros) push(z);
}

}  // namespace levyspde
