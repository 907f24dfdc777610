#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace levyspde {

/// Truncation, tolerance and tail policy for improper integrals on [a, inf).
struct QuadratureSpec {
  double abs_tol = 1e-30;
  double rel_tol = 1e-10;
  double initial_cutoff = 1e3;  ///< the resolved region always reaches at least this far
  double max_cutoff = 1e250;
  int panels_per_decade = 4;
  double fit_residual_max = 1e-3;  ///< RMS log-residual above which a tail fit is rejected
  std::size_t max_subpanels = 4'000'000;

  void validate() const;
};

/// envelope(x) * cos(phase(x)).
struct Oscillation {
  std::function<double(double)> envelope;
  std::function<double(double)> phase;
};

/// Integrand on [a, inf). For x >= valid_from the identity
///   full(x) = smooth(x) + sum_j envelope_j(x) cos(phase_j(x))
/// must hold; smooth may be left empty when there are no oscillations.
struct HalfLineIntegrand {
  std::function<double(double)> full;
  std::function<double(double)> smooth;
  std::vector<Oscillation> oscillations;
  double valid_from = 0.0;
  double tail_from = 0.0;  ///< the tail model is fitted only beyond this point
};

enum class QuadStatus { converged, divergent, inconclusive, tolerance_not_met };

std::string to_string(QuadStatus s);

struct TailFit {
  double p = 0.0;  ///< power decay exponent
  double q = 0.0;  ///< exponent of the log factor
  double residual = 0.0;
  bool snapped = false;
  bool accepted = false;
};

struct HalfLineResult {
  double value = 0.0;
  double error = 0.0;
  QuadStatus status = QuadStatus::converged;
  double growth_exponent = 0.0;  ///< 1 - p for divergent integrals
  TailFit tail;
  double resolved_cutoff = 0.0;
  double final_cutoff = 0.0;
  std::size_t evaluations = 0;
};

/// Integral of f over [a, b] by globally adaptive 31-point Gauss-Kronrod.
struct IntervalResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

IntervalResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol = 0.0);

/// Integral over [a, inf). Log panels with phase subdivision up to a cutoff B
/// where the integration-by-parts remainder of every oscillation is below
/// tolerance; beyond B the smooth part is integrated decade by decade and closed
/// with a fitted c x^-p (log x)^-q tail.
HalfLineResult integrate_halfline(const HalfLineIntegrand& f, double a, const QuadratureSpec& spec);

/// Fit log|s| = log c - p log x - q log log x on five points spanning the two
/// decades below x.
TailFit fit_tail(const std::function<double(double)>& s, double x, const QuadratureSpec& spec);

/// Analytic tail of c x^-p (log x)^-q from x, given f(x); NaN when not integrable.
double analytic_tail(const TailFit& fit, double x, double fx);

enum class Trend { holds, fails, inconclusive };

std::string to_string(Trend t);

/// Three partial integrals I(d1), I(d2), I(d3) for shrinking lower limits;
/// increment ratio below 0.9 means convergent, at least 1 means divergent.
Trend three_point_trend(double i1, double i2, double i3, double* ratio = nullptr);

/// Surface area of the unit sphere in R^d (2 for d = 1).
double sphere_area(int d);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace levyspde
