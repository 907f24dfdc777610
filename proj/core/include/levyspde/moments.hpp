#pragma once

#include <string>

#include "levyspde/quadrature.hpp"
#include "levyspde/spectral.hpp"
#include "levyspde/symbol.hpp"
#include "levyspde/test_function.hpp"

namespace levyspde {

struct MomentReport {
  std::string quantity;
  double value = 0.0;
  double error = 0.0;
};

/// lower <= middle <= upper, each margin allowed to dip to -tolerance.
struct InequalityReport {
  std::string quantity;
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  double margin_lo = 0.0;
  double margin_hi = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static InequalityReport make(std::string quantity, double lower, double middle, double upper,
                               double tolerance);
  static std::string csv_header();
  std::string csv_row() const;
};

/// (1 - e^{-2 t u}) / (2u), with its u -> 0 limit t.
double heat_kernel(double u, double t);

/// Per-frequency covariance of the wave mode with frequency omega = sqrt(Psi):
/// integral_0^{min(s,t)} sin(omega (t - r)) sin(omega (s - r)) / omega^2 dr.
double wave_mode_covariance(double psi, double s, double t);

/// Per-frequency E|W(t + eps) - W(t)|^2.
double wave_mode_increment(double psi, double t, double eps);

MomentReport heat_variance(const Symbol& sym, const TestFunction& phi, double t,
                           const QuadratureSpec& q = {});
MomentReport heat_increment_variance(const Symbol& sym, const TestFunction& phi, double t,
                                     double eps, const QuadratureSpec& q = {});
/// Cov(H(t, phi), H(s, psi)) for s <= t. For s < t the multiplier is
///   Re[e^{-(t-s) Psi(xi)} phi_hat conj(psi_hat)] (1 - e^{-2 s Re Psi}) / (2 Re Psi).
Estimate heat_cross_covariance(const Symbol& sym, const TestFunction& phi, const TestFunction& psi,
                               double s, double t, const QuadratureSpec& q = {});

MomentReport wave_variance(const Symbol& sym, const TestFunction& phi, double t,
                           const QuadratureSpec& q = {});
MomentReport wave_increment_variance(const Symbol& sym, const TestFunction& phi, double t,
                                     double eps, const QuadratureSpec& q = {});
Estimate wave_cross_covariance(const Symbol& sym, const TestFunction& phi, const TestFunction& psi,
                               double s, double t, const QuadratureSpec& q = {});

InequalityReport verify_heat_quasi_isometry(const Symbol& sym, const TestFunction& phi, double t,
                                            double lambda, const QuadratureSpec& q = {});
InequalityReport verify_wave_quasi_isometry(const Symbol& sym, const TestFunction& phi, double t,
                                            const QuadratureSpec& q = {});
InequalityReport verify_heat_temporal_bounds(const Symbol& sym, const TestFunction& phi, double t,
                                             double eps, const QuadratureSpec& q = {});
InequalityReport verify_wave_temporal_bounds(const Symbol& sym, const TestFunction& phi, double t,
                                             double eps, const QuadratureSpec& q = {});
InequalityReport verify_spatial_bounds(const Symbol& sym, double t, double x, double y,
                                       const QuadratureSpec& q = {});

struct JointHolder {
  double beta = 0.0;              ///< lower index of the symbol
  double spatial_variance = 0.0;  ///< beta - d
  double temporal_variance = 0.0; ///< (beta - d) / beta
  double spatial_path = 0.0;
  double temporal_path = 0.0;
  double fitted_spatial_path = 0.0;
  double fitted_temporal_path = 0.0;
  bool consistent = false;  ///< fitted >= bound - 0.05 in both directions
};

JointHolder joint_holder_exponents(const Symbol& sym, const QuadratureSpec& q = {});

}  // namespace levyspde
