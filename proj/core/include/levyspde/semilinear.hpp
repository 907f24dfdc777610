#pragma once

#include <string>
#include <vector>

#include "levyspde/sampler.hpp"
#include "levyspde/symbol.hpp"

namespace levyspde {

/// Bounded globally Lipschitz drift b.
struct Nonlinearity {
  enum class Kind { zero, constant, tanh, clipped_sine };

  Kind kind = Kind::zero;
  double c = 0.0;

  static Nonlinearity zero() { return {Kind::zero, 0.0}; }
  static Nonlinearity constant(double c) { return {Kind::constant, c}; }
  /// c tanh(u)
  static Nonlinearity scaled_tanh(double c = 1.0) { return {Kind::tanh, c}; }
  /// c sin(u) on [-pi/2, pi/2], constant beyond.
  static Nonlinearity clipped_sine(double c = 1.0) { return {Kind::clipped_sine, c}; }
  /// zero | constant | tanh | clipped-sine
  static Nonlinearity parse(const std::string& name, double c);

  double operator()(double u) const;
  double sup() const;
  double lipschitz() const;
  std::string name() const;
};

/// p_t on the lattice grid, x_j = j dx taken cyclically.
struct DensityGrid {
  double t = 0.0;
  std::vector<double> values;
  double mass = 0.0;           ///< sum p dx before renormalization
  double clipped_mass = 0.0;   ///< mass removed by clipping negative values
  double most_negative = 0.0;  ///< smallest value before clipping

  double at(int j) const { return values[j]; }
};

/// Lattice inversion p_t(x_j) = L^-1 sum_k e^{-i xi_k x_j - t Psi(xi_k)}, negative
/// values clipped and the mass renormalized to 1.
DensityGrid transition_density(const Symbol& sym, double t, const Lattice& lat);

/// Max over the lattice of |p_s * p_t - p_{s+t}| with cyclic convolution.
double semigroup_defect(const Symbol& sym, double s, double t, const Lattice& lat);

struct GrowthReport {
  std::vector<double> times;
  std::vector<double> values;  ///< int_0^t ||p_s||^2 ds on the lattice
  double c_fit = 0.0;          ///< smallest C with values <= C e^{eta_fit t} on the grid
  double eta_fit = 0.0;        ///< least-squares slope of log values against t
  double c_bound = 0.0;        ///< L^-1 sum_k 1 / (2 (1 + Re Psi_k)), valid with rate 2
  bool bound_holds = false;    ///< values <= c_bound e^{2t} on the grid
};

GrowthReport density_growth(const Symbol& sym, const Lattice& lat);

struct PicardDiagnostics {
  double lambda = 0.0;
  std::vector<double> differences;  ///< D_n = ||u_n - u_{n-1}||, n = 1, 2, ...
  std::vector<double> ratios;       ///< D_n / D_{n-1}, n >= 2
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  double clipped_mass = 0.0;  ///< largest clipped mass over the densities used
};

struct PicardResult {
  FieldSample solution;
  PicardDiagnostics diagnostics;
};

/// Weighted norm sum_i w_i e^{-lambda t_i} sum_j |f_ij|^2 dx, square-rooted,
/// with trapezoid weights w_i on the time grid.
double upsilon_norm(const std::vector<double>& f, const Lattice& lat, double lambda);

/// Fixed point of u = H + int_0^t p_{t-s} * b(u(s)) ds from u_0 = 0. The time
/// grid must start at 0. Stops when D_n <= tol ||H||.
PicardResult picard_solve(const Symbol& sym, const Nonlinearity& b, const FieldSample& h,
                          const Lattice& lat, double tol = 1e-10, int max_iter = 60);

/// ||H_b - H - J(b(H_b))|| / ||H_b||.
double fixed_point_residual(const FieldSample& hb, const FieldSample& h, const Nonlinearity& b,
                            const Symbol& sym, const Lattice& lat);

struct ColocationRow {
  double threshold = 0.0;
  std::size_t above_h = 0;       ///< #{|H| > c}
  std::size_t above_hb = 0;      ///< #{|H_b| > c}
  bool inner_inclusion = false;  ///< {|H| > c + s} within {|H_b| > c}
  bool outer_inclusion = false;  ///< {|H_b| > c} within {|H| > c - s}
  bool identical = false;        ///< {|H| > c} == {|H_b| > c}
};

struct ColocationReport {
  double shift = 0.0;  ///< s = sup|b| T
  std::vector<double> sup_difference;  ///< max_x |H_b - H| per time
  bool sup_bound_holds = false;        ///< sup_difference_i <= sup|b| t_i + 1e-6
  std::vector<ColocationRow> rows;
};

ColocationReport blowup_colocation_report(const FieldSample& h, const FieldSample& hb,
                                          const Lattice& lat, const Nonlinearity& b,
                                          const std::vector<double>& thresholds);

}  // namespace levyspde
