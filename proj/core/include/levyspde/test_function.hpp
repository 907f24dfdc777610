#pragma once

#include <complex>
#include <string>
#include <vector>

namespace levyspde {

/// Test function given by a closed-form Fourier transform
///   phi_hat(xi) = integral e^{i xi x} phi(x) dx,
/// stored as a finite linear combination of atoms.
class TestFunction {
 public:
  enum class AtomKind { point, gaussian, box };

  struct Atom {
    AtomKind kind = AtomKind::point;
    double center = 0.0;
    double width = 0.0;  ///< std deviation (gaussian) or half-width epsilon (box)
    double weight = 1.0;
  };

  /// e^{i b xi} coef xi^{-power}, the large-frequency expansion of a cross spectrum.
  struct SpectralPiece {
    std::complex<double> coef;
    int power = 0;
    double shift = 0.0;
  };

  TestFunction() = default;

  static TestFunction delta(double x);
  static TestFunction delta_difference(double x, double y);
  /// Unit-mass normal density; |phi_hat|^2 = exp(-width^2 xi^2).
  static TestFunction gaussian(double center, double width);
  /// f_eps^a = (2 eps)^{-1} 1_{[a-eps, a+eps]}; phi_hat(0) = 1.
  static TestFunction box(double center, double radius);

  TestFunction operator+(const TestFunction& other) const;
  TestFunction operator-(const TestFunction& other) const;
  TestFunction operator*(double s) const;

  std::complex<double> hat(double xi) const;
  double hat_abs2(double xi) const;
  /// phi_hat(xi) * conj(psi_hat(xi)), evaluated without cancellation between
  /// atoms at nearby centers.
  std::complex<double> cross(const TestFunction& psi, double xi) const;

  /// Pieces of Re(phi_hat conj psi_hat) for xi > 0 excluding gaussian atoms.
  std::vector<SpectralPiece> cross_pieces(const TestFunction& psi) const;
  /// Frequency beyond which gaussian atoms are negligible (0 if none).
  double gaussian_cutoff() const;

  double value(double x) const;  ///< throws for point atoms
  bool has_points() const;
  bool is_zero() const { return atoms_.empty(); }
  bool radial() const;  ///< a single atom centered at 0 that is a point or gaussian
  /// ||phi||^2 in L^2(dx); +inf when a point atom is present.
  double l2_norm_squared() const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::string describe() const;

 private:
  explicit TestFunction(std::vector<Atom> atoms);
  static double amplitude(const Atom& a, double xi);

  std::vector<Atom> atoms_;
};

}  // namespace levyspde
