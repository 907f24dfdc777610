#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace levyspde {

class Symbol;

/// A point mass of the Lévy measure.
struct JumpAtom {
  double location = 0.0;
  double mass = 0.0;
};

/// Lévy–Khintchine data with a finite atomic jump measure. The exponent is
///   Psi(xi) = -i*drift*xi + sigma2*xi^2/2 + sum_j m_j (1 - e^{i xi x_j} + i xi x_j 1{|x_j|<1}),
/// so that the symmetrization has exponent sigma2*xi^2 + 2 sum_j m_j (1 - cos(xi x_j)).
struct LevyTriplet {
  double sigma2 = 0.0;
  double drift = 0.0;
  std::vector<JumpAtom> jumps;

  /// Throws precondition when sigma2 < 0, a mass is negative, or
  /// the integral of (1 ∧ x^2) against the jump measure is not finite.
  void validate() const;
};

namespace symbol_kind {

/// Psi(xi) = scale * |xi|^2. The default scale = 1 gives X_t ~ N(0, 2t);
/// scale = 1/2 gives the probabilists' Brownian motion.
struct Brownian {
  double scale = 1.0;
};

/// Psi(xi) = scale * |xi|^alpha * (1 - i*skew*sgn(xi)*tan(pi*alpha/2)) for alpha != 1,
/// scale * |xi| * (1 + i*skew*(2/pi)*sgn(xi)*log|xi|) for alpha == 1.
struct Stable {
  double alpha = 2.0;
  double scale = 1.0;
  double skew = 0.0;
};

struct LevyKhintchine {
  LevyTriplet triplet;
};

/// Psi(xi) = scale * |xi| * (log(e + |xi|))^power; symmetric.
struct LogPerturbed {
  double power = 3.0;
  double scale = 1.0;
};

/// Values of Psi on a strictly increasing positive frequency grid, linearly
/// interpolated in log-frequency. Negative frequencies use Hermitian symmetry.
struct Tabulated {
  std::vector<double> frequency;
  std::vector<double> real;
  std::vector<double> imag;
};

/// 2 * Re(Psi_base).
struct Symmetrized {
  std::shared_ptr<const Symbol> base;
};

}  // namespace symbol_kind

struct StableLaw {
  double alpha;
  double scale;
};

/// Characteristic exponent Psi of a Lévy process, normalized so that
/// E exp(i xi X_t) = exp(-t Psi(xi)). Immutable; evaluation is pure.
/// For dimension > 1 the symbol is radial and is evaluated at |xi|.
class Symbol {
 public:
  using Kind = std::variant<symbol_kind::Brownian, symbol_kind::Stable, symbol_kind::LevyKhintchine,
                            symbol_kind::LogPerturbed, symbol_kind::Tabulated,
                            symbol_kind::Symmetrized>;

  static Symbol brownian(double scale = 1.0, int dimension = 1);
  static Symbol stable(double alpha, double scale = 1.0, double skew = 0.0, int dimension = 1);
  static Symbol levy_khintchine(LevyTriplet triplet, int dimension = 1);
  static Symbol log_perturbed(double power, double scale = 1.0, int dimension = 1);
  static Symbol tabulated(std::vector<double> frequency, std::vector<double> real,
                          std::vector<double> imag, int dimension = 1);

  /// Throws out_of_range for tabulated symbols queried beyond the table.
  std::complex<double> operator()(double xi) const;
  double real_part(double xi) const { return (*this)(xi).real(); }

  int dimension() const noexcept { return dimension_; }
  bool symmetric() const noexcept { return symmetric_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string kind_name() const;
  std::string describe() const;

  /// Stable/Brownian law of the symmetric part, when the symbol has one.
  std::optional<StableLaw> stable_law() const;

 private:
  Symbol(Kind kind, int dimension, bool symmetric);

  Kind kind_;
  int dimension_ = 1;
  bool symmetric_ = true;

  friend Symbol symmetrize(const Symbol& sym);
};

/// Symbol of the symmetrized process (difference of two independent copies):
/// exponent xi -> 2 Re Psi(xi).
Symbol symmetrize(const Symbol& sym);

struct LowerIndexEstimate {
  double value = 0.0;  ///< minimum of the local log-log slopes over the tail window
  double fitted_slope = 0.0;
  double log_ratio_minimum = 0.0;  ///< min of log Re Psi / log xi over the same window
};

/// Blumenthal–Getoor lower index. `probe` must be strictly increasing with
/// at least 16 points spanning at least 6 decades.
LowerIndexEstimate lower_index(const Symbol& sym, std::span<const double> probe);

/// Geometric grid lo * ratio^k with `count` points.
std::vector<double> geometric_grid(double lo, double ratio, std::size_t count);

}  // namespace levyspde
