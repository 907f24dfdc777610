#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "levyspde/symbol.hpp"

namespace levyspde {

/// Periodic lattice of circumference L with modes xi_k = 2 pi k / L, |k| <= K,
/// on the spatial grid x_j = j L / (2K + 1).
struct Lattice {
  double length = 1.0;
  int modes = 1;  ///< K
  std::vector<double> times;

  void validate() const;
  int points() const { return 2 * modes + 1; }
  double spacing() const { return length / points(); }
  double frequency(int k) const;
  double x(int j) const { return j * spacing(); }
};

enum class FieldKind { heat, wave };

std::string to_string(FieldKind k);

/// u(t_i, x_j) for one replicate, stored row-major by time.
struct FieldSample {
  FieldKind kind = FieldKind::heat;
  std::uint64_t seed = 0;
  std::size_t replicate = 0;
  int points = 0;
  std::vector<double> values;

  double at(std::size_t i, int j) const { return values[i * points + j]; }
  const double* row(std::size_t i) const { return values.data() + i * points; }
};

/// Coefficients phi_hat_k = sum_j phi_j e^{i xi_k x_j} dx for k = -K..K (index k + K).
std::vector<std::complex<double>> lattice_transform(const Lattice& lat, const std::vector<double>& phi);

/// sum_j u_j phi_j dx.
double lattice_pairing(const Lattice& lat, const double* u, const std::vector<double>& phi);

/// Grid function with the given value at j = 0 divided by dx.
std::vector<double> lattice_delta(const Lattice& lat, int j = 0);

/// Var <H(t_i), phi> of the lattice model for every time of the grid.
std::vector<double> lattice_heat_moments(const Symbol& sym, const Lattice& lat,
                                         const std::vector<double>& phi);

/// Cov(<H(t), phi>, <H(s), psi>) of the lattice model, s <= t.
double lattice_heat_covariance(const Symbol& sym, const Lattice& lat, const std::vector<double>& phi,
                               const std::vector<double>& psi, double s, double t);

std::vector<double> lattice_wave_moments(const Symbol& sym, const Lattice& lat,
                                         const std::vector<double>& phi);

double lattice_wave_covariance(const Symbol& sym, const Lattice& lat, const std::vector<double>& phi,
                               const std::vector<double>& psi, double s, double t);

std::vector<FieldSample> simulate_heat_field(const Symbol& sym, const Lattice& lat,
                                             std::uint64_t seed, std::size_t replicates,
                                             int threads = 1);

std::vector<FieldSample> simulate_wave_field(const Symbol& sym, const Lattice& lat,
                                             std::uint64_t seed, std::size_t replicates,
                                             int threads = 1);

enum class Direction { space, time };

struct HolderEstimate {
  double exponent = 0.0;  ///< slope / 2
  double standard_error = 0.0;
  std::vector<double> separations;
  std::vector<double> variances;
};

/// Space: increments over 2^m grid steps (m = 1..5) at the first time.
/// Time: increments u(t_i) - u(t_0) for i >= 1.
HolderEstimate empirical_holder_estimate(const std::vector<FieldSample>& samples,
                                         const Lattice& lat, Direction direction,
                                         std::size_t bootstrap = 200, std::uint64_t seed = 1);

struct SupProbeSpec {
  double length = 1.0;
  int base_points = 16;
  int refinements = 4;  ///< grid levels after the base one
  double t = 1.0;
  std::size_t replicates = 8;
  std::uint64_t seed = 1;
};

struct SupProbeRow {
  int level = 0;
  int points = 0;
  double mean_max = 0.0;       ///< replicate mean of max_j |H(t, x_j)|
  double running_max = 0.0;    ///< max over levels <= this one
};

/// Grid maxima of one coupled heat field resolved on the finest grid, evaluated
/// on dyadically refined nested grids.
std::vector<SupProbeRow> sup_growth_probe(const Symbol& sym, const SupProbeSpec& spec);

/// Heat field at time t on a grid of n points, from modes |k| <= K with the same
/// draws as every other n.
std::vector<double> coupled_heat_profile(const Symbol& sym, double length, int modes, double t,
                                         std::uint64_t seed, std::size_t replicate, int n);

std::string field_csv_header();
void append_field_csv(std::string& out, const FieldSample& s, const Lattice& lat);
std::string field_json_sidecar(const Lattice& lat, const Symbol& sym, std::uint64_t seed,
                               std::size_t replicates, FieldKind kind);

}  // namespace levyspde
