#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "levyspde/moments.hpp"
#include "levyspde/symbol.hpp"

namespace levyspde {

/// Nearest-neighbour chain on the circle Z_N, jumping at rate rho/2 to each
/// neighbour, with the uniform probability m as symmetrizing measure.
struct ChainModel {
  int states = 4;
  double rho = 1.0;

  void validate() const;
  /// rho (1 - cos(2 pi k / N)).
  double eigenvalue(int k) const;
  /// Generator matrix, row-major N x N.
  std::vector<double> generator() const;
  /// phi_hat_k = (phi, e_k) in L^2(m), e_k(x) = e^{2 pi i k x / N}.
  std::vector<std::complex<double>> transform(const std::vector<double>& phi) const;
  /// (phi, psi) in L^2(m).
  double inner(const std::vector<double>& phi, const std::vector<double>& psi) const;
};

/// E|u(t, phi)|^2 = int_0^t ||P_s phi||^2 ds.
double chain_heat_variance(const ChainModel& chain, const std::vector<double>& phi, double t);

/// E_m |Z(t, phi)|^2.
double chain_occupation_second_moment(const ChainModel& chain, const std::vector<double>& phi,
                                      double t);

struct LocaltimeReport {
  double lhs = 0.0;  ///< E_m |Z(t, phi)|^2
  double rhs = 0.0;  ///< 4 int_0^t E|u(s/2, phi)|^2 ds by quadrature
  double residual = 0.0;  ///< |lhs - rhs| / max(|lhs|, tiny)
  InequalityReport bounds;  ///< t E|u(t)|^2 / 8 <= lhs <= 4 t E|u(t)|^2
};

LocaltimeReport verify_localtime_identity(const ChainModel& chain, const std::vector<double>& phi,
                                          double t);

struct OccupationResult {
  std::vector<double> values;  ///< Z(t, phi) per replicate
  double second_moment = 0.0;
  double standard_error = 0.0;
};

OccupationResult simulate_chain_occupation(const ChainModel& chain, const std::vector<double>& phi,
                                           double t, std::size_t replicates, std::uint64_t seed,
                                           int threads = 1);

struct ResolventReport {
  double resolvent = 0.0;  ///< (R_lambda phi, phi)
  double predicted = 0.0;  ///< (2 / lambda) (R_lambda phi, phi)
  double mc_second_moment = 0.0;  ///< E_m |Z(T_lambda, phi)|^2 by Monte Carlo
  double mc_standard_error = 0.0;
  double z_score = 0.0;
  double u_lhs = 0.0;  ///< E|u(T_{2 lambda}, phi)|^2
  double u_rhs = 0.0;  ///< (R_lambda phi, phi) / 2
  double u_residual = 0.0;
};

ResolventReport chain_resolvent_identities(const ChainModel& chain, const std::vector<double>& phi,
                                           double lambda, std::size_t replicates,
                                           std::uint64_t seed, int threads = 1);

struct LevyOccupationRow {
  double eps = 0.0;
  double next_eps = 0.0;
  double d = 0.0;  ///< sample E|Z(t, f_eps) - Z(t, f_next)|^2
  double standard_error = 0.0;
};

enum class OccupationTrend { contracting, non_contracting, inconclusive };

std::string to_string(OccupationTrend t);

struct LevyOccupationReport {
  double alpha = 0.0;
  std::vector<LevyOccupationRow> rows;
  OccupationTrend trend = OccupationTrend::inconclusive;
  double final_over_initial = 0.0;
  double mean_occupation = 0.0;  ///< sample E_0 Z(t, f_eps) at the smallest eps
  double mean_standard_error = 0.0;
  double local_time_mean = 0.0;  ///< E_0 L_t(a) when known in closed form, NaN otherwise
  double dt = 0.0;
};

/// Largest step allowed for the occupation experiment: the typical increment over
/// one step stays below eps_min / 10.
double levy_step_bound(const Symbol& sym, double eps_min);

/// Occupation functionals Z(t, f_eps^a), f_eps^a = 1{|x - a| < eps} / (2 eps), along
/// paths of the Lévy process with exponent Re Psi started at 0.
LevyOccupationReport levy_occupation_experiment(const Symbol& sym, double a,
                                                const std::vector<double>& eps, double t,
                                                std::size_t replicates, double dt,
                                                std::uint64_t seed, int threads = 1);

std::string chain_csv_header();
std::string chain_csv_row(const ChainModel& chain, const std::string& phi_id, double t,
                          const LocaltimeReport& r);

}  // namespace levyspde
