#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyspde/quadrature.hpp"
#include "levyspde/spectral.hpp"
#include "levyspde/symbol.hpp"
#include "levyspde/test_function.hpp"

namespace levyspde {

/// Smallest power of ten at which Re Psi reaches `level`; 0 when it never does.
double crossover_frequency(const Symbol& sym, double level);

/// Throws divergence-detected when phi has point masses and the Hawkes
/// integral of sym is not finite.
void require_admissible(const Symbol& sym, const TestFunction& phi, const QuadratureSpec& q);

/// (2 pi)^-d  integral |phi_hat|^2 / (1/lambda + Re Psi).
Estimate energy_E(const Symbol& sym, const TestFunction& phi, double lambda,
                  const QuadratureSpec& q = {});

/// (2 pi)^-d  integral (1 ∧ eps^2 |Psi|^2) |phi_hat|^2 / (1 + Re Psi).
Estimate energy_F(const Symbol& sym, const TestFunction& phi, double eps,
                  const QuadratureSpec& q = {});

struct HawkesResult {
  bool finite = false;
  double value = 0.0;             ///< integral when finite, last partial integral otherwise
  double growth_exponent = 0.0;  ///< fitted growth of the partial integrals when divergent
  HalfLineResult detail;
};

/// Classifies  integral over R^d of d xi / (theta + Re Psi(xi)).
HawkesResult hawkes_existence(const Symbol& sym, double theta = 1.0, const QuadratureSpec& q = {});

/// h(r) = (1/2 pi) integral (1 - cos(r xi)) / (1 + Re Psi(xi)) d xi.
Estimate h_function(const Symbol& sym, double r, const QuadratureSpec& q = {});

/// Nondecreasing rearrangement of a function tabulated on a grid, evaluated as a
/// right-continuous step function.
struct Rearrangement {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<bool> flagged;  ///< empty infimum, largest sampled value returned

  double operator()(double r) const;
};

Rearrangement rearrange_nondecreasing(const std::vector<double>& grid,
                                      const std::vector<double>& samples);

struct BarlowResult {
  Trend trend = Trend::inconclusive;
  bool holds = false;
  double value = 0.0;  ///< partial integral from the smallest delta
  double ratio = 0.0;
  std::vector<double> deltas;
  std::vector<double> partials;
  Rearrangement profile;
};

/// Grid on [0, 1] used to tabulate h for the Barlow test.
std::vector<double> barlow_grid();

/// Integral of hbar(r) / (r |log r|^{1/2}) over [delta, r0] for a step profile.
double barlow_partial(const Rearrangement& hbar, double delta, double r0 = 0.5);

BarlowResult barlow_condition_from_profile(const Rearrangement& hbar);
BarlowResult barlow_condition(const Symbol& sym, const QuadratureSpec& q = {});

struct IndexEstimate {
  double value = 0.0;  ///< minimum local log-log slope over the last 10 grid points
  double log_ratio_minimum = 0.0;
  double fitted_slope = 0.0;
  std::vector<double> grid;
  std::vector<double> samples;
};

/// Tail-window index of a sampled curve y(x) as x -> 0 along a decreasing grid.
IndexEstimate small_scale_index(const std::vector<double>& grid, const std::vector<double>& samples);

/// liminf_{eps -> 0} log E(eps; phi) / log eps on eps = 2^-j, j = 1..40.
IndexEstimate lower_index_E(const Symbol& sym, const TestFunction& phi, const QuadratureSpec& q = {});

/// liminf_{r -> 0} log h(r) / log r on r = 2^-j, j = 1..40.
IndexEstimate lower_index_h(const Symbol& sym, const QuadratureSpec& q = {});

struct GaugeSpec {
  std::function<double(double)> g;
  bool declared_increasing = true;
  std::string name;
};

struct GaugeReport {
  bool monotone = false;
  bool slowly_varying = false;
  Trend integrable = Trend::inconclusive;
  double variation_ratio = 0.0;  ///< g(2s)/g(s) at the largest probe
  double trend_ratio = 0.0;
  bool is_gauge = false;
};

/// An ambiguous integrability trend is reported as Trend::inconclusive.
GaugeReport is_gauge(const GaugeSpec& g);

struct ConditionResult {
  bool finite = false;
  double value = 0.0;
  HalfLineResult detail;
};

/// Finiteness of  integral log(1 + Re Psi) g(1 + |Psi|) / (1 + Re Psi) |phi_hat|^2 d xi.
ConditionResult temporal_continuity_condition(const Symbol& sym, const TestFunction& phi,
                                              const GaugeSpec& g, const QuadratureSpec& q = {});

struct SlowVariationTail {
  double integral = 0.0;
  double ratio = 0.0;  ///< integral / (g(x) / ((alpha - 1) x^{alpha - 1}))
};

SlowVariationTail slow_variation_tail(const GaugeSpec& g, double alpha, double x,
                                      const QuadratureSpec& q = {});

}  // namespace levyspde
