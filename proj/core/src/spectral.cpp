#include "levyspde/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace levyspde {

namespace {

using std::numbers::pi;

struct Term {
  std::function<double(double)> amplitude;
  std::function<double(double)> phase;
};

}  // namespace

HalfLineIntegrand spectral_integrand(const SpectralKernel& k, const TestFunction& phi,
                                     const TestFunction& psi, int dimension) {
  require(static_cast<bool>(k.real) != static_cast<bool>(k.general), ErrorCode::precondition,
          "spectral kernel needs exactly one of a real or a general rule");
  if (dimension > 1) {
    require((phi.is_zero() || phi.radial()) && (psi.is_zero() || psi.radial()),
            ErrorCode::precondition, "dimension > 1 needs radial test functions");
  }
  const double c = sphere_area(dimension) / std::pow(2.0 * pi, dimension);
  const int dm1 = dimension - 1;
  auto weight = [c, dm1](double x) { return dm1 == 0 ? c : c * std::pow(x, dm1); };

  HalfLineIntegrand out;
  out.valid_from = std::max(phi.gaussian_cutoff(), psi.gaussian_cutoff());
  if (k.general) {
    out.full = [=, g = k.general](double x) { return weight(x) * g(x, phi.cross(psi, x)); };
    return out;
  }
  out.full = [=, r = k.real](double x) { return weight(x) * r(x) * phi.cross(psi, x).real(); };

  std::vector<KernelTerm> kterms = k.terms;
  if (kterms.empty()) kterms.push_back({k.real, {}});

  std::vector<std::function<double(double)>> smooth;
  for (const auto& piece : phi.cross_pieces(psi)) {
    const int n = piece.power;
    auto decay = [n](double x) { return n == 0 ? 1.0 : std::pow(x, -n); };
    if (piece.shift == 0.0) {
      const double re = piece.coef.real();
      for (const auto& t : kterms) {
        if (!t.phase) {
          smooth.push_back([=, a = t.amplitude](double x) { return re * decay(x) * a(x); });
        } else {
          out.oscillations.push_back(
              {[=, a = t.amplitude](double x) { return weight(x) * re * decay(x) * a(x); },
               t.phase});
        }
      }
      continue;
    }
    const double mag = std::abs(piece.coef), arg = std::arg(piece.coef), b = piece.shift;
    auto spectral_phase = [b, arg](double x) { return b * x + arg; };
    for (const auto& t : kterms) {
      if (!t.phase) {
        out.oscillations.push_back(
            {[=, a = t.amplitude](double x) { return weight(x) * mag * decay(x) * a(x); },
             spectral_phase});
      } else {
        auto env = [=, a = t.amplitude](double x) { return 0.5 * weight(x) * mag * decay(x) * a(x); };
        out.oscillations.push_back(
            {env, [=, th = t.phase](double x) { return th(x) + spectral_phase(x); }});
        out.oscillations.push_back(
            {env, [=, th = t.phase](double x) { return th(x) - spectral_phase(x); }});
      }
    }
  }
  out.smooth = [=](double x) {
    double v = 0.0;
    for (const auto& s : smooth) v += s(x);
    return weight(x) * v;
  };
  return out;
}

HalfLineResult spectral_integral(const SpectralKernel& k, const TestFunction& phi,
                                 const TestFunction& psi, int dimension, const QuadratureSpec& spec) {
  if (phi.is_zero() || psi.is_zero()) return HalfLineResult{};
  return integrate_halfline(spectral_integrand(k, phi, psi, dimension), 0.0, spec);
}

Estimate finish(const HalfLineResult& r, const char* what) {
  std::ostringstream os;
  switch (r.status) {
    case QuadStatus::converged: return {r.value, r.error};
    case QuadStatus::divergent:
      os << what << ": partial integrals grow with exponent " << r.growth_exponent;
      throw Error(ErrorCode::divergence_detected, os.str());
    case QuadStatus::inconclusive:
    case QuadStatus::tolerance_not_met:
      os << what << ": cutoff " << r.final_cutoff << " reached with error " << r.error;
      throw Error(ErrorCode::tolerance_not_met, os.str());
  }
  return {};
}

}  // namespace levyspde
