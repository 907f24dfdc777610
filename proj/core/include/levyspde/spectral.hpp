#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levyspde/error.hpp"
#include "levyspde/quadrature.hpp"
#include "levyspde/test_function.hpp"

namespace levyspde {

/// amplitude(xi) * cos(phase(xi)); an empty phase marks a non-oscillating term.
struct KernelTerm {
  std::function<double(double)> amplitude;
  std::function<double(double)> phase;
};

/// Frequency multiplier of a spectral functional
///   (2 pi)^-d  integral over R^d of  K(xi, phi_hat(xi) conj(psi_hat(xi))) d xi.
/// A real kernel gives K = real(xi) * Re(cross); `terms` then decomposes real()
/// for large xi (defaults to a single smooth term). A general kernel must decay
/// so that no tail decomposition is needed.
struct SpectralKernel {
  std::function<double(double)> real;
  std::vector<KernelTerm> terms;
  std::function<double(double, std::complex<double>)> general;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  operator double() const { return value; }
};

HalfLineIntegrand spectral_integrand(const SpectralKernel& k, const TestFunction& phi,
                                     const TestFunction& psi, int dimension);

HalfLineResult spectral_integral(const SpectralKernel& k, const TestFunction& phi,
                                 const TestFunction& psi, int dimension, const QuadratureSpec& spec);

/// Converts a half-line result into an estimate, throwing divergence-detected or
/// tolerance-not-met.
Estimate finish(const HalfLineResult& r, const char* what);

}  // namespace levyspde
