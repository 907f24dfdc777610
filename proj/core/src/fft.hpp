#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace levyspde::detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalized real DFT pair of size n, usable from several threads at once.
///   forward: X_k = sum_j x_j e^{-2 pi i jk/n}, k = 0..n/2
///   inverse: x_j = sum_k X_k e^{+2 pi i jk/n} over the Hermitian extension
class RealDft {
 public:
  explicit RealDft(int n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    std::vector<double> r(n);
    std::vector<std::complex<double>> c(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_r2c_1d(n, r.data(), reinterpret_cast<fftw_complex*>(c.data()), flags);
    inv_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                flags | FFTW_DESTROY_INPUT);
  }
  ~RealDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  int size() const { return n_; }

  void forward(const double* x, std::complex<double>* out) const {
    fftw_execute_dft_r2c(fwd_, const_cast<double*>(x), reinterpret_cast<fftw_complex*>(out));
  }

  /// `half` is overwritten.
  void inverse(std::complex<double>* half, double* out) const {
    half[0].imag(0.0);
    fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(half), out);
  }

 private:
  int n_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

}  // namespace levyspde::detail
