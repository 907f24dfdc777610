#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace oracle {

/// Fixed composite 20-point Gauss-Legendre on equal panels.
inline double composite(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + h);
  }
  return sum;
}

/// Composite rule on geometric panels lo * r^k covering [lo, hi], with `per` equal
/// sub-panels inside each.
inline double geometric(const std::function<double(double)>& f, double lo, double hi,
                        int decades_panels, int per) {
  const double r = std::pow(hi / lo, 1.0 / decades_panels);
  double sum = 0.0;
  double a = lo;
  for (int k = 0; k < decades_panels; ++k) {
    const double b = a * r;
    sum += composite(f, a, b, per);
    a = b;
  }
  return sum;
}

/// Integral over [0, hi]: [0, 1] by equal panels, [1, hi] by geometric ones.
inline double halfline(const std::function<double(double)>& f, double hi, int per = 40) {
  const int decades = static_cast<int>(std::ceil(std::log10(hi)));
  return composite(f, 0.0, 1.0, per) + geometric(f, 1.0, hi, 10 * decades, per);
}

}  // namespace oracle
