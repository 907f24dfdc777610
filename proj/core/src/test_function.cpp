#include "levyspde/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "levyspde/error.hpp"

namespace levyspde {

namespace {

using std::numbers::pi;

double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

bool same_atom(const TestFunction::Atom& a, const TestFunction::Atom& b) {
  return a.kind == b.kind && a.center == b.center && a.width == b.width;
}

}  // namespace

TestFunction::TestFunction(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    auto it = std::find_if(atoms_.begin(), atoms_.end(), [&](const Atom& b) { return same_atom(a, b); });
    if (it == atoms_.end()) atoms_.push_back(a);
    else it->weight += a.weight;
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

TestFunction TestFunction::delta(double x) {
  require(std::isfinite(x), ErrorCode::precondition, "delta location must be finite");
  return TestFunction({Atom{AtomKind::point, x, 0.0, 1.0}});
}

TestFunction TestFunction::delta_difference(double x, double y) {
  return delta(x) - delta(y);
}

TestFunction TestFunction::gaussian(double center, double width) {
  require(width > 0.0 && std::isfinite(center), ErrorCode::precondition,
          "gaussian test function needs a finite center and width > 0");
  return TestFunction({Atom{AtomKind::gaussian, center, width, 1.0}});
}

TestFunction TestFunction::box(double center, double radius) {
  require(radius > 0.0 && std::isfinite(center), ErrorCode::precondition,
          "box test function needs a finite center and radius > 0");
  return TestFunction({Atom{AtomKind::box, center, radius, 1.0}});
}

TestFunction TestFunction::operator+(const TestFunction& other) const {
  auto all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return TestFunction(std::move(all));
}

TestFunction TestFunction::operator-(const TestFunction& other) const {
  return *this + other * -1.0;
}

TestFunction TestFunction::operator*(double s) const {
  auto all = atoms_;
  for (auto& a : all) a.weight *= s;
  return TestFunction(std::move(all));
}

double TestFunction::amplitude(const Atom& a, double xi) {
  switch (a.kind) {
    case AtomKind::point: return 1.0;
    case AtomKind::gaussian: return std::exp(-0.5 * a.width * a.width * xi * xi);
    case AtomKind::box: return sinc(a.width * xi);
  }
  return 0.0;
}

std::complex<double> TestFunction::hat(double xi) const {
  std::complex<double> s = 0.0;
  for (const auto& a : atoms_) s += a.weight * amplitude(a, xi) * std::polar(1.0, a.center * xi);
  return s;
}

std::complex<double> TestFunction::cross(const TestFunction& psi, double xi) const {
  double sa = 0.0, sb = 0.0;
  std::vector<double> amp_a(atoms_.size()), amp_b(psi.atoms_.size());
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    amp_a[j] = atoms_[j].weight * amplitude(atoms_[j], xi);
    sa += amp_a[j];
  }
  for (std::size_t k = 0; k < psi.atoms_.size(); ++k) {
    amp_b[k] = psi.atoms_[k].weight * amplitude(psi.atoms_[k], xi);
    sb += amp_b[k];
  }
  // sum_jk A_j B_k e^{i d xi} = (sum A)(sum B) + sum_jk A_j B_k (e^{i d xi} - 1)
  double re = sa * sb, im = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    for (std::size_t k = 0; k < psi.atoms_.size(); ++k) {
      const double d = (atoms_[j].center - psi.atoms_[k].center) * xi;
      if (d == 0.0) continue;
      const double s = std::sin(0.5 * d);
      const double ab = amp_a[j] * amp_b[k];
      re += ab * (-2.0 * s * s);
      im += ab * std::sin(d);
    }
  }
  return {re, im};
}

double TestFunction::hat_abs2(double xi) const { return std::max(0.0, cross(*this, xi).real()); }

std::vector<TestFunction::SpectralPiece> TestFunction::cross_pieces(const TestFunction& psi) const {
  auto expand = [](const TestFunction& f) {
    std::vector<SpectralPiece> out;
    for (const auto& a : f.atoms_) {
      if (a.kind == AtomKind::point) {
        out.push_back({a.weight, 0, a.center});
      } else if (a.kind == AtomKind::box) {
        const double c = a.weight / (2.0 * a.width);
        out.push_back({std::complex<double>(0.0, -c), 1, a.center + a.width});
        out.push_back({std::complex<double>(0.0, c), 1, a.center - a.width});
      }
    }
    return out;
  };
  const auto pa = expand(*this), pb = expand(psi);
  std::vector<SpectralPiece> out;
  for (const auto& x : pa) {
    for (const auto& y : pb) {
      SpectralPiece p{x.coef * std::conj(y.coef), x.power + y.power, x.shift - y.shift};
      auto it = std::find_if(out.begin(), out.end(), [&](const SpectralPiece& o) {
        return o.power == p.power && o.shift == p.shift;
      });
      if (it == out.end()) out.push_back(p);
      else it->coef += p.coef;
    }
  }
  std::erase_if(out, [](const SpectralPiece& p) { return std::abs(p.coef) == 0.0; });
  return out;
}

double TestFunction::gaussian_cutoff() const {
  double cut = 0.0;
  for (const auto& a : atoms_) {
    if (a.kind == AtomKind::gaussian) cut = std::max(cut, 12.0 / a.width);
  }
  return cut;
}

double TestFunction::value(double x) const {
  double v = 0.0;
  for (const auto& a : atoms_) {
    switch (a.kind) {
      case AtomKind::point:
        throw Error(ErrorCode::precondition, "point masses have no pointwise value");
      case AtomKind::gaussian: {
        const double z = (x - a.center) / a.width;
        v += a.weight * std::exp(-0.5 * z * z) / (a.width * std::sqrt(2.0 * pi));
        break;
      }
      case AtomKind::box:
        if (std::abs(x - a.center) <= a.width) v += a.weight / (2.0 * a.width);
        break;
    }
  }
  return v;
}

bool TestFunction::has_points() const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.kind == AtomKind::point; });
}

bool TestFunction::radial() const {
  return atoms_.size() == 1 && atoms_[0].center == 0.0 && atoms_[0].kind != AtomKind::box;
}

double TestFunction::l2_norm_squared() const {
  if (has_points()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (const auto& a : atoms_) {
    for (const auto& b : atoms_) {
      const double ww = a.weight * b.weight;
      if (a.kind == AtomKind::gaussian && b.kind == AtomKind::gaussian) {
        const double v = a.width * a.width + b.width * b.width;
        const double d = a.center - b.center;
        s += ww * std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * pi * v);
      } else if (a.kind == AtomKind::box && b.kind == AtomKind::box) {
        const double lo = std::max(a.center - a.width, b.center - b.width);
        const double hi = std::min(a.center + a.width, b.center + b.width);
        if (hi > lo) s += ww * (hi - lo) / (4.0 * a.width * b.width);
      } else {
        const Atom& g = a.kind == AtomKind::gaussian ? a : b;
        const Atom& x = a.kind == AtomKind::gaussian ? b : a;
        const double mass = normal_cdf((x.center + x.width - g.center) / g.width) -
                            normal_cdf((x.center - x.width - g.center) / g.width);
        s += ww * mass / (2.0 * x.width);
      }
    }
  }
  return s;
}

std::string TestFunction::describe() const {
  if (atoms_.empty()) return "zero";
  std::ostringstream os;
  os.precision(10);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (i > 0) os << (a.weight < 0 ? " - " : " + ");
    else if (a.weight < 0) os << "-";
    if (std::abs(a.weight) != 1.0) os << std::abs(a.weight) << "*";
    switch (a.kind) {
      case AtomKind::point: os << "delta(" << a.center << ")"; break;
      case AtomKind::gaussian: os << "gaussian(" << a.center << "," << a.width << ")"; break;
      case AtomKind::box: os << "box(" << a.center << "," << a.width << ")"; break;
    }
  }
  return os.str();
}

}  // namespace levyspde
