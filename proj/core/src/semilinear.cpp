#include "levyspde/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "levyspde/error.hpp"
#include "levyspde/functionals.hpp"
#include "levyspde/moments.hpp"
#include "fft.hpp"

namespace levyspde {

namespace {

using cplx = std::complex<double>;

cplx mode_symbol(const Symbol& sym, const Lattice& lat, int k) {
  return k == 0 ? cplx(0.0, 0.0) : sym(lat.frequency(k));
}

DensityGrid density_unchecked(const Symbol& sym, double t, const Lattice& lat,
                              const detail::RealDft& dft) {
  const int n = lat.points();
  std::vector<cplx> half(lat.modes + 1);
  for (int k = 0; k <= lat.modes; ++k) half[k] = std::conj(std::exp(-t * mode_symbol(sym, lat, k))) / lat.length;
  DensityGrid p;
  p.t = t;
  p.values.resize(n);
  dft.inverse(half.data(), p.values.data());
  const double dx = lat.spacing();
  double mass = 0.0, removed = 0.0;
  for (double& v : p.values) {
    p.most_negative = std::min(p.most_negative, v);
    if (v < 0.0) {
      removed -= v * dx;
      v = 0.0;
    }
    mass += v * dx;
  }
  p.mass = mass - removed;
  p.clipped_mass = removed;
  for (double& v : p.values) v /= mass;
  require(removed <= 1e-6, ErrorCode::ringing_excess,
          "clipping p_" + std::to_string(t) + " removed mass " + std::to_string(removed));
  return p;
}

std::vector<double> trapezoid_weights(const std::vector<double>& t, std::size_t upto) {
  std::vector<double> w(upto + 1, 0.0);
  for (std::size_t i = 0; i < upto; ++i) {
    const double h = 0.5 * (t[i + 1] - t[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

// Spectra of the densities p_{t_i - t_j}, keyed by the pair.
class DensityBank {
 public:
  DensityBank(const Symbol& sym, const Lattice& lat, const detail::RealDft& dft) : lat_(lat) {
    const auto& t = lat.times;
    const int n = lat.points();
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double tau = t[i] - t[j];
        if (spectra_.count(tau)) continue;
        std::vector<cplx> s(n / 2 + 1);
        if (tau == 0.0) {
          std::fill(s.begin(), s.end(), cplx(1.0, 0.0));
        } else {
          const auto p = density_unchecked(sym, tau, lat, dft);
          clipped_ = std::max(clipped_, p.clipped_mass);
          dft.forward(p.values.data(), s.data());
          for (auto& v : s) v *= lat.spacing();
        }
        spectra_.emplace(tau, std::move(s));
      }
    }
  }
  const std::vector<cplx>& operator()(std::size_t i, std::size_t j) const {
    return spectra_.at(lat_.times[i] - lat_.times[j]);
  }
  double clipped() const { return clipped_; }

 private:
  const Lattice& lat_;
  std::map<double, std::vector<cplx>> spectra_;
  double clipped_ = 0.0;
};

// J(t_i, .) = int_0^{t_i} p_{t_i - s} * b(u(s)) ds by the trapezoid rule.
std::vector<double> drift_term(const std::vector<double>& u, const Nonlinearity& b,
                               const Lattice& lat, const DensityBank& bank,
                               const detail::RealDft& dft) {
  const int n = lat.points();
  const std::size_t m = lat.times.size();
  const int h = n / 2 + 1;
  std::vector<cplx> bhat(m * h);
  std::vector<double> tmp(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (int x = 0; x < n; ++x) tmp[x] = b(u[j * n + x]);
    dft.forward(tmp.data(), bhat.data() + j * h);
  }
  std::vector<double> out(m * n, 0.0);
  std::vector<cplx> acc(h);
  for (std::size_t i = 1; i < m; ++i) {
    const auto w = trapezoid_weights(lat.times, i);
    std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& ph = bank(i, j);
      for (int k = 0; k < h; ++k) acc[k] += w[j] * bhat[j * h + k] * ph[k];
    }
    dft.inverse(acc.data(), out.data() + i * n);
    for (int x = 0; x < n; ++x) out[i * n + x] /= n;
  }
  return out;
}

void require_compatible(const FieldSample& s, const Lattice& lat) {
  require(s.points == lat.points() && s.values.size() == lat.times.size() * lat.points(),
          ErrorCode::precondition, "field sample does not match the lattice");
}

double lambda_for(const Nonlinearity& b) {
  return b.lipschitz() > 0.0 ? 2.0 * b.lipschitz() : 1.0;
}

}  // namespace

Nonlinearity Nonlinearity::parse(const std::string& name, double c) {
  if (name == "zero") return zero();
  if (name == "constant") return constant(c);
  if (name == "tanh") return scaled_tanh(c);
  if (name == "clipped-sine") return clipped_sine(c);
  throw Error(ErrorCode::config_invalid, "unknown nonlinearity '" + name + "'");
}

double Nonlinearity::operator()(double u) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return c;
    case Kind::tanh: return c * std::tanh(u);
    case Kind::clipped_sine: return c * std::sin(std::clamp(u, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi));
  }
  return 0.0;
}

double Nonlinearity::sup() const { return kind == Kind::zero ? 0.0 : std::abs(c); }

double Nonlinearity::lipschitz() const {
  return kind == Kind::tanh || kind == Kind::clipped_sine ? std::abs(c) : 0.0;
}

std::string Nonlinearity::name() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::constant: return "constant";
    case Kind::tanh: return "tanh";
    case Kind::clipped_sine: return "clipped-sine";
  }
  return "zero";
}

DensityGrid transition_density(const Symbol& sym, double t, const Lattice& lat) {
  require(t > 0.0, ErrorCode::precondition, "transition density needs t > 0");
  require(lat.length > 0.0 && lat.modes >= 1, ErrorCode::precondition, "bad lattice");
  require(hawkes_existence(sym).finite, ErrorCode::existence_required,
          sym.describe() + " has no transition density in L^2");
  const detail::RealDft dft(lat.points());
  return density_unchecked(sym, t, lat, dft);
}

double semigroup_defect(const Symbol& sym, double s, double t, const Lattice& lat) {
  const int n = lat.points();
  const detail::RealDft dft(n);
  const auto ps = transition_density(sym, s, lat);
  const auto pt = transition_density(sym, t, lat);
  const auto pst = transition_density(sym, s + t, lat);
  std::vector<cplx> a(n / 2 + 1), b(n / 2 + 1);
  dft.forward(ps.values.data(), a.data());
  dft.forward(pt.values.data(), b.data());
  for (int k = 0; k <= n / 2; ++k) a[k] *= b[k] * lat.spacing() / static_cast<double>(n);
  std::vector<double> conv(n);
  dft.inverse(a.data(), conv.data());
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(conv[j] - pst.values[j]));
  return worst;
}

GrowthReport density_growth(const Symbol& sym, const Lattice& lat) {
  lat.validate();
  GrowthReport g;
  std::vector<double> re(lat.modes + 1);
  for (int k = 0; k <= lat.modes; ++k) re[k] = mode_symbol(sym, lat, k).real();
  auto lattice_sum = [&](auto&& f) {
    double s = f(re[0]);
    for (int k = 1; k <= lat.modes; ++k) s += 2.0 * f(re[k]);
    return s / lat.length;
  };
  g.c_bound = lattice_sum([](double u) { return 0.5 / (1.0 + u); });
  g.bound_holds = true;
  for (double t : lat.times) {
    if (t <= 0.0) continue;
    const double v = lattice_sum([t](double u) { return heat_kernel(u, t); });
    g.times.push_back(t);
    g.values.push_back(v);
    g.bound_holds = g.bound_holds && v <= g.c_bound * std::exp(2.0 * t);
  }
  const std::size_t n = g.times.size();
  if (n >= 2) {
    double mt = 0, ml = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mt += g.times[i] / n;
      ml += std::log(g.values[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (g.times[i] - mt) * (std::log(g.values[i]) - ml);
      sxx += (g.times[i] - mt) * (g.times[i] - mt);
    }
    g.eta_fit = sxy / sxx;
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.c_fit = std::max(g.c_fit, g.values[i] * std::exp(-g.eta_fit * g.times[i]));
  }
  return g;
}

double upsilon_norm(const std::vector<double>& f, const Lattice& lat, double lambda) {
  const int n = lat.points();
  const std::size_t m = lat.times.size();
  const auto w = m > 1 ? trapezoid_weights(lat.times, m - 1) : std::vector<double>{1.0};
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += f[i * n + j] * f[i * n + j];
    s += w[i] * std::exp(-lambda * lat.times[i]) * row * lat.spacing();
  }
  return std::sqrt(s);
}

PicardResult picard_solve(const Symbol& sym, const Nonlinearity& b, const FieldSample& h,
                          const Lattice& lat, double tol, int max_iter) {
  lat.validate();
  require_compatible(h, lat);
  require(lat.times.front() == 0.0, ErrorCode::precondition,
          "Picard solve needs a time grid starting at 0");
  require(tol > 0.0 && max_iter >= 1, ErrorCode::precondition, "bad Picard tolerance");
  const detail::RealDft dft(lat.points());
  const DensityBank bank(sym, lat, dft);

  PicardResult res;
  auto& d = res.diagnostics;
  d.lambda = lambda_for(b);
  d.clipped_mass = bank.clipped();
  const double scale = upsilon_norm(h.values, lat, d.lambda);
  std::vector<double> u(h.values.size(), 0.0), next(h.values.size()), diff(h.values.size());
  for (int it = 1; it <= max_iter; ++it) {
    const auto j = drift_term(u, b, lat, bank, dft);
    for (std::size_t x = 0; x < u.size(); ++x) {
      next[x] = h.values[x] + j[x];
      diff[x] = next[x] - u[x];
    }
    const double dn = upsilon_norm(diff, lat, d.lambda);
    d.differences.push_back(dn);
    if (it >= 2) {
      const double prev = d.differences[it - 2];
      d.ratios.push_back(prev > 0.0 ? dn / prev : 0.0);
    }
    u.swap(next);
    d.iterations = it;
    if (dn <= tol * std::max(scale, 1e-300)) {
      d.converged = true;
      break;
    }
  }
  if (!d.converged) {
    require(d.ratios.empty() || d.ratios.back() < 1.0, ErrorCode::no_convergence,
            "Picard iteration stalled with contraction ratio " + std::to_string(d.ratios.back()));
  }
  res.solution = h;
  res.solution.values = u;
  d.residual = fixed_point_residual(res.solution, h, b, sym, lat);
  return res;
}

double fixed_point_residual(const FieldSample& hb, const FieldSample& h, const Nonlinearity& b,
                            const Symbol& sym, const Lattice& lat) {
  require_compatible(h, lat);
  require_compatible(hb, lat);
  const detail::RealDft dft(lat.points());
  const DensityBank bank(sym, lat, dft);
  const auto j = drift_term(hb.values, b, lat, bank, dft);
  std::vector<double> r(j.size());
  for (std::size_t x = 0; x < r.size(); ++x) r[x] = hb.values[x] - h.values[x] - j[x];
  const double lambda = lambda_for(b);
  const double denom = upsilon_norm(hb.values, lat, lambda);
  const double num = upsilon_norm(r, lat, lambda);
  return denom > 0.0 ? num / denom : num;
}

ColocationReport blowup_colocation_report(const FieldSample& h, const FieldSample& hb,
                                          const Lattice& lat, const Nonlinearity& b,
                                          const std::vector<double>& thresholds) {
  require_compatible(h, lat);
  require_compatible(hb, lat);
  ColocationReport rep;
  const int n = lat.points();
  rep.shift = b.sup() * lat.times.back();
  rep.sup_bound_holds = true;
  for (std::size_t i = 0; i < lat.times.size(); ++i) {
    double mx = 0.0;
    for (int x = 0; x < n; ++x) mx = std::max(mx, std::abs(hb.at(i, x) - h.at(i, x)));
    rep.sup_difference.push_back(mx);
    rep.sup_bound_holds = rep.sup_bound_holds && mx <= b.sup() * lat.times[i] + 1e-6;
  }
  for (double c : thresholds) {
    ColocationRow row;
    row.threshold = c;
    row.inner_inclusion = row.outer_inclusion = row.identical = true;
    for (std::size_t x = 0; x < h.values.size(); ++x) {
      const double a = std::abs(h.values[x]), ab = std::abs(hb.values[x]);
      row.above_h += a > c;
      row.above_hb += ab > c;
      if (a > c + rep.shift && !(ab > c)) row.inner_inclusion = false;
      if (ab > c && !(a > c - rep.shift)) row.outer_inclusion = false;
      if ((a > c) != (ab > c)) row.identical = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace levyspde
