#include "levyspde/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include "json.hpp"
#include <sstream>

#include "levyspde/error.hpp"
#include "levyspde/functionals.hpp"
#include "levyspde/moments.hpp"
#include "levyspde/rng.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace levyspde {

namespace {

using cplx = std::complex<double>;

cplx mode_symbol(const Symbol& sym, const Lattice& lat, int k) {
  if (k == 0) return {0.0, 0.0};
  return sym(lat.frequency(k));
}

std::vector<cplx> mode_symbols(const Symbol& sym, const Lattice& lat) {
  std::vector<cplx> out(lat.modes + 1);
  for (int k = 0; k <= lat.modes; ++k) out[k] = mode_symbol(sym, lat, k);
  return out;
}

void require_symmetric(const Symbol& sym) {
  require(sym.symmetric(), ErrorCode::symmetry_required,
          "wave sampling needs a symmetric symbol, got " + sym.describe());
}

template <class Kernel>
double lattice_sum(const Lattice& lat, const std::vector<double>& phi, const std::vector<double>& psi,
                   Kernel&& kernel) {
  const auto a = lattice_transform(lat, phi);
  const auto b = lattice_transform(lat, psi);
  double s = 0.0;
  for (int k = -lat.modes; k <= lat.modes; ++k) {
    s += kernel(k, a[k + lat.modes] * std::conj(b[k + lat.modes]));
  }
  return s / lat.length;
}

}  // namespace

void Lattice::validate() const {
  require(length > 0.0 && std::isfinite(length), ErrorCode::precondition, "lattice length must be > 0");
  require(modes >= 1, ErrorCode::precondition, "lattice needs K >= 1");
  require(!times.empty(), ErrorCode::precondition, "lattice time grid is empty");
  require(times.front() >= 0.0, ErrorCode::precondition, "lattice times must be >= 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] > times[i - 1], ErrorCode::precondition,
            "lattice time grid must be strictly increasing");
  }
}

double Lattice::frequency(int k) const { return 2.0 * std::numbers::pi * k / length; }

std::string to_string(FieldKind k) { return k == FieldKind::heat ? "heat" : "wave"; }

std::vector<cplx> lattice_transform(const Lattice& lat, const std::vector<double>& phi) {
  const int n = lat.points();
  require(static_cast<int>(phi.size()) == n, ErrorCode::precondition,
          "grid function size does not match the lattice");
  std::vector<cplx> out(n);
  const double dx = lat.spacing();
  for (int k = -lat.modes; k <= lat.modes; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (phi[j] == 0.0) continue;
      const double th = 2.0 * std::numbers::pi * ((static_cast<long long>(k) * j) % n) / n;
      s += phi[j] * cplx(std::cos(th), std::sin(th));
    }
    out[k + lat.modes] = s * dx;
  }
  return out;
}

double lattice_pairing(const Lattice& lat, const double* u, const std::vector<double>& phi) {
  double s = 0.0;
  for (int j = 0; j < lat.points(); ++j) s += u[j] * phi[j];
  return s * lat.spacing();
}

std::vector<double> lattice_delta(const Lattice& lat, int j) {
  std::vector<double> phi(lat.points(), 0.0);
  phi.at(j) = 1.0 / lat.spacing();
  return phi;
}

std::vector<double> lattice_heat_moments(const Symbol& sym, const Lattice& lat,
                                         const std::vector<double>& phi) {
  lat.validate();
  std::vector<double> out;
  for (double t : lat.times) out.push_back(lattice_heat_covariance(sym, lat, phi, phi, t, t));
  return out;
}

double lattice_heat_covariance(const Symbol& sym, const Lattice& lat, const std::vector<double>& phi,
                               const std::vector<double>& psi, double s, double t) {
  require(0.0 <= s && s <= t, ErrorCode::precondition, "lattice covariance needs 0 <= s <= t");
  return lattice_sum(lat, phi, psi, [&](int k, cplx c) {
    const cplx z = mode_symbol(sym, lat, k);
    return (std::exp(-(t - s) * z) * c).real() * heat_kernel(z.real(), s);
  });
}

std::vector<double> lattice_wave_moments(const Symbol& sym, const Lattice& lat,
                                         const std::vector<double>& phi) {
  lat.validate();
  std::vector<double> out;
  for (double t : lat.times) out.push_back(lattice_wave_covariance(sym, lat, phi, phi, t, t));
  return out;
}

double lattice_wave_covariance(const Symbol& sym, const Lattice& lat, const std::vector<double>& phi,
                               const std::vector<double>& psi, double s, double t) {
  require_symmetric(sym);
  require(0.0 <= s && s <= t, ErrorCode::precondition, "lattice covariance needs 0 <= s <= t");
  return lattice_sum(lat, phi, psi, [&](int k, cplx c) {
    return c.real() * wave_mode_covariance(mode_symbol(sym, lat, k).real(), s, t);
  });
}

std::vector<FieldSample> simulate_heat_field(const Symbol& sym, const Lattice& lat,
                                             std::uint64_t seed, std::size_t replicates,
                                             int threads) {
  lat.validate();
  require(replicates >= 1, ErrorCode::precondition, "need at least one replicate");
  const int n = lat.points();
  const auto psi = mode_symbols(sym, lat);
  const std::size_t m = lat.times.size();
  // Per-step decay and noise scale.
  std::vector<cplx> decay((lat.modes + 1) * m);
  std::vector<double> noise((lat.modes + 1) * m);
  for (int k = 0; k <= lat.modes; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      const double dt = lat.times[i] - (i == 0 ? 0.0 : lat.times[i - 1]);
      decay[k * m + i] = std::exp(-dt * psi[k]);
      noise[k * m + i] = std::sqrt(heat_kernel(psi[k].real(), dt) / (k == 0 ? 1.0 : 2.0));
    }
  }
  const KeyedRng rng(seed);
  const detail::RealDft dft(n);
  const double norm = 1.0 / std::sqrt(lat.length);
  std::vector<FieldSample> out(replicates);
  detail::parallel_for(replicates, threads, [&](std::size_t r) {
    FieldSample& s = out[r];
    s.kind = FieldKind::heat;
    s.seed = seed;
    s.replicate = r;
    s.points = n;
    s.values.resize(m * n);
    std::vector<cplx> a(lat.modes + 1, 0.0), half(lat.modes + 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (int k = 0; k <= lat.modes; ++k) {
        const double sd = noise[k * m + i];
        cplx eta = 0.0;
        if (sd > 0.0) {
          const cplx z = rng.normals(Stream::heat, r, k, static_cast<std::uint32_t>(i));
          eta = k == 0 ? cplx(sd * z.real(), 0.0) : sd * z;
        }
        a[k] = decay[k * m + i] * a[k] + eta;
        half[k] = a[k] * norm;
      }
      dft.inverse(half.data(), s.values.data() + i * n);
    }
  });
  return out;
}

std::vector<FieldSample> simulate_wave_field(const Symbol& sym, const Lattice& lat,
                                             std::uint64_t seed, std::size_t replicates,
                                             int threads) {
  require_symmetric(sym);
  lat.validate();
  require(replicates >= 1, ErrorCode::precondition, "need at least one replicate");
  const int n = lat.points();
  const auto psi = mode_symbols(sym, lat);
  const std::size_t m = lat.times.size();
  // Times equal to 0 carry the zero initial condition and stay out of the factorization.
  std::size_t first = 0;
  while (first < m && lat.times[first] == 0.0) ++first;
  const std::size_t q = m - first;
  std::vector<Eigen::MatrixXd> factor(lat.modes + 1);
  for (int k = 0; k <= lat.modes; ++k) {
    Eigen::MatrixXd c(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        c(i, j) = c(j, i) = wave_mode_covariance(psi[k].real(), lat.times[first + j],
                                                 lat.times[first + i]);
    if (k > 0) c *= 0.5;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
      const double jitter = 1e-12 * c.trace();
      c.diagonal().array() += jitter;
      llt.compute(c);
      require(llt.info() == Eigen::Success, ErrorCode::numerical_failure,
              "wave covariance of mode " + std::to_string(k) + " is not positive definite");
    }
    factor[k] = llt.matrixL();
  }
  const KeyedRng rng(seed);
  const detail::RealDft dft(n);
  const double norm = 1.0 / std::sqrt(lat.length);
  std::vector<FieldSample> out(replicates);
  detail::parallel_for(replicates, threads, [&](std::size_t r) {
    FieldSample& s = out[r];
    s.kind = FieldKind::wave;
    s.seed = seed;
    s.replicate = r;
    s.points = n;
    s.values.assign(m * n, 0.0);
    Eigen::MatrixXcd w(q, lat.modes + 1);
    Eigen::VectorXd zr(q), zi(q);
    for (int k = 0; k <= lat.modes; ++k) {
      for (std::size_t i = 0; i < q; ++i) {
        const cplx z = rng.normals(Stream::wave, r, k, static_cast<std::uint32_t>(first + i));
        zr[i] = z.real();
        zi[i] = k == 0 ? 0.0 : z.imag();
      }
      const Eigen::VectorXd wr = factor[k] * zr, wi = factor[k] * zi;
      for (std::size_t i = 0; i < q; ++i) w(i, k) = cplx(wr[i], wi[i]) * norm;
    }
    std::vector<cplx> half(lat.modes + 1);
    for (std::size_t i = 0; i < q; ++i) {
      for (int k = 0; k <= lat.modes; ++k) half[k] = w(i, k);
      dft.inverse(half.data(), s.values.data() + (first + i) * n);
    }
  });
  return out;
}

HolderEstimate empirical_holder_estimate(const std::vector<FieldSample>& samples,
                                         const Lattice& lat, Direction direction,
                                         std::size_t bootstrap, std::uint64_t seed) {
  require(samples.size() >= 1000, ErrorCode::precondition,
          "empirical Holder estimate needs at least 1000 replicates");
  const int n = lat.points();
  HolderEstimate est;
  std::vector<int> steps;
  std::vector<std::size_t> rows;
  if (direction == Direction::space) {
    for (int m = 1; m <= 5 && (1 << m) <= n / 4; ++m) {
      steps.push_back(1 << m);
      est.separations.push_back((1 << m) * lat.spacing());
    }
  } else {
    for (std::size_t i = 1; i < lat.times.size(); ++i) {
      rows.push_back(i);
      est.separations.push_back(lat.times[i] - lat.times[0]);
    }
  }
  const std::size_t h = est.separations.size();
  require(h >= 4, ErrorCode::insufficient_separations,
          "need at least 4 separations, have " + std::to_string(h));

  // Per-replicate spatial averages of the squared increments.
  const std::size_t reps = samples.size();
  std::vector<double> per(reps * h);
  for (std::size_t r = 0; r < reps; ++r) {
    const FieldSample& s = samples[r];
    require(s.points == n, ErrorCode::precondition, "sample does not match the lattice");
    for (std::size_t a = 0; a < h; ++a) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = direction == Direction::space ? s.at(0, (j + steps[a]) % n) - s.at(0, j)
                                                       : s.at(rows[a], j) - s.at(0, j);
        acc += d * d;
      }
      per[r * h + a] = acc / n;
    }
  }
  auto exponent = [&](const std::vector<double>& weight) {
    std::vector<double> lx(h), ly(h);
    for (std::size_t a = 0; a < h; ++a) {
      double v = 0.0, wsum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        v += weight[r] * per[r * h + a];
        wsum += weight[r];
      }
      lx[a] = std::log(est.separations[a]);
      ly[a] = std::log(v / wsum);
    }
    double mx = 0, my = 0;
    for (std::size_t a = 0; a < h; ++a) {
      mx += lx[a] / h;
      my += ly[a] / h;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t a = 0; a < h; ++a) {
      sxy += (lx[a] - mx) * (ly[a] - my);
      sxx += (lx[a] - mx) * (lx[a] - mx);
    }
    return 0.5 * sxy / sxx;
  };
  std::vector<double> ones(reps, 1.0);
  est.exponent = exponent(ones);
  for (std::size_t a = 0; a < h; ++a) {
    double v = 0.0;
    for (std::size_t r = 0; r < reps; ++r) v += per[r * h + a];
    est.variances.push_back(v / reps);
  }
  if (bootstrap > 1) {
    const KeyedRng rng(seed);
    double s1 = 0.0, s2 = 0.0;
    std::vector<double> counts(reps);
    for (std::size_t b = 0; b < bootstrap; ++b) {
      std::fill(counts.begin(), counts.end(), 0.0);
      RngStream draw(rng, Stream::bootstrap, b, 0);
      for (std::size_t r = 0; r < reps; ++r) {
        const auto idx = std::min(reps - 1, static_cast<std::size_t>(draw.uniform() * reps));
        counts[idx] += 1.0;
      }
      const double e = exponent(counts);
      s1 += e;
      s2 += e * e;
    }
    const double mean = s1 / bootstrap;
    est.standard_error = std::sqrt(std::max(0.0, (s2 - bootstrap * mean * mean) / (bootstrap - 1)));
  }
  return est;
}

std::vector<double> coupled_heat_profile(const Symbol& sym, double length, int modes, double t,
                                         std::uint64_t seed, std::size_t replicate, int n) {
  require(n >= 1 && modes >= 1 && t >= 0.0, ErrorCode::precondition, "bad coupled profile request");
  Lattice lat{length, modes, {t}};
  const KeyedRng rng(seed);
  const double norm = 1.0 / std::sqrt(length);
  // Fold every mode onto its alias modulo n; the evaluation at the n grid points is exact.
  std::vector<cplx> folded(n, 0.0);
  for (int k = 0; k <= modes; ++k) {
    const cplx z = mode_symbol(sym, lat, k);
    const double v = heat_kernel(z.real(), t);
    if (v <= 0.0) continue;
    const cplx g = rng.normals(Stream::heat, replicate, k, 0);
    const cplx a = k == 0 ? cplx(std::sqrt(v) * g.real(), 0.0) : std::sqrt(0.5 * v) * g;
    folded[k % n] += a * norm;
    if (k > 0) folded[(n - k % n) % n] += std::conj(a) * norm;
  }
  const detail::RealDft dft(n);
  std::vector<double> u(n);
  dft.inverse(folded.data(), u.data());
  return u;
}

std::vector<SupProbeRow> sup_growth_probe(const Symbol& sym, const SupProbeSpec& spec) {
  require(spec.base_points >= 2 && spec.refinements >= 1 && spec.replicates >= 1 && spec.t > 0.0,
          ErrorCode::precondition, "bad sup probe spec");
  const auto hawkes = hawkes_existence(sym);
  require(hawkes.finite, ErrorCode::existence_required,
          "sup probe needs a random-field solution, " + sym.describe() + " has none");
  const int finest = spec.base_points << spec.refinements;
  const int modes = (finest - 1) / 2;
  std::vector<SupProbeRow> rows;
  std::vector<std::vector<double>> fine(spec.replicates);
  for (std::size_t r = 0; r < spec.replicates; ++r) {
    fine[r] = coupled_heat_profile(sym, spec.length, modes, spec.t, spec.seed, r, finest);
  }
  double running = 0.0;
  for (int level = 0; level <= spec.refinements; ++level) {
    const int pts = spec.base_points << level;
    const int stride = finest / pts;
    double mean = 0.0;
    for (const auto& u : fine) {
      double mx = 0.0;
      for (int j = 0; j < pts; ++j) mx = std::max(mx, std::abs(u[j * stride]));
      mean += mx / spec.replicates;
    }
    running = std::max(running, mean);
    rows.push_back({level, pts, mean, running});
  }
  return rows;
}

std::string field_csv_header() { return "t,x,replicate,value\n"; }

void append_field_csv(std::string& out, const FieldSample& s, const Lattice& lat) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < lat.times.size(); ++i) {
    for (int j = 0; j < s.points; ++j) {
      os << lat.times[i] << ',' << lat.x(j) << ',' << s.replicate << ',' << s.at(i, j) << '\n';
    }
  }
  out += os.str();
}

std::string field_json_sidecar(const Lattice& lat, const Symbol& sym, std::uint64_t seed,
                               std::size_t replicates, FieldKind kind) {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["lattice"] = {{"length", lat.length}, {"modes", lat.modes}, {"points", lat.points()},
                  {"times", lat.times}};
  j["symbol"] = sym.describe();
  return j.dump(2);
}

}  // namespace levyspde
