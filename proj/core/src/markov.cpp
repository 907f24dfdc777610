#include "levyspde/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "levyspde/error.hpp"
#include "levyspde/quadrature.hpp"
#include "levyspde/rng.hpp"
#include "parallel.hpp"

namespace levyspde {

namespace {

using std::numbers::pi;

// (e^{-mu t} - 1 + mu t) / mu^2
double occupation_kernel(double mu, double t) {
  const double x = mu * t;
  if (x < 1e-2) return t * t * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
  return (std::expm1(-x) + x) / (mu * mu);
}

template <class K>
double spectral_sum(const ChainModel& chain, const std::vector<double>& phi, K&& kernel) {
  const auto c = chain.transform(phi);
  double s = 0.0;
  for (int k = 0; k < chain.states; ++k) s += std::norm(c[k]) * kernel(chain.eigenvalue(k));
  return s;
}

struct Moments {
  double second = 0.0;
  double se = 0.0;
};

Moments second_moment(const std::vector<double>& z) {
  const double n = static_cast<double>(z.size());
  double m = 0.0;
  for (double v : z) m += v * v / n;
  double var = 0.0;
  for (double v : z) var += (v * v - m) * (v * v - m);
  return {m, z.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0};
}

// Z(t, phi) for one chain path from a uniform start, summed by parts so a
// constant phi integrates to exactly phi * horizon.
double chain_path(const ChainModel& chain, const std::vector<double>& phi, double horizon,
                  RngStream& draw) {
  int x = std::min(chain.states - 1, static_cast<int>(draw.uniform() * chain.states));
  double z = 0.0, s = 0.0;
  if (chain.rho > 0.0) {
    while (true) {
      s += draw.exponential(chain.rho);
      if (s >= horizon) break;
      const int y = draw.uniform() < 0.5 ? (x + 1) % chain.states
                                         : (x + chain.states - 1) % chain.states;
      z -= s * (phi[y] - phi[x]);
      x = y;
    }
  }
  return z + horizon * phi[x];
}

}  // namespace

void ChainModel::validate() const {
  require(states >= 2, ErrorCode::precondition, "chain needs N >= 2");
  require(rho >= 0.0 && std::isfinite(rho), ErrorCode::precondition, "chain rate must be >= 0");
}

double ChainModel::eigenvalue(int k) const {
  const double s = std::sin(pi * k / states);
  return 2.0 * rho * s * s;
}

std::vector<double> ChainModel::generator() const {
  validate();
  std::vector<double> q(static_cast<std::size_t>(states) * states, 0.0);
  for (int i = 0; i < states; ++i) {
    q[i * states + (i + 1) % states] += 0.5 * rho;
    q[i * states + (i + states - 1) % states] += 0.5 * rho;
    q[i * states + i] -= rho;
  }
  return q;
}

std::vector<std::complex<double>> ChainModel::transform(const std::vector<double>& phi) const {
  validate();
  require(static_cast<int>(phi.size()) == states, ErrorCode::precondition,
          "chain function has the wrong length");
  std::vector<std::complex<double>> out(states);
  for (int k = 0; k < states; ++k) {
    std::complex<double> s = 0.0;
    for (int x = 0; x < states; ++x) {
      const double th = -2.0 * pi * ((static_cast<long long>(k) * x) % states) / states;
      s += phi[x] * std::complex<double>(std::cos(th), std::sin(th));
    }
    out[k] = s / static_cast<double>(states);
  }
  return out;
}

double ChainModel::inner(const std::vector<double>& phi, const std::vector<double>& psi) const {
  double s = 0.0;
  for (int x = 0; x < states; ++x) s += phi[x] * psi[x];
  return s / states;
}

double chain_heat_variance(const ChainModel& chain, const std::vector<double>& phi, double t) {
  require(t >= 0.0, ErrorCode::precondition, "t must be >= 0");
  return spectral_sum(chain, phi, [t](double mu) { return heat_kernel(mu, t); });
}

double chain_occupation_second_moment(const ChainModel& chain, const std::vector<double>& phi,
                                      double t) {
  require(t >= 0.0, ErrorCode::precondition, "t must be >= 0");
  return 2.0 * spectral_sum(chain, phi, [t](double mu) { return occupation_kernel(mu, t); });
}

LocaltimeReport verify_localtime_identity(const ChainModel& chain, const std::vector<double>& phi,
                                          double t) {
  require(t > 0.0, ErrorCode::precondition, "t must be > 0");
  LocaltimeReport r;
  r.lhs = chain_occupation_second_moment(chain, phi, t);
  const auto c = chain.transform(phi);
  // closed-form integrand s -> 4 E|u(s/2, phi)|^2
  auto integrand = [&](double s) {
    double v = 0.0;
    for (int k = 0; k < chain.states; ++k) v += std::norm(c[k]) * heat_kernel(chain.eigenvalue(k), 0.5 * s);
    return 4.0 * v;
  };
  r.rhs = integrate_interval(integrand, 0.0, t, 0.0, 1e-14).value;
  r.residual = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), std::numeric_limits<double>::min());
  const double u = chain_heat_variance(chain, phi, t);
  r.bounds = InequalityReport::make("localtime", t * u / 8.0, r.lhs, 4.0 * t * u,
                                    1e-12 * std::abs(r.lhs));
  return r;
}

OccupationResult simulate_chain_occupation(const ChainModel& chain, const std::vector<double>& phi,
                                           double t, std::size_t replicates, std::uint64_t seed,
                                           int threads) {
  chain.validate();
  require(replicates >= 1, ErrorCode::precondition, "need at least one replicate");
  require(t >= 0.0, ErrorCode::precondition, "t must be >= 0");
  require(static_cast<int>(phi.size()) == chain.states, ErrorCode::precondition,
          "chain function has the wrong length");
  const KeyedRng rng(seed);
  OccupationResult out;
  out.values.resize(replicates);
  detail::parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream draw(rng, Stream::chain, r, 0);
    out.values[r] = chain_path(chain, phi, t, draw);
  });
  const auto m = second_moment(out.values);
  out.second_moment = m.second;
  out.standard_error = m.se;
  return out;
}

ResolventReport chain_resolvent_identities(const ChainModel& chain, const std::vector<double>& phi,
                                           double lambda, std::size_t replicates,
                                           std::uint64_t seed, int threads) {
  require(lambda > 0.0, ErrorCode::precondition, "lambda must be > 0");
  chain.validate();
  ResolventReport r;
  r.resolvent = spectral_sum(chain, phi, [lambda](double mu) { return 1.0 / (lambda + mu); });
  r.predicted = 2.0 / lambda * r.resolvent;
  // E over T ~ Exp(2 lambda) of (1 - e^{-2 T mu}) / (2 mu)
  r.u_lhs = spectral_sum(chain, phi, [lambda](double mu) {
    if (mu == 0.0) return 1.0 / (2.0 * lambda);
    return (1.0 - 2.0 * lambda / (2.0 * lambda + 2.0 * mu)) / (2.0 * mu);
  });
  r.u_rhs = 0.5 * r.resolvent;
  r.u_residual = std::abs(r.u_lhs - r.u_rhs) / std::max(std::abs(r.u_rhs), std::numeric_limits<double>::min());
  if (replicates > 0) {
    const KeyedRng rng(seed);
    std::vector<double> z(replicates);
    detail::parallel_for(replicates, threads, [&](std::size_t i) {
      RngStream draw(rng, Stream::chain, i, 1);
      const double horizon = draw.exponential(lambda);
      z[i] = chain_path(chain, phi, horizon, draw);
    });
    const auto m = second_moment(z);
    r.mc_second_moment = m.second;
    r.mc_standard_error = m.se;
    r.z_score = m.se > 0.0 ? (m.second - r.predicted) / m.se : 0.0;
  }
  return r;
}

std::string to_string(OccupationTrend t) {
  switch (t) {
    case OccupationTrend::contracting: return "contracting";
    case OccupationTrend::non_contracting: return "non_contracting";
    case OccupationTrend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

StableLaw occupation_law(const Symbol& sym) {
  const auto law = sym.stable_law();
  require(law.has_value() && sym.dimension() == 1, ErrorCode::precondition,
          "occupation experiment needs a brownian or stable symbol in d = 1, got " + sym.describe());
  return *law;
}

// Chambers-Mallows-Stuck draw with E e^{i xi S} = e^{-|xi|^alpha}.
double standard_stable(double alpha, RngStream& draw) {
  const double v = pi * (draw.uniform() - 0.5);
  const double w = draw.exponential(1.0);
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

}  // namespace

double levy_step_bound(const Symbol& sym, double eps_min) {
  const auto law = occupation_law(sym);
  const double target = eps_min / 10.0;
  // E|X_dt| = (c dt)^{1/alpha} (2/pi) Gamma(1 - 1/alpha) for alpha > 1; the
  // scale (c dt)^{1/alpha} otherwise.
  const double m = law.alpha > 1.0 ? 2.0 / pi * std::tgamma(1.0 - 1.0 / law.alpha) : 1.0;
  return std::pow(target / m, law.alpha) / law.scale;
}

LevyOccupationReport levy_occupation_experiment(const Symbol& sym, double a,
                                                const std::vector<double>& eps, double t,
                                                std::size_t replicates, double dt,
                                                std::uint64_t seed, int threads) {
  const auto law = occupation_law(sym);
  require(eps.size() >= 2, ErrorCode::precondition, "need at least two eps values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0 && (i == 0 || eps[i] < eps[i - 1]), ErrorCode::precondition,
            "eps sequence must be positive and decreasing");
  }
  require(t > 0.0 && replicates >= 2 && dt > 0.0, ErrorCode::precondition,
          "occupation experiment needs t > 0, dt > 0 and at least two replicates");
  const double bound = levy_step_bound(sym, eps.back());
  require(dt <= bound, ErrorCode::step_too_coarse,
          "dt = " + std::to_string(dt) + " exceeds the step bound " + std::to_string(bound));

  const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
  const double h = t / steps;
  const double step_scale = law.alpha == 2.0 ? std::sqrt(2.0 * law.scale * h)
                                             : std::pow(law.scale * h, 1.0 / law.alpha);
  const std::size_t ne = eps.size();
  std::vector<double> z(replicates * ne, 0.0);
  const KeyedRng rng(seed);
  detail::parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream draw(rng, Stream::levy, r, 0);
    std::vector<double> count(ne, 0.0);
    double x = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const double d = std::abs(x - a);
      for (std::size_t e = 0; e < ne && d < eps[e]; ++e) count[e] += 1.0;
      x += step_scale * (law.alpha == 2.0 ? draw.normal() : standard_stable(law.alpha, draw));
    }
    for (std::size_t e = 0; e < ne; ++e) z[r * ne + e] = count[e] * h / (2.0 * eps[e]);
  });

  LevyOccupationReport rep;
  rep.alpha = law.alpha;
  rep.dt = h;
  const double n = static_cast<double>(replicates);
  for (std::size_t e = 0; e + 1 < ne; ++e) {
    std::vector<double> diff(replicates);
    for (std::size_t r = 0; r < replicates; ++r) diff[r] = z[r * ne + e] - z[r * ne + e + 1];
    const auto m = second_moment(diff);
    rep.rows.push_back({eps[e], eps[e + 1], m.second, m.se});
  }
  double mean = 0.0, sq = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) mean += z[r * ne + ne - 1] / n;
  for (std::size_t r = 0; r < replicates; ++r) sq += std::pow(z[r * ne + ne - 1] - mean, 2);
  rep.mean_occupation = mean;
  rep.mean_standard_error = std::sqrt(sq / (n - 1) / n);

  const auto& first = rep.rows.front();
  const auto& last = rep.rows.back();
  rep.final_over_initial = last.d / first.d;
  bool strictly = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) strictly = strictly && rep.rows[i].d < rep.rows[i - 1].d;
  const double noise = 2.0 * std::hypot(first.standard_error, last.standard_error);
  if (strictly && rep.final_over_initial < 0.3) {
    rep.trend = OccupationTrend::contracting;
  } else if (last.d >= first.d - noise) {
    rep.trend = OccupationTrend::non_contracting;
  } else {
    rep.trend = OccupationTrend::inconclusive;
  }

  rep.local_time_mean = std::numeric_limits<double>::quiet_NaN();
  if (law.alpha > 1.0) {
    const double c = law.scale, al = law.alpha;
    if (a == 0.0) {
      // int_0^t Gamma(1 + 1/alpha) / (pi (c s)^{1/alpha}) ds
      rep.local_time_mean = std::tgamma(1.0 + 1.0 / al) / (pi * std::pow(c, 1.0 / al)) *
                            std::pow(t, 1.0 - 1.0 / al) / (1.0 - 1.0 / al);
    } else if (al == 2.0) {
      auto p = [&](double s) {
        return s > 0.0 ? std::exp(-a * a / (4.0 * c * s)) / std::sqrt(4.0 * pi * c * s) : 0.0;
      };
      rep.local_time_mean = integrate_interval(p, 0.0, t, 0.0, 1e-12).value;
    }
  }
  return rep;
}

std::string chain_csv_header() { return "N,rho,phi_id,t,lhs,rhs,residual,margin_lo,margin_hi"; }

std::string chain_csv_row(const ChainModel& chain, const std::string& phi_id, double t,
                          const LocaltimeReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << chain.states << ',' << chain.rho << ',' << phi_id << ',' << t << ',' << r.lhs << ','
     << r.rhs << ',' << r.residual << ',' << r.bounds.margin_lo << ',' << r.bounds.margin_hi;
  return os.str();
}

}  // namespace levyspde
