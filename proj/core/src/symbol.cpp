#include "levyspde/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levyspde/error.hpp"

namespace levyspde {

namespace {

using std::numbers::e;
using std::numbers::pi;

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

std::complex<double> eval_stable(const symbol_kind::Stable& s, double xi) {
  const double a = std::abs(xi);
  if (a == 0.0) return {0.0, 0.0};
  const double mod = s.scale * std::pow(a, s.alpha);
  if (s.skew == 0.0) return {mod, 0.0};
  if (s.alpha == 1.0) {
    return {mod, mod * s.skew * (2.0 / pi) * sign(xi) * std::log(a)};
  }
  return {mod, -mod * s.skew * sign(xi) * std::tan(pi * s.alpha / 2.0)};
}

std::complex<double> eval_lk(const LevyTriplet& t, double xi) {
  double re = 0.5 * t.sigma2 * xi * xi;
  double im = -t.drift * xi;
  for (const auto& j : t.jumps) {
    const double arg = xi * j.location;
    re += j.mass * (1.0 - std::cos(arg));
    const double compensator = std::abs(j.location) < 1.0 ? arg : 0.0;
    im -= j.mass * (std::sin(arg) - compensator);
  }
  return {re, im};
}

std::complex<double> eval_tabulated(const symbol_kind::Tabulated& t, double xi) {
  const double a = std::abs(xi);
  if (a == 0.0) return {0.0, 0.0};
  const auto& f = t.frequency;
  if (a < f.front() || a > f.back()) {
    std::ostringstream os;
    os << "tabulated symbol queried at |xi|=" << a << " outside [" << f.front() << ", " << f.back()
       << "]";
    throw Error(ErrorCode::out_of_range, os.str());
  }
  auto hi = std::upper_bound(f.begin(), f.end(), a);
  std::size_t k = hi == f.end() ? f.size() - 1 : static_cast<std::size_t>(hi - f.begin());
  if (k == 0) k = 1;
  const double w = (std::log(a) - std::log(f[k - 1])) / (std::log(f[k]) - std::log(f[k - 1]));
  const double re = t.real[k - 1] + w * (t.real[k] - t.real[k - 1]);
  const double im = t.imag[k - 1] + w * (t.imag[k] - t.imag[k - 1]);
  return {re, xi < 0 ? -im : im};
}

bool jumps_symmetric(const LevyTriplet& t) {
  auto atoms = t.jumps;
  auto key = [](const JumpAtom& a) { return std::make_pair(a.location, a.mass); };
  std::sort(atoms.begin(), atoms.end(), [&](auto& l, auto& r) { return key(l) < key(r); });
  for (const auto& a : atoms) {
    if (a.location == 0.0 || a.mass == 0.0) continue;
    const bool mirrored = std::any_of(atoms.begin(), atoms.end(), [&](const JumpAtom& b) {
      return b.location == -a.location && b.mass == a.mass;
    });
    if (!mirrored) return false;
  }
  return true;
}

}  // namespace

void LevyTriplet::validate() const {
  require(sigma2 >= 0.0 && std::isfinite(sigma2), ErrorCode::precondition,
          "levy triplet needs sigma2 >= 0");
  double small_jump_mass = 0.0;
  for (const auto& j : jumps) {
    require(j.mass >= 0.0 && std::isfinite(j.mass) && std::isfinite(j.location),
            ErrorCode::precondition, "levy measure masses must be finite and nonnegative");
    small_jump_mass += j.mass * std::min(1.0, j.location * j.location);
  }
  require(std::isfinite(small_jump_mass), ErrorCode::precondition,
          "integral of (1 ∧ x^2) against the levy measure is not finite");
}

Symbol::Symbol(Kind kind, int dimension, bool symmetric)
    : kind_(std::move(kind)), dimension_(dimension), symmetric_(symmetric) {
  require(dimension_ >= 1, ErrorCode::precondition, "dimension must be a positive integer");
}

Symbol Symbol::brownian(double scale, int dimension) {
  require(scale > 0.0, ErrorCode::precondition, "brownian scale must be positive");
  return Symbol(symbol_kind::Brownian{scale}, dimension, true);
}

Symbol Symbol::stable(double alpha, double scale, double skew, int dimension) {
  require(alpha > 0.0 && alpha <= 2.0, ErrorCode::precondition, "stable index must be in (0, 2]");
  require(scale > 0.0, ErrorCode::precondition, "stable scale must be positive");
  require(skew >= -1.0 && skew <= 1.0, ErrorCode::precondition, "stable skew must be in [-1, 1]");
  if (alpha == 2.0) skew = 0.0;
  return Symbol(symbol_kind::Stable{alpha, scale, skew}, dimension, skew == 0.0);
}

Symbol Symbol::levy_khintchine(LevyTriplet triplet, int dimension) {
  triplet.validate();
  const bool sym = triplet.drift == 0.0 && jumps_symmetric(triplet);
  return Symbol(symbol_kind::LevyKhintchine{std::move(triplet)}, dimension, sym);
}

Symbol Symbol::log_perturbed(double power, double scale, int dimension) {
  require(scale > 0.0, ErrorCode::precondition, "log-perturbed scale must be positive");
  return Symbol(symbol_kind::LogPerturbed{power, scale}, dimension, true);
}

Symbol Symbol::tabulated(std::vector<double> frequency, std::vector<double> real,
                         std::vector<double> imag, int dimension) {
  require(frequency.size() >= 2, ErrorCode::precondition, "tabulated symbol needs >= 2 points");
  if (imag.empty()) imag.assign(frequency.size(), 0.0);
  require(real.size() == frequency.size() && imag.size() == frequency.size(),
          ErrorCode::precondition, "tabulated symbol columns differ in length");
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    require(frequency[i] > 0.0 && (i == 0 || frequency[i] > frequency[i - 1]),
            ErrorCode::precondition, "tabulated frequencies must be positive and increasing");
    require(real[i] >= 0.0, ErrorCode::precondition, "tabulated Re Psi must be nonnegative");
  }
  const bool sym = std::all_of(imag.begin(), imag.end(), [](double v) { return v == 0.0; });
  return Symbol(symbol_kind::Tabulated{std::move(frequency), std::move(real), std::move(imag)},
                dimension, sym);
}

std::complex<double> Symbol::operator()(double xi) const {
  return std::visit(
      [xi](const auto& k) -> std::complex<double> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, symbol_kind::Brownian>) {
          return {k.scale * xi * xi, 0.0};
        } else if constexpr (std::is_same_v<T, symbol_kind::Stable>) {
          return eval_stable(k, xi);
        } else if constexpr (std::is_same_v<T, symbol_kind::LevyKhintchine>) {
          return eval_lk(k.triplet, xi);
        } else if constexpr (std::is_same_v<T, symbol_kind::LogPerturbed>) {
          const double a = std::abs(xi);
          return {k.scale * a * std::pow(std::log(e + a), k.power), 0.0};
        } else if constexpr (std::is_same_v<T, symbol_kind::Tabulated>) {
          return eval_tabulated(k, xi);
        } else {
          return {2.0 * (*k.base)(xi).real(), 0.0};
        }
      },
      kind_);
}

std::string Symbol::kind_name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, symbol_kind::Brownian>) return "brownian";
        else if constexpr (std::is_same_v<T, symbol_kind::Stable>) return "stable";
        else if constexpr (std::is_same_v<T, symbol_kind::LevyKhintchine>) return "levy-khintchine";
        else if constexpr (std::is_same_v<T, symbol_kind::LogPerturbed>) return "log-perturbed";
        else if constexpr (std::is_same_v<T, symbol_kind::Tabulated>) return "tabulated";
        else return "symmetrized";
      },
      kind_);
}

std::string Symbol::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, symbol_kind::Brownian>) {
          os << "brownian(scale=" << k.scale << ")";
        } else if constexpr (std::is_same_v<T, symbol_kind::Stable>) {
          os << "stable(alpha=" << k.alpha << ",scale=" << k.scale << ",skew=" << k.skew << ")";
        } else if constexpr (std::is_same_v<T, symbol_kind::LevyKhintchine>) {
          os << "levy-khintchine(sigma2=" << k.triplet.sigma2 << ",drift=" << k.triplet.drift
             << ",atoms=" << k.triplet.jumps.size() << ")";
        } else if constexpr (std::is_same_v<T, symbol_kind::LogPerturbed>) {
          os << "log-perturbed(power=" << k.power << ",scale=" << k.scale << ")";
        } else if constexpr (std::is_same_v<T, symbol_kind::Tabulated>) {
          os << "tabulated(points=" << k.frequency.size() << ")";
        } else {
          os << "symmetrized(" << k.base->describe() << ")";
        }
      },
      kind_);
  os << "[d=" << dimension_ << "]";
  return os.str();
}

std::optional<StableLaw> Symbol::stable_law() const {
  if (const auto* b = std::get_if<symbol_kind::Brownian>(&kind_)) return StableLaw{2.0, b->scale};
  if (const auto* s = std::get_if<symbol_kind::Stable>(&kind_)) return StableLaw{s->alpha, s->scale};
  if (const auto* y = std::get_if<symbol_kind::Symmetrized>(&kind_)) {
    if (auto law = y->base->stable_law()) return StableLaw{law->alpha, 2.0 * law->scale};
  }
  return std::nullopt;
}

Symbol symmetrize(const Symbol& sym) {
  return Symbol(symbol_kind::Symmetrized{std::make_shared<const Symbol>(sym)}, sym.dimension(),
                true);
}

std::vector<double> geometric_grid(double lo, double ratio, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::pow(ratio, static_cast<double>(i));
  return g;
}

LowerIndexEstimate lower_index(const Symbol& sym, std::span<const double> probe) {
  require(probe.size() >= 16, ErrorCode::precondition, "lower_index needs >= 16 probe points");
  for (std::size_t i = 1; i < probe.size(); ++i) {
    require(probe[i] > probe[i - 1] && probe[0] > 0.0, ErrorCode::precondition,
            "lower_index probe grid must be positive and strictly increasing");
  }
  require(std::log10(probe.back() / probe.front()) >= 6.0 - 1e-12, ErrorCode::precondition,
          "lower_index probe grid must span >= 6 decades");

  constexpr std::size_t window = 10;
  const std::size_t first = probe.size() - window;
  std::vector<double> lx, ly;
  for (std::size_t i = first - 1; i < probe.size(); ++i) {
    const double re = sym.real_part(probe[i]);
    if (re > 0.0 && std::isfinite(re)) {
      lx.push_back(std::log(probe[i]));
      ly.push_back(std::log(re));
    }
  }
  if (lx.size() < 2) {
    throw Error(ErrorCode::degenerate_symbol, "Re Psi vanishes on the tail window of the probe grid");
  }

  LowerIndexEstimate out;
  out.value = std::numeric_limits<double>::infinity();
  out.log_ratio_minimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < lx.size(); ++i) {
    out.value = std::min(out.value, (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
    if (lx[i] > 0.0) out.log_ratio_minimum = std::min(out.log_ratio_minimum, ly[i] / lx[i]);
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  out.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace levyspde
