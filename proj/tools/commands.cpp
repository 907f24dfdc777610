#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "levyspde/error.hpp"
#include "levyspde/functionals.hpp"
#include "levyspde/markov.hpp"
#include "levyspde/moments.hpp"
#include "levyspde/rng.hpp"
#include "levyspde/semilinear.hpp"

namespace levyspde::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string cell(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
std::string cell(bool v) { return v ? "true" : "false"; }
std::string cell(const std::string& v) { return v; }
std::string cell(const char* v) { return v; }
std::string cell(int v) { return std::to_string(v); }
std::string cell(unsigned long v) { return std::to_string(v); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows = {};

  template <class... T>
  void add(const T&... v) {
    rows.push_back({cell(v)...});
  }

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += '\n';
    }
    return out;
  }
};

struct Context {
  const Config& cfg;
  Options opt;
  std::string name;
  json summary = json::object();
  std::vector<std::pair<std::string, std::string>> files = {};  // file name, contents
  Outcome outcome = Outcome::pass;

  std::uint64_t seed() const {
    const auto s = cfg.unsigned_integer("seed", 1);
    return opt.seed.value_or(s);
  }
  void check(bool ok) {
    if (!ok) outcome = Outcome::fail;
  }
  void inconclusive() {
    if (outcome == Outcome::pass) outcome = Outcome::inconclusive;
  }
  void table(const Table& t, const std::string& suffix = "") {
    files.emplace_back(name + suffix + ".csv", t.csv());
  }
};

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot write '" + p.string() + "'");
  f << body;
}

std::vector<JumpAtom> parse_jumps(const std::string& s) {
  std::vector<JumpAtom> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::config_invalid, "symbol.jumps expects location:mass pairs, got '" + item + "'");
    }
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw Error(ErrorCode::config_invalid, "symbol.jumps entry '" + item + "' is not numeric");
    }
  }
  return out;
}

Symbol tabulated_from(const std::string& path, int d) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot read symbol table '" + path + "'");
  std::vector<double> xi, re, im;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    xi.push_back(std::stod(a));
    re.push_back(std::stod(b));
    im.push_back(c.empty() ? 0.0 : std::stod(c));
  }
  return Symbol::tabulated(xi, re, im, d);
}

// ---- subcommands ----

void cmd_exists(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  const double theta = c.cfg.number("exists.theta", 1.0);
  const std::string expect = c.cfg.text("exists.expect", "");
  c.cfg.reject_unused();
  require(expect.empty() || expect == "finite" || expect == "divergent", ErrorCode::config_invalid,
          "exists.expect must be finite or divergent");
  const auto r = hawkes_existence(sym, theta, q);
  Table t{{"symbol", "theta", "finite", "value", "growth_exponent", "status"}};
  t.add("\"" + sym.describe() + "\"", theta, r.finite, r.value, r.growth_exponent,
        to_string(r.detail.status));
  c.table(t);
  c.summary["result"] = r.finite ? "finite" : "divergent";
  if (!expect.empty()) c.check((expect == "finite") == r.finite);
}

void cmd_energy(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto phi = test_function_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  const auto lambdas = c.cfg.numbers("energy.lambda", {0.01, 0.1, 1.0});
  const auto eps = c.cfg.numbers("energy.eps", {0.01, 0.1, 1.0});
  c.cfg.reject_unused();
  Table t{{"quantity", "parameter", "value", "error"}};
  for (double l : lambdas) {
    const auto e = energy_E(sym, phi, l, q);
    t.add("E", l, e.value, e.error);
  }
  for (double e : eps) {
    const auto f = energy_F(sym, phi, e, q);
    t.add("F", e, f.value, f.error);
  }
  c.table(t);
}

void cmd_h(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  const auto rs = c.cfg.numbers("h.r", {1e-4, 1e-3, 1e-2, 1e-1, 1.0});
  c.cfg.reject_unused();
  Table t{{"r", "h", "error"}};
  for (double r : rs) {
    const auto h = h_function(sym, r, q);
    t.add(r, h.value, h.error);
  }
  c.table(t);
}

void cmd_indices(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto phi = test_function_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  c.cfg.reject_unused();
  Table t{{"quantity", "value", "fitted_slope", "log_ratio_minimum"}};
  const auto probe = geometric_grid(1.0, 2.0, 64);
  const auto li = lower_index(sym, probe);
  t.add("lower_index", li.value, li.fitted_slope, li.log_ratio_minimum);
  const auto e = lower_index_E(sym, phi, q);
  t.add("lower_index_E", e.value, e.fitted_slope, e.log_ratio_minimum);
  if (hawkes_existence(sym, 1.0, q).finite) {
    const auto h = lower_index_h(sym, q);
    t.add("lower_index_h", h.value, h.fitted_slope, h.log_ratio_minimum);
  } else {
    c.summary["lower_index_h"] = "skipped: no random-field solution";
  }
  c.table(t);
}

void cmd_barlow(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  c.cfg.reject_unused();
  const auto r = barlow_condition(sym, q);
  Table t{{"delta", "partial_integral"}};
  for (std::size_t i = 0; i < r.deltas.size(); ++i) t.add(r.deltas[i], r.partials[i]);
  c.table(t);
  c.summary["trend"] = to_string(r.trend);
  c.summary["holds"] = r.holds;
  c.summary["ratio"] = r.ratio;
  if (r.trend == Trend::inconclusive) c.inconclusive();
}

GaugeSpec gauge_from(const Config& cfg) {
  const std::string kind = cfg.text("gauge.kind", "log-power");
  const double p = cfg.number("gauge.power", 2.0);
  GaugeSpec g;
  g.name = kind + "(" + cell(p) + ")";
  if (kind == "log-power") {
    g.g = [p](double s) { return std::pow(std::log(std::exp(1.0) + s), p); };
  } else if (kind == "loglog-power") {
    g.g = [p](double s) { return std::pow(std::log(std::exp(1.0) + std::log(std::exp(1.0) + s)), p); };
  } else if (kind == "power") {
    g.g = [p](double s) { return std::pow(1.0 + s, p); };
  } else {
    throw Error(ErrorCode::config_invalid,
                "gauge.kind must be log-power, loglog-power or power, got '" + kind + "'");
  }
  return g;
}

void cmd_gauge(Context& c) {
  const auto g = gauge_from(c.cfg);
  const bool temporal = c.cfg.flag("gauge.temporal", false);
  std::optional<Symbol> sym;
  std::optional<TestFunction> phi;
  if (temporal) {
    sym = symbol_from(c.cfg);
    phi = test_function_from(c.cfg);
  }
  const auto q = quadrature_from(c.cfg);
  c.cfg.reject_unused();
  const auto r = is_gauge(g);
  Table t{{"quantity", "value"}};
  t.add("monotone", r.monotone);
  t.add("slowly_varying", r.slowly_varying);
  t.add("variation_ratio", r.variation_ratio);
  t.add("integrable", to_string(r.integrable));
  t.add("trend_ratio", r.trend_ratio);
  t.add("is_gauge", r.is_gauge);
  if (r.integrable == Trend::inconclusive) c.inconclusive();
  if (temporal && r.is_gauge) {
    const auto tc = temporal_continuity_condition(*sym, *phi, g, q);
    t.add("temporal_condition_finite", tc.finite);
    t.add("temporal_condition_value", tc.value);
  }
  c.table(t);
}

void cmd_moments_verify(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto phi = test_function_from(c.cfg);
  const auto q = quadrature_from(c.cfg);
  const auto ts = c.cfg.numbers("moments.t", {0.25, 1.0, 4.0});
  const auto ls = c.cfg.numbers("moments.lambda", {0.5, 1.0, 2.0});
  const auto es = c.cfg.numbers("moments.eps", {0.01, 0.1});
  const auto rs = c.cfg.numbers("moments.r", {0.05, 0.5});
  c.cfg.reject_unused();
  Table t{{"check", "t", "parameter", "lower", "middle", "upper", "margin_lo", "margin_hi", "pass"}};
  auto add = [&](const InequalityReport& r, double time, double param) {
    t.add(r.quantity, time, param, r.lower, r.middle, r.upper, r.margin_lo, r.margin_hi, r.pass);
    c.check(r.pass);
  };
  for (double time : ts) {
    for (double l : ls) add(verify_heat_quasi_isometry(sym, phi, time, l, q), time, l);
    for (double e : es) add(verify_heat_temporal_bounds(sym, phi, time, e, q), time, e);
    if (sym.symmetric()) {
      add(verify_wave_quasi_isometry(sym, phi, time, q), time, 0.0);
      for (double e : es) add(verify_wave_temporal_bounds(sym, phi, time, e, q), time, e);
    }
    if (hawkes_existence(sym, 1.0, q).finite) {
      for (double r : rs) add(verify_spatial_bounds(sym, time, 0.0, r, q), time, r);
    }
  }
  c.table(t);
  c.summary["symmetric"] = sym.symmetric();
}

void simulate(Context& c, FieldKind kind) {
  const auto sym = symbol_from(c.cfg);
  const auto lat = lattice_from(c.cfg);
  const auto reps = static_cast<std::size_t>(c.cfg.integer("simulate.replicates", 200));
  const bool write_field = c.cfg.flag("simulate.write_field", true);
  const auto seed = c.seed();
  c.cfg.reject_unused();
  const auto samples = kind == FieldKind::heat ? simulate_heat_field(sym, lat, seed, reps, c.opt.threads)
                                               : simulate_wave_field(sym, lat, seed, reps, c.opt.threads);
  const auto phi = lattice_delta(lat);
  const auto exact = kind == FieldKind::heat ? lattice_heat_moments(sym, lat, phi)
                                             : lattice_wave_moments(sym, lat, phi);
  Table t{{"t", "empirical", "exact", "standard_error", "z", "pass"}};
  for (std::size_t i = 0; i < lat.times.size(); ++i) {
    double m = 0.0, s2 = 0.0;
    std::vector<double> v(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const double x = lattice_pairing(lat, samples[r].row(i), phi);
      v[r] = x * x;
      m += v[r] / reps;
    }
    for (double x : v) s2 += (x - m) * (x - m);
    const double se = reps > 1 ? std::sqrt(s2 / (reps - 1) / reps) : 0.0;
    const double z = se > 0.0 ? (m - exact[i]) / se : (m == exact[i] ? 0.0 : INFINITY);
    const bool ok = std::abs(z) <= 4.0;
    t.add(lat.times[i], m, exact[i], se, z, ok);
    c.check(ok);
  }
  c.table(t);
  if (write_field) {
    std::string body = field_csv_header();
    for (const auto& s : samples) append_field_csv(body, s, lat);
    c.files.emplace_back(c.name + "_field.csv", body);
    c.files.emplace_back(c.name + "_field.json", field_json_sidecar(lat, sym, seed, reps, kind));
  }
}

void cmd_holder(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto lat = lattice_from(c.cfg);
  const auto reps = static_cast<std::size_t>(c.cfg.integer("holder.replicates", 1000));
  const std::string dir = c.cfg.text("holder.direction", "both");
  const auto seed = c.seed();
  c.cfg.reject_unused();
  require(dir == "space" || dir == "time" || dir == "both", ErrorCode::config_invalid,
          "holder.direction must be space, time or both");
  const auto samples = simulate_heat_field(sym, lat, seed, reps, c.opt.threads);
  Table t{{"direction", "separation", "variance"}};
  auto one = [&](Direction d, const char* label) {
    const auto e = empirical_holder_estimate(samples, lat, d, 200, seed);
    for (std::size_t i = 0; i < e.separations.size(); ++i) t.add(label, e.separations[i], e.variances[i]);
    c.summary[std::string(label) + "_exponent"] = e.exponent;
    c.summary[std::string(label) + "_standard_error"] = e.standard_error;
  };
  if (dir != "time") one(Direction::space, "space");
  if (dir != "space") one(Direction::time, "time");
  c.table(t);
}

void cmd_sup_probe(Context& c) {
  const auto sym = symbol_from(c.cfg);
  SupProbeSpec s;
  s.length = c.cfg.number("probe.length", 1.0);
  s.base_points = static_cast<int>(c.cfg.integer("probe.base_points", 16));
  s.refinements = static_cast<int>(c.cfg.integer("probe.refinements", 4));
  s.t = c.cfg.number("probe.t", 1.0);
  s.replicates = static_cast<std::size_t>(c.cfg.integer("probe.replicates", 8));
  s.seed = c.seed();
  c.cfg.reject_unused();
  const auto rows = sup_growth_probe(sym, s);
  Table t{{"level", "points", "mean_max", "running_max"}};
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.add(rows[i].level, rows[i].points, rows[i].mean_max, rows[i].running_max);
    if (i > 0) monotone = monotone && rows[i].running_max >= rows[i - 1].running_max;
  }
  c.check(monotone);
  c.summary["last_over_first"] = rows.back().mean_max / rows.front().mean_max;
  c.table(t);
}

std::vector<double> random_chain_function(int n, std::uint64_t seed, std::uint32_t id) {
  RngStream draw(KeyedRng(seed), Stream::chain, static_cast<std::uint64_t>(n), 1000 + id);
  std::vector<double> phi(n);
  for (auto& v : phi) v = draw.normal();
  return phi;
}

void cmd_markov_identity(Context& c) {
  const auto ns = c.cfg.numbers("chain.states", {4, 16, 64});
  const auto rhos = c.cfg.numbers("chain.rho", {0.5, 1.0, 4.0});
  const auto ts = c.cfg.numbers("markov.t", {0.25, 1.0, 4.0});
  const auto count = c.cfg.integer("markov.functions", 5);
  const auto seed = c.seed();
  c.cfg.reject_unused();
  Table t{{"N", "rho", "phi_id", "t", "lhs", "rhs", "residual", "margin_lo", "margin_hi", "pass"}};
  double worst = 0.0;
  for (double n : ns) {
    for (double rho : rhos) {
      const ChainModel chain{static_cast<int>(n), rho};
      for (long long id = 0; id < count; ++id) {
        const auto phi = random_chain_function(chain.states, seed, static_cast<std::uint32_t>(id));
        for (double time : ts) {
          const auto r = verify_localtime_identity(chain, phi, time);
          const bool ok = r.residual < 1e-10 && r.bounds.pass && r.bounds.margin_lo > 0.0 &&
                          r.bounds.margin_hi > 0.0;
          t.add(chain.states, rho, "random" + std::to_string(id), time, r.lhs, r.rhs, r.residual,
                r.bounds.margin_lo, r.bounds.margin_hi, ok);
          worst = std::max(worst, r.residual);
          c.check(ok);
        }
      }
    }
  }
  c.summary["max_residual"] = worst;
  c.table(t);
}

void cmd_markov_mc(Context& c) {
  const ChainModel chain{static_cast<int>(c.cfg.integer("chain.states", 16)), c.cfg.number("chain.rho", 1.0)};
  const double time = c.cfg.number("markov.t", 1.0);
  const auto state = c.cfg.integer("markov.state", 0);
  const double lambda = c.cfg.number("markov.lambda", 2.0);
  const auto reps = static_cast<std::size_t>(c.cfg.integer("markov.replicates", 20000));
  const auto seed = c.seed();
  c.cfg.reject_unused();
  chain.validate();
  require(state >= 0 && state < chain.states, ErrorCode::config_invalid, "markov.state out of range");
  std::vector<double> phi(chain.states, 0.0);
  phi[state] = 1.0;
  Table t{{"quantity", "monte_carlo", "standard_error", "exact", "z", "pass"}};
  const auto occ = simulate_chain_occupation(chain, phi, time, reps, seed, c.opt.threads);
  const double exact = chain_occupation_second_moment(chain, phi, time);
  const double z = (occ.second_moment - exact) / occ.standard_error;
  t.add("occupation_second_moment", occ.second_moment, occ.standard_error, exact, z, std::abs(z) <= 4.0);
  c.check(std::abs(z) <= 4.0);
  const auto res = chain_resolvent_identities(chain, phi, lambda, reps, seed, c.opt.threads);
  t.add("resolvent_second_moment", res.mc_second_moment, res.mc_standard_error, res.predicted,
        res.z_score, std::abs(res.z_score) <= 4.0);
  c.check(std::abs(res.z_score) <= 4.0);
  t.add("u_resolvent_identity", res.u_lhs, 0.0, res.u_rhs, res.u_residual, res.u_residual < 1e-12);
  c.check(res.u_residual < 1e-12);
  c.table(t);
}

void cmd_levy_occupation(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto eps = c.cfg.numbers("levy.eps", {0.2, 0.1, 0.05, 0.025});
  const double time = c.cfg.number("levy.t", 1.0);
  const double a = c.cfg.number("levy.a", 0.0);
  const auto reps = static_cast<std::size_t>(c.cfg.integer("levy.replicates", 2000));
  const double dt_cfg = c.cfg.number("levy.dt", 0.0);
  const auto seed = c.seed();
  c.cfg.reject_unused();
  const double dt = dt_cfg > 0.0 ? dt_cfg : levy_step_bound(sym, eps.back());
  const auto r = levy_occupation_experiment(sym, a, eps, time, reps, dt, seed, c.opt.threads);
  Table t{{"alpha", "eps", "next_eps", "D", "SE"}};
  for (const auto& row : r.rows) t.add(r.alpha, row.eps, row.next_eps, row.d, row.standard_error);
  c.table(t);
  c.summary["trend"] = to_string(r.trend);
  c.summary["final_over_initial"] = r.final_over_initial;
  c.summary["mean_occupation"] = r.mean_occupation;
  c.summary["mean_standard_error"] = r.mean_standard_error;
  if (std::isfinite(r.local_time_mean)) c.summary["local_time_mean"] = r.local_time_mean;
  c.summary["dt"] = r.dt;
  if (r.trend == OccupationTrend::inconclusive) c.inconclusive();
}

void cmd_density(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto lat = lattice_from(c.cfg);
  const auto ts = c.cfg.numbers("density.t", {1.0});
  const auto pair = c.cfg.numbers("density.semigroup", {0.3, 0.7});
  c.cfg.reject_unused();
  require(pair.size() == 2, ErrorCode::config_invalid, "density.semigroup expects two times s,t");
  Table p{{"t", "x", "p"}};
  Table checks{{"quantity", "t", "value", "limit", "pass"}};
  for (double t : ts) {
    const auto d = transition_density(sym, t, lat);
    for (int j = 0; j < lat.points(); ++j) p.add(t, lat.x(j), d.values[j]);
    checks.add("mass_error", t, std::abs(d.mass - 1.0), 1e-6, std::abs(d.mass - 1.0) <= 1e-6);
    checks.add("clipped_mass", t, d.clipped_mass, 1e-6, d.clipped_mass <= 1e-6);
    c.check(std::abs(d.mass - 1.0) <= 1e-6);
  }
  const double defect = semigroup_defect(sym, pair[0], pair[1], lat);
  checks.add("semigroup_defect", pair[0] + pair[1], defect, 1e-8, defect <= 1e-8);
  c.check(defect <= 1e-8);
  const auto g = density_growth(sym, lat);
  Table growth{{"t", "integral_norm_squared", "fitted_bound", "analytic_bound"}};
  for (std::size_t i = 0; i < g.times.size(); ++i) {
    growth.add(g.times[i], g.values[i], g.c_fit * std::exp(g.eta_fit * g.times[i]),
               g.c_bound * std::exp(2.0 * g.times[i]));
  }
  checks.add("growth_bound", lat.times.back(), g.c_bound, 0.0, g.bound_holds);
  c.check(g.bound_holds);
  c.summary["growth_c"] = g.c_fit;
  c.summary["growth_eta"] = g.eta_fit;
  c.table(checks);
  c.table(p, "_values");
  c.table(growth, "_growth");
}

void cmd_semilinear(Context& c) {
  const auto sym = symbol_from(c.cfg);
  const auto lat = lattice_from(c.cfg);
  const auto b = Nonlinearity::parse(c.cfg.text("nonlinearity.kind", "tanh"),
                                     c.cfg.number("nonlinearity.c", 1.0));
  const double tol = c.cfg.number("semilinear.tol", 1e-10);
  const auto max_iter = static_cast<int>(c.cfg.integer("semilinear.max_iter", 60));
  const std::string input = c.cfg.text("semilinear.input", "");
  const auto replicate = static_cast<std::size_t>(c.cfg.integer("semilinear.replicate", 0));
  const auto thresholds = c.cfg.numbers("semilinear.thresholds", {0.5, 1.0, 1.5, 2.0});
  const auto seed = c.seed();
  c.cfg.reject_unused();
  const FieldSample h = input.empty() ? simulate_heat_field(sym, lat, seed, replicate + 1)[replicate]
                                      : read_field_csv(input, lat, replicate);
  const auto r = picard_solve(sym, b, h, lat, tol, max_iter);
  const auto& d = r.diagnostics;
  Table diag{{"iteration", "difference", "ratio"}};
  for (std::size_t i = 0; i < d.differences.size(); ++i) {
    diag.add(static_cast<int>(i + 1), d.differences[i], i == 0 ? std::string("") : cell(d.ratios[i - 1]));
  }
  const auto col = blowup_colocation_report(h, r.solution, lat, b, thresholds);
  Table t{{"threshold", "above_h", "above_hb", "inner_inclusion", "outer_inclusion", "identical", "pass"}};
  for (const auto& row : col.rows) {
    const bool ok = row.inner_inclusion && row.outer_inclusion;
    t.add(row.threshold, row.above_h, row.above_hb, row.inner_inclusion, row.outer_inclusion,
          row.identical, ok);
    c.check(ok);
  }
  c.check(d.converged && col.sup_bound_holds);
  c.table(t);
  c.table(diag, "_iterations");
  std::string body = field_csv_header();
  append_field_csv(body, r.solution, lat);
  c.files.emplace_back(c.name + "_field.csv", body);
  c.files.emplace_back(c.name + "_field.json", field_json_sidecar(lat, sym, seed, 1, FieldKind::heat));
  c.summary["nonlinearity"] = b.name();
  c.summary["lambda"] = d.lambda;
  c.summary["iterations"] = d.iterations;
  c.summary["converged"] = d.converged;
  c.summary["ratios"] = d.ratios;
  c.summary["residual"] = d.residual;
  c.summary["clipped_mass"] = d.clipped_mass;
  c.summary["sup_bound_holds"] = col.sup_bound_holds;
  c.summary["shift"] = col.shift;
}

void cmd_report(Context& c) {
  const std::string dir = c.cfg.text("report.dir", c.opt.out_dir);
  c.cfg.reject_unused();
  Table t{{"file", "rows", "passed", "failed"}};
  std::size_t rows = 0, passed = 0, failed = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv" && e.path().filename() != "report.csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream f(p);
    std::string line;
    if (!std::getline(f, line)) continue;
    std::vector<std::string> head;
    std::stringstream hs(line);
    for (std::string col; std::getline(hs, col, ',');) head.push_back(col);
    const auto it = std::find(head.begin(), head.end(), "pass");
    if (it == head.end()) continue;
    const auto col = static_cast<std::size_t>(it - head.begin());
    std::size_t n = 0, ok = 0, bad = 0;
    while (std::getline(f, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      for (std::string v; std::getline(ls, v, ',');) cells.push_back(v);
      if (cells.size() <= col) continue;
      ++n;
      (cells[col] == "true" ? ok : bad)++;
    }
    t.add(p.filename().string(), n, ok, bad);
    rows += n;
    passed += ok;
    failed += bad;
  }
  t.add("TOTAL", rows, passed, failed);
  c.check(failed == 0);
  c.table(t);
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
  static const std::map<std::string, std::function<void(Context&)>> r = {
      {"exists", cmd_exists},
      {"energy", cmd_energy},
      {"h", cmd_h},
      {"indices", cmd_indices},
      {"barlow", cmd_barlow},
      {"gauge", cmd_gauge},
      {"moments-verify", cmd_moments_verify},
      {"simulate-heat", [](Context& c) { simulate(c, FieldKind::heat); }},
      {"simulate-wave", [](Context& c) { simulate(c, FieldKind::wave); }},
      {"holder-empirical", cmd_holder},
      {"sup-probe", cmd_sup_probe},
      {"markov-identity", cmd_markov_identity},
      {"markov-mc", cmd_markov_mc},
      {"levy-occupation", cmd_levy_occupation},
      {"density", cmd_density},
      {"semilinear", cmd_semilinear},
      {"report", cmd_report},
  };
  return r;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

int exit_code(Outcome o, bool strict) {
  switch (o) {
    case Outcome::pass: return 0;
    case Outcome::fail: return 1;
    case Outcome::inconclusive: return strict ? 1 : 2;
  }
  return 1;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

Symbol symbol_from(const Config& cfg) {
  const std::string kind = cfg.text("symbol.kind");
  const int d = static_cast<int>(cfg.integer("symbol.dimension", 1));
  const bool sym2 = cfg.flag("symbol.symmetrize", false);
  std::optional<Symbol> s;
  if (kind == "brownian") {
    s = Symbol::brownian(cfg.number("symbol.scale", 1.0), d);
  } else if (kind == "stable") {
    s = Symbol::stable(cfg.number("symbol.alpha"), cfg.number("symbol.scale", 1.0),
                       cfg.number("symbol.skew", 0.0), d);
  } else if (kind == "lk") {
    LevyTriplet t;
    t.sigma2 = cfg.number("symbol.sigma2", 0.0);
    t.drift = cfg.number("symbol.drift", 0.0);
    if (cfg.has("symbol.jumps")) t.jumps = parse_jumps(cfg.text("symbol.jumps"));
    s = Symbol::levy_khintchine(t, d);
  } else if (kind == "log-perturbed") {
    s = Symbol::log_perturbed(cfg.number("symbol.power"), cfg.number("symbol.scale", 1.0), d);
  } else if (kind == "tabulated") {
    s = tabulated_from(cfg.text("symbol.table"), d);
  } else {
    throw Error(ErrorCode::config_invalid,
                "symbol.kind must be brownian, stable, lk, log-perturbed or tabulated, got '" + kind + "'");
  }
  return sym2 ? symmetrize(*s) : *s;
}

TestFunction test_function_from(const Config& cfg) {
  const std::string kind = cfg.text("test.kind", "delta");
  if (kind == "delta") return TestFunction::delta(cfg.number("test.x", 0.0));
  if (kind == "delta-difference") {
    return TestFunction::delta_difference(cfg.number("test.x", 0.0), cfg.number("test.y"));
  }
  if (kind == "gaussian") {
    return TestFunction::gaussian(cfg.number("test.center", 0.0), cfg.number("test.width", 1.0));
  }
  if (kind == "box") return TestFunction::box(cfg.number("test.center", 0.0), cfg.number("test.radius"));
  throw Error(ErrorCode::config_invalid,
              "test.kind must be delta, delta-difference, gaussian or box, got '" + kind + "'");
}

QuadratureSpec quadrature_from(const Config& cfg) {
  QuadratureSpec q;
  q.abs_tol = cfg.number("quadrature.abs_tol", q.abs_tol);
  q.rel_tol = cfg.number("quadrature.rel_tol", q.rel_tol);
  q.initial_cutoff = cfg.number("quadrature.initial_cutoff", q.initial_cutoff);
  q.max_cutoff = cfg.number("quadrature.max_cutoff", q.max_cutoff);
  q.max_subpanels = static_cast<std::size_t>(cfg.integer("quadrature.max_subpanels",
                                                         static_cast<long long>(q.max_subpanels)));
  try {
    q.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config_invalid, e.what());
  }
  return q;
}

Lattice lattice_from(const Config& cfg) {
  Lattice lat;
  lat.length = cfg.number("lattice.length", 8.0);
  lat.modes = static_cast<int>(cfg.integer("lattice.modes", 64));
  if (cfg.has("lattice.times")) {
    lat.times = cfg.numbers("lattice.times");
  } else {
    const double end = cfg.number("lattice.t_end", 1.0);
    const auto steps = cfg.integer("lattice.steps", 20);
    require(steps >= 1, ErrorCode::config_invalid, "lattice.steps must be >= 1");
    for (long long i = 0; i <= steps; ++i) lat.times.push_back(end * static_cast<double>(i) / steps);
  }
  try {
    lat.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config_invalid, e.what());
  }
  return lat;
}

FieldSample read_field_csv(const std::string& path, const Lattice& lat, std::size_t replicate) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot read field '" + path + "'");
  FieldSample s;
  s.points = lat.points();
  s.replicate = replicate;
  s.values.assign(lat.times.size() * s.points, 0.0);
  std::vector<std::size_t> filled(lat.times.size(), 0);
  std::string line;
  std::getline(f, line);
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string t, x, r, v;
    std::getline(ss, t, ',');
    std::getline(ss, x, ',');
    std::getline(ss, r, ',');
    std::getline(ss, v, ',');
    if (std::stoull(r) != replicate) continue;
    const double tv = std::stod(t), xv = std::stod(x);
    std::size_t i = 0;
    while (i < lat.times.size() && std::abs(lat.times[i] - tv) > 1e-12 * std::max(1.0, tv)) ++i;
    require(i < lat.times.size(), ErrorCode::config_invalid,
            "field time " + t + " is not on the lattice time grid");
    const auto j = static_cast<long>(std::lround(xv / lat.spacing()));
    require(j >= 0 && j < s.points, ErrorCode::config_invalid, "field point " + x + " is off the lattice");
    s.values[i * s.points + j] = std::stod(v);
    ++filled[i];
  }
  for (std::size_t i = 0; i < filled.size(); ++i) {
    require(filled[i] == static_cast<std::size_t>(s.points), ErrorCode::config_invalid,
            "field file does not cover time " + cell(lat.times[i]) + " for replicate " +
                std::to_string(replicate));
  }
  return s;
}

Outcome run(const std::string& subcommand, const Config& cfg, const Options& opt) {
  const auto& reg = registry();
  const auto it = reg.find(subcommand);
  require(it != reg.end(), ErrorCode::config_invalid, "unknown subcommand '" + subcommand + "'");
  Context c{cfg, opt, subcommand};
  c.seed();  // every experiment accepts a seed key
  const auto started = timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  it->second(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(opt.out_dir);
  for (const auto& [name, body] : c.files) write_file(fs::path(opt.out_dir) / name, body);
  json side;
  side["subcommand"] = subcommand;
  side["version"] = kVersion;
  side["config"] = cfg.entries();
  side["seed"] = c.seed();
  side["threads"] = opt.threads;
  side["started_at"] = started;
  side["wall_time_seconds"] = wall;
  side["status"] = c.outcome == Outcome::pass ? "pass" : c.outcome == Outcome::fail ? "fail" : "inconclusive";
  side["summary"] = c.summary;
  std::vector<std::string> names;
  for (const auto& [name, body] : c.files) names.push_back(name);
  side["files"] = names;
  write_file(fs::path(opt.out_dir) / (subcommand + ".json"), side.dump(2) + "\n");
  return c.outcome;
}

}  // namespace levyspde::cli
