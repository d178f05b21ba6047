#include "lowmach/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lowmach/acoustic.hpp"
#include "lowmach/cutoff.hpp"
#include "lowmach/error.hpp"
#include "lowmach/helmholtz.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ValidationError(key + ": not a number: '" + v + "'");
  return x;
}

long to_integer(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ValidationError(key + ": not an integer: '" + v + "'");
  return static_cast<long>(x);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string key;
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

#define LM_REAL(name, member)                                                       \
  Entry{name, [](Config& c, const std::string& v) { c.member = to_double(name, v); }, \
        [](const Config& c) { return fmt(c.member); }}
#define LM_INT(name, member)                                                                  \
  Entry{name,                                                                                 \
        [](Config& c, const std::string& v) { c.member = static_cast<decltype(c.member)>(to_integer(name, v)); }, \
        [](const Config& c) { return std::to_string(c.member); }}
#define LM_TEXT(name, member)                                                   \
  Entry{name, [](Config& c, const std::string& v) { c.member = v; }, \
        [](const Config& c) { return c.member; }}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      Entry{"grid.geometry",
            [](Config& c, const std::string& v) {
              try {
                c.geometry = geometry_from_string(v);
              } catch (const Error& e) {
                throw ValidationError(std::string("grid.geometry: ") + e.what());
              }
            },
            [](const Config& c) { return to_string(c.geometry); }},
      LM_INT("grid.n", n),
      LM_REAL("grid.r_max", r_max),
      LM_REAL("grid.r_sponge", r_sponge),
      LM_REAL("params.eps", params.eps),
      LM_REAL("params.alpha", params.alpha),
      LM_REAL("params.gamma", params.gamma),
      LM_REAL("params.lambda", params.lambda),
      LM_REAL("params.rho_bar", params.rho_bar),
      LM_REAL("params.horizon", params.horizon),
      LM_REAL("potential.amplitude", potential.amplitude),
      LM_REAL("potential.core", potential.core),
      LM_REAL("data.rho1_amplitude", data.rho1.amplitude),
      LM_REAL("data.rho1_width", data.rho1.width),
      LM_TEXT("data.rho1_shape", data.rho1.shape),
      LM_REAL("data.velocity_amplitude", data.velocity.amplitude),
      LM_REAL("data.velocity_width", data.velocity.width),
      LM_TEXT("data.velocity_shape", data.velocity.shape),
      LM_REAL("data.theta2_amplitude", data.theta2.amplitude),
      LM_REAL("data.theta2_width", data.theta2.width),
      LM_TEXT("data.theta2_shape", data.theta2.shape),
      LM_REAL("run.cfl", cfl),
      LM_TEXT("run.reconstruction", reconstruction),
      LM_INT("run.samples", samples),
      LM_INT("run.seed", seed),
      LM_REAL("run.tolerance", tolerance),
      LM_REAL("acoustic.delta", delta),
      LM_REAL("acoustic.window", window),
      LM_TEXT("acoustic.scheme", scheme),
      LM_REAL("acoustic.decay_radius", decay_radius),
      LM_INT("acoustic.time_steps", time_steps),
      LM_REAL("acoustic.p", p),
      LM_REAL("acoustic.q", q),
      Entry{"sweep.eps",
            [](Config& c, const std::string& v) { c.sweep_eps = parse_list(v); },
            [](const Config& c) {
              std::string s;
              for (std::size_t i = 0; i < c.sweep_eps.size(); ++i)
                s += (i ? "," : "") + fmt(c.sweep_eps[i]);
              return s;
            }},
      LM_REAL("sweep.beta", beta),
      LM_REAL("sweep.k_radius", k_radius),
      LM_TEXT("output.dir", output_dir),
  };
  return t;
}

#undef LM_REAL
#undef LM_INT
#undef LM_TEXT

void check_shape(const std::string& key, const std::string& shape) {
  if (shape != "gaussian" && shape != "flat_top")
    throw ValidationError(key + ": unknown shape '" + shape + "'");
}

}  // namespace

Grid Config::grid() const {
  if (n < 2) throw ValidationError("grid.n must be at least 2");
  if (!(r_max > 0.0) || !(r_sponge > 0.0) || r_sponge > r_max)
    throw ValidationError("grid: need 0 < r_sponge <= r_max");
  return geometry == Geometry::radial ? Grid::radial(n, r_max, r_sponge)
                                      : Grid::cartesian(n, r_max, r_sponge);
}

std::vector<double> Config::sample_times() const {
  if (samples < 1) throw ValidationError("run.samples must be positive");
  std::vector<double> t(samples + 1);
  for (int k = 0; k <= samples; ++k) t[k] = params.horizon * k / samples;
  return t;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : table()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void apply_setting(Config& c, const std::string& key, const std::string& value) {
  for (const auto& e : table()) {
    if (e.key == key) {
      e.set(c, trim(value));
      if (key.ends_with("_shape")) check_shape(key, trim(value));
      if (key == "run.reconstruction" && c.reconstruction != "muscl" &&
          c.reconstruction != "first_order")
        throw ValidationError("run.reconstruction: expected muscl or first_order");
      if (key == "acoustic.scheme" && c.scheme != "spectral" && c.scheme != "leapfrog")
        throw ValidationError("acoustic.scheme: expected spectral or leapfrog");
      return;
    }
  }
  throw ValidationError("unknown configuration key '" + key + "'");
}

void apply_override(Config& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' lacks '='");
  apply_setting(c, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Config parse_config(std::istream& is) {
  CLI::ConfigINI ini;
  ini.comment('#');
  std::vector<CLI::ConfigItem> items;
  try {
    items = ini.from_config(is);
  } catch (const CLI::Error& e) {
    throw ValidationError(std::string("configuration: ") + e.what());
  }
  Config c;
  std::vector<std::string> unknown;
  for (const auto& item : items) {
    // section open/close markers
    if (item.name == "++" || item.name == "--") continue;
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? " " : "") + item.inputs[i];
    const std::string key = item.fullname();
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      unknown.push_back(key);
      continue;
    }
    apply_setting(c, key, value);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown configuration key";
    for (const auto& k : unknown) msg += " '" + k + "'";
    throw ValidationError(msg);
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open configuration '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& os, const Config& c) {
  std::string section;
  for (const auto& e : table()) {
    const auto dot = e.key.find('.');
    const std::string sec = e.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << e.key.substr(dot + 1) << " = " << e.get(c) << '\n';
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    std::istringstream ws(item);
    while (ws >> tok) out.push_back(to_double("list", tok));
  }
  if (out.empty()) throw ValidationError("empty list '" + s + "'");
  return out;
}

SweepPlan SweepPlan::from_config(const Config& c) {
  SweepPlan p;
  p.eps = c.sweep_eps;
  p.data = c.data;
  p.potential = c.potential;
  p.base = c.params;
  p.geometry = c.geometry;
  p.n = c.n;
  p.r_max = c.r_max;
  p.r_sponge = c.r_sponge;
  p.sample_times = c.sample_times();
  p.output_dir = c.output_dir;
  p.delta = c.delta;
  p.beta = c.beta;
  p.k_radius = c.k_radius;
  p.cfl = c.cfl;
  p.muscl = c.reconstruction == "muscl";
  return p;
}

void SweepPlan::validate() const {
  if (eps.empty()) throw ValidationError("sweep: empty eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ValidationError("sweep: eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw ValidationError("sweep: eps list must be strictly decreasing");
  }
  if (geometry != Geometry::radial)
    throw ValidationError("sweep: only radial geometry has an exact reference");
  if (sample_times.size() < 2 || sample_times.front() != 0.0)
    throw ValidationError("sweep: sample times must start at 0 and contain a later time");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw ValidationError("sweep: sample times must be nondecreasing");
  if (!(k_radius > 0.0) || k_radius > r_sponge)
    throw ValidationError("sweep: need 0 < k_radius <= r_sponge");
  if (!(beta > 0.0 && beta < base.gamma / 3.0))
    throw ValidationError("sweep: need 0 < beta < gamma / 3");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("sweep: need 0 < delta < 1");
  if (!(cfl > 0.0 && cfl <= 0.4)) throw ValidationError("sweep: cfl must lie in (0, 0.4]");
  check_shape("data.rho1_shape", data.rho1.shape);
  check_shape("data.velocity_shape", data.velocity.shape);
  check_shape("data.theta2_shape", data.theta2.shape);
  try {
    base.validate(true);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

namespace {

SweepRow run_one(const SweepPlan& plan, double eps, const StaticProfile& prof,
                 const AcousticOperator& A, const Grid& g) {
  SweepRow row;
  row.eps = eps;
  ScalingParams params = plan.base;
  params.eps = eps;

  const IllPreparedData data = plan.data.build(g);
  const PrimitiveState s0 = init_ill_prepared(data, prof, params, g);
  PrimitiveRunOptions opt;
  opt.cfl = plan.cfl;
  opt.muscl = plan.muscl;
  const PrimitiveRun run = run_primitive(s0, prof, params, g, plan.sample_times, opt);
  row.steps = run.steps;
  row.energy0 = PrimitiveSystem(prof, params, g, true, plan.muscl).energy(s0);
  row.energy_violation = energy_inequality_violation(run, row.energy0);

  // acoustic reference: energy carried by the regularised data
  const ScalarField phi0 = project(data.u0, prof, g).second;
  row.acoustic_energy = acoustic_energy(A, regularize_data(A, data.rho1, phi0, plan.delta));

  const EssResCutoff cut = EssResCutoff::for_profile(prof);
  std::vector<double> local(run.states.size());
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const PrimitiveState& s = run.states[k];
    const auto [ess, res] = ess_res_split(s.rho - prof.rho0, s.q, cut);
    const double ne = lp_norm(ess, 2.0, g);
    row.n1_ess = std::max(row.n1_ess, ne);
    row.n1 = std::max(row.n1, ne + lp_norm(res, params.gamma, g));

    const ScalarField th = s.theta();
    ScalarField dev(g), scaled(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      dev[i] = th[i] - 1.0;
      scaled[i] = dev[i] / (eps * eps) - data.theta2[i];
    }
    row.n2a = std::max(row.n2a, lp_norm(dev, 2.0, g));
    row.n2b = std::max(row.n2b, lp_norm(scaled, 2.0, g));

    const VectorField u = s.velocity();
    ScalarField w(g);
    for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::sqrt(s.rho[i] / prof.rho0[i]) * u[0][i];
    const double nk = lp_norm(w, 2.0, g, plan.k_radius);
    local[k] = nk * nk;
  }
  for (std::size_t k = 1; k < local.size(); ++k)
    row.n3 += 0.5 * (run.states[k].t - run.states[k - 1].t) * (local[k] + local[k - 1]);

  row.bounds = uniform_bounds_report(run.states, prof, params, g);
  row.residual_pressure =
      residual_pressure_integral(run.states, prof, params.gamma, plan.k_radius, plan.beta, g);
  row.ok = true;
  return row;
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == 0.0 && *hi == 0.0) return 1.0;
  if (!(*lo > 0.0)) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

}  // namespace

void ConvergenceReport::summarize() {
  std::vector<double> eps, n1, n3, n2a, resp, n2a_c, n1e_c;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    eps.push_back(r.eps);
    n1.push_back(r.n1);
    n3.push_back(r.n3);
    n2a.push_back(r.n2a);
    resp.push_back(r.residual_pressure);
    n2a_c.push_back(r.n2a / (r.eps * r.eps));
    n1e_c.push_back(r.n1_ess / r.eps);
  }
  complete = !rows.empty() && eps.size() == rows.size();
  const auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return v.size() >= 2;
  };
  n1_decreasing = decreasing(n1);
  n3_decreasing = decreasing(n3);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  slope_n1 = eps.size() >= 2 ? fit_log_slope(eps, n1) : nan;
  slope_n3 = eps.size() >= 2 ? fit_log_slope(eps, n3) : nan;
  slope_n2a = eps.size() >= 2 ? fit_log_slope(eps, n2a) : nan;
  slope_residual = eps.size() >= 2 ? fit_log_slope(eps, resp) : nan;
  n2a_spread = spread(n2a_c);
  n1_ess_spread = spread(n1e_c);

  bound_spread.clear();
  for (const auto& r : rows) {
    if (!r.ok) continue;
    for (const auto& b : r.bounds.all()) {
      auto it = std::find_if(bound_spread.begin(), bound_spread.end(),
                             [&](const BoundMeasure& m) { return m.name == b.name; });
      if (it == bound_spread.end()) bound_spread.push_back({b.name, 0.0, 0.0});
    }
    break;
  }
  for (auto& m : bound_spread) {
    std::vector<double> c;
    for (const auto& r : rows) {
      if (!r.ok) continue;
      for (const auto& b : r.bounds.all())
        if (b.name == m.name) c.push_back(b.constant);
    }
    m.value = spread(c);
    m.constant = m.value;
  }
}

ConvergenceReport sweep_epsilon(const SweepPlan& plan) {
  plan.validate();
  const Grid g = Grid::radial(plan.n, plan.r_max, plan.r_sponge);
  const StaticProfile prof = build_profile(plan.potential, plan.base, g);
  const AcousticOperator A(prof, g);

  ConvergenceReport rep;
  rep.rows.resize(plan.eps.size());
  const int m = static_cast<int>(plan.eps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < m; ++k) {
    try {
      rep.rows[k] = run_one(plan, plan.eps[k], prof, A, g);
    } catch (const std::exception& e) {
      rep.rows[k].eps = plan.eps[k];
      rep.rows[k].ok = false;
      rep.rows[k].error = e.what();
    }
  }
  rep.summarize();
  return rep;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
  os << "eps,ok,n1,n1_ess,n2a,n2b,n3,residual_pressure,energy0,energy_violation,"
        "acoustic_energy,steps";
  std::vector<std::string> names;
  for (const auto& r : rep.rows) {
    if (!r.ok) continue;
    for (const auto& b : r.bounds.all()) names.push_back(b.name);
    break;
  }
  for (const auto& nm : names) os << ',' << nm;
  os << '\n';
  os << std::setprecision(17);
  for (const auto& r : rep.rows) {
    os << r.eps << ',' << (r.ok ? 1 : 0) << ',' << r.n1 << ',' << r.n1_ess << ',' << r.n2a << ','
       << r.n2b << ',' << r.n3 << ',' << r.residual_pressure << ',' << r.energy0 << ','
       << r.energy_violation << ',' << r.acoustic_energy << ',' << r.steps;
    const auto all = r.bounds.all();
    for (std::size_t i = 0; i < names.size(); ++i)
      os << ',' << (r.ok && i < all.size() ? all[i].constant : 0.0);
    os << '\n';
  }
}

void write_sweep_summary(std::ostream& os, const ConvergenceReport& rep) {
  os << std::setprecision(17);
  os << "complete " << (rep.complete ? "yes" : "no") << '\n';
  for (const auto& r : rep.rows)
    if (!r.ok) os << "failed eps=" << r.eps << ": " << r.error << '\n';
  os << "n1_decreasing " << (rep.n1_decreasing ? "yes" : "no") << '\n';
  os << "n3_decreasing " << (rep.n3_decreasing ? "yes" : "no") << '\n';
  os << "slope_n1 " << rep.slope_n1 << '\n';
  os << "slope_n3 " << rep.slope_n3 << '\n';
  os << "slope_n2a " << rep.slope_n2a << '\n';
  os << "slope_residual_pressure " << rep.slope_residual << '\n';
  os << "spread_n2a_over_eps2 " << rep.n2a_spread << '\n';
  os << "spread_n1_ess_over_eps " << rep.n1_ess_spread << '\n';
  for (const auto& b : rep.bound_spread) os << "spread_" << b.name << ' ' << b.value << '\n';
}

}  // namespace lowmach
