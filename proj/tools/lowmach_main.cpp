/// @file lowmach_main.cpp
/// @brief Command line front end: one subcommand per experiment, INI config plus overrides.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include "lowmach/acoustic.hpp"
#include "lowmach/anelastic.hpp"
#include "lowmach/error.hpp"
#include "lowmach/harness.hpp"
#include "lowmach/helmholtz.hpp"
#include "lowmach/profile.hpp"
#include "lowmach/quadrature.hpp"

using namespace lowmach;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  bool experimental = false;
  long seed = -1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "configuration file");
  sub->add_option("-s,--set", c.overrides, "override, e.g. --set params.eps=0.1")->allow_extra_args(false);
  sub->add_option("-o,--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_flag("--experimental", c.experimental, "allow cartesian runs");
}

Config resolve(const Common& c) {
  Config cfg = c.config.empty() ? Config{} : load_config(c.config);
  for (const auto& o : c.overrides) apply_override(cfg, o);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed >= 0) cfg.seed = static_cast<unsigned>(c.seed);
  if (cfg.geometry == Geometry::cartesian && !c.experimental)
    throw ValidationError("cartesian geometry requires --experimental");
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::ofstream open_out(const Config& cfg, const std::string& name) {
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << std::setprecision(17);
  return os;
}

void require_radial(const Config& cfg, const char* what) {
  if (cfg.geometry != Geometry::radial)
    throw ValidationError(std::string(what) + " supports radial geometry only");
}

int cmd_profile(const Config& cfg) {
  const Grid g = cfg.grid();
  const StaticProfile prof = build_profile(cfg.potential, cfg.params, g);
  if (g.is_radial()) {
    auto os = open_out(cfg, "profile.csv");
    write_profile_csv(os, prof);
  }
  auto fl = open_out(cfg, "flatness.txt");
  write_flatness(fl, flatness_report(cfg.potential, cfg.params, g));
  if (g.is_radial()) fl << "static_residual " << static_residual(prof, g) << '\n';
  std::cout << "wrote profile.csv and flatness.txt to " << cfg.output_dir << '\n';
  return 0;
}

int cmd_primitive(const Config& cfg, const std::string& restart) {
  require_radial(cfg, "simulate-primitive");
  for (const auto& w : cfg.params.validate(true)) std::cerr << "warning: hypothesis " << w << '\n';
  const Grid g = cfg.grid();
  const StaticProfile prof = build_profile(cfg.potential, cfg.params, g);
  const ScalingParams params = cfg.params;
  const PrimitiveState s0 = [&] {
    if (restart.empty()) return init_ill_prepared(cfg.data.build(g), prof, params, g);
    std::ifstream in(restart, std::ios::binary);
    if (!in) throw ValidationError("cannot open checkpoint " + restart);
    Checkpoint ck = read_checkpoint(in);
    require_aligned(ck.state.rho.grid(), g, "checkpoint");
    return std::move(ck.state);
  }();
  std::vector<double> times;
  for (double t : cfg.sample_times()) times.push_back(s0.t + t);
  PrimitiveRunOptions opt;
  opt.cfl = cfg.cfl;
  opt.muscl = cfg.reconstruction == "muscl";
  const PrimitiveRun run = run_primitive(s0, prof, params, g, times, opt);
  {
    auto os = open_out(cfg, "primitive.csv");
    write_diagnostics_csv(os, run);
  }
  {
    const auto path = std::filesystem::path(cfg.output_dir) / "primitive.chk";
    std::ofstream os(path, std::ios::binary);
    write_checkpoint(os, run.states.back(), params);
  }
  auto os = open_out(cfg, "state.csv");
  const PrimitiveState& s = run.states.back();
  const ScalarField th = s.theta();
  const VectorField u = s.velocity();
  os << "r,rho,u,theta\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    os << g.center(i) << ',' << s.rho[i] << ',' << u[0][i] << ',' << th[i] << '\n';
  const double e0 = PrimitiveSystem(prof, params, g).energy(s0);
  std::cout << std::setprecision(17) << "steps " << run.steps << "\nenergy0 " << e0
            << "\nenergy_violation " << energy_inequality_violation(run, e0) << '\n';
  return 0;
}

int cmd_anelastic(const Config& cfg) {
  const Grid g = cfg.grid();
  const StaticProfile prof = build_profile(cfg.potential, cfg.params, g);
  const IllPreparedData data = cfg.data.build(g);
  const AnelasticState init = init_anelastic(data.u0, data.theta2, prof, g, cfg.tolerance);
  const auto times = cfg.sample_times();
  const AnelasticRun run = run_anelastic(init, prof, g, times, cfg.params.horizon / cfg.samples,
                                         cfg.tolerance);
  const SmoothnessReport sm = smoothness_monitor(run.states);
  auto os = open_out(cfg, "anelastic.csv");
  os << "t,divergence_defect,velocity,pressure,density\n";
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const auto& smp = sm.samples[k];
    os << smp.t << ',' << run.divergence_defect[k] << ',' << smp.velocity << ',' << smp.pressure
       << ',' << smp.density << '\n';
  }
  std::cout << "steps " << run.steps << "\nblowup " << (sm.blowup ? "yes" : "no") << '\n';
  return 0;
}

struct AcousticSetup {
  Grid g;
  StaticProfile prof;
  AcousticOperator A;
  IllPreparedData data;

  explicit AcousticSetup(const Config& cfg)
      : g(cfg.grid()),
        prof(build_profile(cfg.potential, cfg.params, g)),
        A(prof, g),
        data(cfg.data.build(g)) {}

  AcousticState initial(double delta) const {
    return regularize_data(A, data.rho1, project(data.u0, prof, g).second, delta);
  }
};

int cmd_acoustic(const Config& cfg) {
  require_radial(cfg, "simulate-acoustic");
  const AcousticSetup set(cfg);
  AcousticOptions opt;
  opt.scheme = cfg.scheme == "leapfrog" ? AcousticScheme::leapfrog : AcousticScheme::spectral;
  opt.sample_times = cfg.sample_times();
  opt.sponge = opt.scheme == AcousticScheme::leapfrog;
  const AcousticTrajectory tr = evolve_acoustic(set.A, set.initial(cfg.delta), cfg.params, opt);
  auto os = open_out(cfg, "acoustic.csv");
  os << "t,energy,s_l2,phi_l2\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k)
    os << tr.states[k].t << ',' << tr.energy[k] << ',' << lp_norm(tr.states[k].s, 2.0, set.g) << ','
       << lp_norm(tr.states[k].phi, 2.0, set.g) << '\n';
  return 0;
}

int cmd_spectrum(const Config& cfg, int modes) {
  require_radial(cfg, "spectrum");
  const Grid g = cfg.grid();
  const StaticProfile prof = build_profile(cfg.potential, cfg.params, g);
  const AcousticOperator A(prof, g);
  auto os = open_out(cfg, "spectrum.csv");
  os << "k,lambda,frequency\n";
  const auto& ev = A.eigenvalues();
  const std::size_t m = modes > 0 ? std::min<std::size_t>(modes, ev.size()) : ev.size();
  for (std::size_t k = 0; k < m; ++k) os << k << ',' << ev[k] << ',' << std::sqrt(ev[k]) << '\n';
  std::cout << std::setprecision(17) << "eigen_residual " << A.eigen_residual()
            << "\nlambda_bound " << A.lambda_bound() << '\n';
  return 0;
}

/// Localised datum at the origin: gaussian in c rho1 normalised in the weighted norm.
ScalarField unit_datum(const AcousticOperator& A, const ScalarField& f) {
  const double nrm = A.norm(f);
  if (!(nrm > 0.0)) throw DataError("acoustic datum vanishes");
  return (1.0 / nrm) * f;
}

int cmd_decay(const Config& cfg) {
  require_radial(cfg, "decay");
  const AcousticSetup set(cfg);
  const FrequencyWindow window(cfg.window);
  const ScalarField h = unit_datum(set.A, set.data.rho1);
  const double t1 = cfg.params.horizon;
  const NormSeries ser =
      local_norm_series(set.A, window, cfg.decay_radius, h, 2.0 * t1, 2 * cfg.time_steps);
  const double m1 = measure_local_decay(set.A, window, cfg.decay_radius, h, t1, cfg.time_steps);
  const double m2 =
      measure_local_decay(set.A, window, cfg.decay_radius, h, 2.0 * t1, 2 * cfg.time_steps);
  auto os = open_out(cfg, "decay.csv");
  os << "t,local_norm\n";
  for (std::size_t k = 0; k < ser.t.size(); ++k) os << ser.t[k] << ',' << ser.value[k] << '\n';
  std::cout << std::setprecision(17) << "measure_T " << m1 << "\nmeasure_2T " << m2
            << "\nsaturation " << m2 / m1 << '\n';
  return 0;
}

int cmd_strichartz(const Config& cfg) {
  require_radial(cfg, "strichartz");
  if (!strichartz_admissible(cfg.p, cfg.q)) {
    std::ostringstream msg;
    msg << "pair (p, q) = (" << cfg.p << ", " << cfg.q << ") is not admissible: need 1/p + 3/q = 1/2";
    throw ValidationError(msg.str());
  }
  const AcousticSetup set(cfg);
  const FrequencyWindow window(cfg.window);
  const Grid& g = set.g;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd;
  ScalarField noise(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    noise[i] = nd(rng) * std::exp(-std::pow(g.center(i) / 2.0, 2));
  ScalarField shell = ScalarField::from_radius(g, [](double r) { return std::exp(-std::pow(r - 2.0, 2)); });
  const std::vector<std::pair<std::string, ScalarField>> data = {
      {"bump", unit_datum(set.A, set.data.rho1)},
      {"noise", unit_datum(set.A, set.A.calculus(window, noise))},
      {"shell", unit_datum(set.A, shell)}};
  auto os = open_out(cfg, "strichartz.csv");
  os << "datum,norm,measure,ratio\n";
  for (const auto& [name, h] : data) {
    const double m = measure_strichartz(set.A, window, h, cfg.p, cfg.q, cfg.params.horizon,
                                        cfg.time_steps);
    const double nrm = lp_norm(h, 2.0, g);
    os << name << ',' << nrm << ',' << m << ',' << m / nrm << '\n';
  }
  std::cout << "wrote strichartz.csv\n";
  return 0;
}

int cmd_sweep(const Config& cfg, const std::string& eps_list) {
  SweepPlan plan = SweepPlan::from_config(cfg);
  if (!eps_list.empty()) plan.eps = parse_list(eps_list);
  const ConvergenceReport rep = sweep_epsilon(plan);
  {
    auto os = open_out(cfg, "convergence.csv");
    write_convergence_csv(os, rep);
  }
  auto os = open_out(cfg, "sweep_summary.txt");
  write_sweep_summary(os, rep);
  write_sweep_summary(std::cout, rep);
  if (!rep.complete) {
    for (const auto& r : rep.rows)
      if (!r.ok) throw SolverError("sweep run at eps=" + std::to_string(r.eps) + " failed: " + r.error, 0.0);
  }
  return 0;
}

int cmd_audit(const Config& cfg, double scale) {
  require_radial(cfg, "audit-rei");
  const AcousticSetup set(cfg);
  const Grid& g = set.g;
  const PrimitiveState s0 = init_ill_prepared(set.data, set.prof, cfg.params, g);
  const auto times = cfg.sample_times();
  PrimitiveRunOptions popt;
  popt.cfl = cfg.cfl;
  popt.muscl = cfg.reconstruction == "muscl";
  const PrimitiveRun run = run_primitive(s0, set.prof, cfg.params, g, times, popt);
  AcousticOptions aopt;
  aopt.sample_times = times;
  const AcousticTrajectory ac = evolve_acoustic(set.A, set.initial(cfg.delta), cfg.params, aopt);
  const double e0 = PrimitiveSystem(set.prof, cfg.params, g).energy(s0);
  const ReiReport rep = rei_audit(run.states, ac.states, {}, set.A, set.prof, cfg.params, g,
                                  e0 - run.samples.back().energy, scale);
  auto os = open_out(cfg, "rei.csv");
  os << "t,rel_energy,dissipation,lhs,momentum,pressure,buoyancy,rhs,defect\n";
  for (const auto& s : rep.samples)
    os << s.t << ',' << s.rel_energy << ',' << s.dissipation << ',' << s.lhs << ',' << s.momentum
       << ',' << s.pressure << ',' << s.buoyancy << ',' << s.rhs << ',' << s.defect << '\n';
  std::cout << std::setprecision(17) << "tolerance " << rep.tolerance << "\nmax_defect "
            << rep.max_defect << "\nholds " << (rep.holds ? "yes" : "no") << '\n';
  return 0;
}

int cmd_report(const Config& cfg) {
  auto os = open_out(cfg, "report.txt");
  write_config(os, cfg);
  os << '\n';
  const Grid g = cfg.grid();
  for (const auto& w : cfg.params.validate(true)) os << "warning hypothesis " << w << '\n';
  const StaticProfile prof = build_profile(cfg.potential, cfg.params, g);
  const IllPreparedData data = cfg.data.build(g);
  const DataBounds b = data_bounds(data, g);
  os << "rho1_l1 " << b.rho1_l1 << "\nrho1_linf " << b.rho1_linf << "\nu0_l2 " << b.u0_l2
     << "\nu0_linf " << b.u0_linf << "\ntheta2_l1 " << b.theta2_l1 << "\ntheta2_linf "
     << b.theta2_linf << '\n';
  if (g.is_radial()) {
    const PrimitiveState s0 = init_ill_prepared(data, prof, cfg.params, g);
    const PrimitiveSystem sys(prof, cfg.params, g);
    os << "static_residual " << static_residual(prof, g) << "\ncrossing_time "
       << crossing_time(g, cfg.params.gamma, cfg.params.rho_bar) << "\nstable_dt "
       << sys.stable_dt(s0, cfg.cfl) << "\nenergy0 " << sys.energy(s0) << '\n';
  }
  std::cout << "wrote report.txt to " << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low Mach, low Froude number compressible flow experiments"};
  app.require_subcommand(1);

  Common common;
  std::string restart, eps_list;
  int modes = 0;
  double scale = 1.0;
  double p = 0.0, q = 0.0;

  auto* profile = app.add_subcommand("profile", "hydrostatic profile and flatness report");
  auto* prim = app.add_subcommand("simulate-primitive", "primitive system run");
  prim->add_option("--restart", restart, "checkpoint to continue from");
  auto* anel = app.add_subcommand("simulate-anelastic", "anelastic limit run");
  auto* acou = app.add_subcommand("simulate-acoustic", "acoustic system run");
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the acoustic operator");
  spec->add_option("--modes", modes, "number of eigenvalues to write (0 = all)");
  auto* decay = app.add_subcommand("decay", "local energy decay measurement");
  auto* stri = app.add_subcommand("strichartz", "Strichartz norm measurement");
  stri->add_option("--p", p, "time exponent");
  stri->add_option("--q", q, "space exponent");
  auto* sweep = app.add_subcommand("sweep", "eps sweep and convergence report");
  sweep->add_option("--eps", eps_list, "comma separated, strictly decreasing");
  auto* audit = app.add_subcommand("audit-rei", "relative energy inequality audit");
  audit->add_option("--scale", scale, "factor applied to the test velocity");
  auto* report = app.add_subcommand("report", "resolved configuration and derived quantities");
  for (auto* sub : {profile, prim, anel, acou, spec, decay, stri, sweep, audit, report})
    add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Config cfg = resolve(common);
    if (*profile) return cmd_profile(cfg);
    if (*prim) return cmd_primitive(cfg, restart);
    if (*anel) return cmd_anelastic(cfg);
    if (*acou) return cmd_acoustic(cfg);
    if (*spec) return cmd_spectrum(cfg, modes);
    if (*decay) return cmd_decay(cfg);
    if (*stri) {
      if (stri->count("--p")) cfg.p = p;
      if (stri->count("--q")) cfg.q = q;
      return cmd_strichartz(cfg);
    }
    if (*sweep) return cmd_sweep(cfg, eps_list);
    if (*audit) return cmd_audit(cfg, scale);
    if (*report) return cmd_report(cfg);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const CflError& e) {
    std::cerr << "stability failure: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
