/// @file test_primitive.cpp
/// @brief Ill-prepared data, the finite-volume step, energy and renormalisation audits.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lowmach/error.hpp"
#include "lowmach/primitive.hpp"
#include "lowmach/quadrature.hpp"

using namespace lowmach;

namespace {

IllPreparedData zero_data(const Grid& g) {
  return {ScalarField(g, 0.0), VectorField(g, Staggering::cell), ScalarField(g, 0.0)};
}

ScalarField bump(const Grid& g, double a, double center, double width) {
  return ScalarField::from_radius(g, [=](double r) { return a * std::exp(-std::pow((r - center) / width, 2)); });
}

ScalingParams params_with(double eps, double horizon = 1.0) {
  ScalingParams p;
  p.eps = eps;
  p.horizon = horizon;
  return p;
}

std::vector<double> uniform_times(double T, int n) {
  std::vector<double> t;
  for (int k = 1; k <= n; ++k) t.push_back(T * k / n);
  return t;
}

}  // namespace

TEST_CASE("scaling parameter hypotheses") {
  ScalingParams p;
  CHECK(p.validate().empty());
  p.gamma = 1.4;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK(p.validate(true).size() == 1);
  p.gamma = 5.0 / 3.0;
  p.alpha = 1.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.alpha = 1.0;
  p.eps = 0.0;
  CHECK_THROWS_AS(p.validate(true), DomainError);
}

TEST_CASE("ill-prepared initial data") {
  const Grid g = Grid::radial(512, 16.0, 10.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);

  SUBCASE("zero perturbations give the static state") {
    const PrimitiveState s = init_ill_prepared(zero_data(g), prof, params_with(0.2), g);
    CHECK((s.rho - prof.rho0).max_abs() == 0.0);
    CHECK(s.mom.max_abs() == 0.0);
    CHECK((s.q - prof.rho0).max_abs() == 0.0);
  }

  SUBCASE("density bump of mass 0.2 at eps = 0.1") {
    IllPreparedData d = zero_data(g);
    d.rho1 = bump(g, 0.2 / std::pow(M_PI, 1.5), 0.0, 1.0);
    const PrimitiveState s = init_ill_prepared(d, prof, params_with(0.1), g);
    CHECK(integrate(s.rho - prof.rho0, g) == doctest::Approx(0.02).epsilon(1e-4));
  }

  SUBCASE("temperature bump scales with eps^2") {
    IllPreparedData d = zero_data(g);
    d.theta2 = bump(g, 1.7, 0.0, 1.5);
    const PrimitiveState s = init_ill_prepared(d, prof, params_with(0.1), g);
    const double dev = (s.theta() - ScalarField(g, 1.0)).max_abs();
    CHECK(dev == doctest::Approx(0.01 * d.theta2.max_abs()).epsilon(1e-12));
  }

  SUBCASE("negative density is rejected") {
    IllPreparedData d = zero_data(g);
    d.rho1 = bump(g, -100.0, 0.0, 1.0);
    CHECK_THROWS_AS(init_ill_prepared(d, prof, params_with(0.2), g), DataError);
  }

  SUBCASE("data bounds do not depend on eps") {
    DataSpec spec{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "flat_top"}};
    const IllPreparedData d = spec.build(g);
    const DataBounds b = data_bounds(d, g);
    CHECK(std::isfinite(b.rho1_l1));
    CHECK(b.rho1_linf == d.rho1.max_abs());
    CHECK(b.theta2_linf == d.theta2.max_abs());
    CHECK(b.u0_linf > 0.0);
  }
}

TEST_CASE("velocity and temperature accessors guard the vacuum") {
  const Grid g = Grid::radial(8, 4.0, 3.0);
  PrimitiveState s{ScalarField(g, 1.0), VectorField(g, Staggering::cell), ScalarField(g, 2.0), 0.0};
  s.rho[2] = 0.0;
  s.mom[0][2] = 1.0;
  const ScalarField th = s.theta();
  CHECK(th[2] == 1.0);
  CHECK(th[3] == 2.0);
  CHECK(s.velocity()[0][2] == 0.0);
}

TEST_CASE("static states") {
  SUBCASE("hydrostatic state is preserved under refinement") {
    std::vector<double> drift;
    for (int n : {256, 512}) {
      const Grid g = Grid::radial(n, 16.0, 10.0);
      const ScalingParams p = params_with(0.2);
      const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
      const PrimitiveState s0 = init_ill_prepared(zero_data(g), prof, p, g);
      const PrimitiveRun run = run_primitive(s0, prof, p, g, {0.5});
      drift.push_back((run.states.back().rho - prof.rho0).max_abs());
      CHECK(run.states.back().mom.max_abs() < 1e-12);
      CHECK(std::abs(run.samples.back().energy) < 1e-14 * integrate(prof.rho0, g) / (p.eps * p.eps));
    }
    // bounded by C T h^2 with C = 1 for both members of the pair
    CHECK(drift[0] <= 0.5 * std::pow(16.0 / 256, 2));
    CHECK(drift[1] <= 0.5 * std::pow(16.0 / 512, 2));
  }

  SUBCASE("uniform state without gravity is exactly stationary") {
    const Grid g = Grid::radial(128, 16.0, 10.0);
    const ScalingParams p = params_with(0.5);
    const StaticProfile prof = build_profile(PotentialSpec{0.0, 1.0}, p, g);
    const PrimitiveSystem sys(prof, p, g);
    const PrimitiveState s0 = init_ill_prepared(zero_data(g), prof, p, g);
    PrimitiveState s = s0;
    for (int k = 0; k < 20; ++k) s = sys.step(s, sys.stable_dt(s));
    CHECK((s.rho - s0.rho).max_abs() == 0.0);
    CHECK((s.q - s0.q).max_abs() == 0.0);
    CHECK(s.mom.max_abs() == 0.0);
  }
}

TEST_CASE("small pulse travels at the sound speed") {
  // Physical time t corresponds to acoustic time t / eps; small eps keeps the
  // eps^alpha viscosity from smearing the front.
  const double eps = 0.05;
  const Grid g = Grid::radial(1024, 16.0, 10.0);
  const ScalingParams p = params_with(eps);
  const StaticProfile prof = build_profile(PotentialSpec{0.0, 1.0}, p, g);
  IllPreparedData d = zero_data(g);
  d.rho1 = bump(g, 1e-3, 3.0, 0.3);
  const PrimitiveState s0 = init_ill_prepared(d, prof, p, g);
  const std::vector<double> times = {1.0 * eps, 2.0 * eps, 3.0 * eps, 4.0 * eps};
  const PrimitiveRun run = run_primitive(s0, prof, p, g, times);
  std::vector<double> pos;
  for (const PrimitiveState& s : run.states) {
    std::size_t best = 0;
    double peak = -INFINITY;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double w = g.center(i) * (s.rho[i] - prof.rho0[i]);
      if (g.center(i) > 3.0 && w > peak) {
        peak = w;
        best = i;
      }
    }
    pos.push_back(g.center(best));
  }
  const double speed = (pos[3] - pos[0]) / 3.0;
  CHECK(std::abs(speed - std::sqrt(5.0 / 3.0)) / std::sqrt(5.0 / 3.0) < 0.03);
}

TEST_CASE("energy integrand at gamma = 2") {
  const Grid g = Grid::radial(32, 4.0, 3.0);
  ScalingParams p = params_with(0.1);
  p.gamma = 2.0;
  const StaticProfile prof = build_profile(PotentialSpec{0.0, 1.0}, p, g);
  const PrimitiveSystem sys(prof, p, g);
  // rho Theta = 1.2 with Theta = 1
  const PrimitiveState s{ScalarField(g, 1.2), VectorField(g, Staggering::cell), ScalarField(g, 1.2), 0.0};
  const double vol = integrate(ScalarField(g, 1.0), g);
  CHECK(sys.energy(s) / vol == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("energy, mass and temperature budgets") {
  const Grid g = Grid::radial(512, 16.0, 10.0);
  const ScalingParams p = params_with(0.2);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const PrimitiveSystem sys(prof, p, g);

  SUBCASE("velocity bump") {
    IllPreparedData d = zero_data(g);
    d.u0[0] = ScalarField::from_radius(g, [](double r) { return 0.5 * r * std::exp(-r * r); });
    const PrimitiveState s0 = init_ill_prepared(d, prof, p, g);
    const PrimitiveRun run = run_primitive(s0, prof, p, g, uniform_times(1.0, 20));
    double prev = sys.energy(s0);
    CHECK(prev > 0.0);
    for (const PrimitiveSample& smp : run.samples) {
      CHECK(smp.energy <= prev);
      prev = smp.energy;
    }
    CHECK(energy_inequality_violation(run, sys.energy(s0)) <= 0.0);
  }

  SUBCASE("acoustic-dominated data") {
    DataSpec spec{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}};
    const PrimitiveState s0 = init_ill_prepared(spec.build(g), prof, p, g);
    const PrimitiveRun run = run_primitive(s0, prof, p, g, uniform_times(1.0, 20));
    const double e0 = sys.energy(s0);
    double prev = e0, mass0 = integrate(s0.rho, g), q0 = integrate(s0.q, g);
    for (std::size_t k = 0; k < run.samples.size(); ++k) {
      const PrimitiveSample& smp = run.samples[k];
      CHECK(smp.energy <= prev);
      CHECK(smp.dissipation >= 0.0);
      prev = smp.energy;
      CHECK(std::abs(smp.mass_defect) <= 1e-12 * mass0);
      CHECK(std::abs(smp.q_defect) <= 1e-12 * q0);
      CHECK(run.states[k].rho.min() > 0.0);
    }
    CHECK(energy_inequality_violation(run, e0) <= 0.0);
  }
}

TEST_CASE("CFL and checkpoint") {
  const Grid g = Grid::radial(128, 16.0, 10.0);
  const ScalingParams p = params_with(0.2);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const PrimitiveSystem sys(prof, p, g);
  DataSpec spec{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}};
  const PrimitiveState s0 = init_ill_prepared(spec.build(g), prof, p, g);

  const double dt = sys.stable_dt(s0);
  CHECK(dt > 0.0);
  CHECK_THROWS_AS(sys.step(s0, 1.01 * dt), CflError);
  try {
    sys.step(s0, 2.0 * dt);
  } catch (const CflError& e) {
    CHECK(e.dt() == doctest::Approx(2.0 * dt));
    CHECK(e.dt_max() == doctest::Approx(dt));
  }

  PrimitiveState s = sys.step(s0, dt);
  std::stringstream buf;
  write_checkpoint(buf, s, p);
  const Checkpoint back = read_checkpoint(buf);
  CHECK(back.state.t == s.t);
  CHECK(back.params.eps == p.eps);
  CHECK(back.params.gamma == p.gamma);
  CHECK((back.state.rho - s.rho).max_abs() == 0.0);
  CHECK((back.state.q - s.q).max_abs() == 0.0);
  CHECK((back.state.mom - s.mom).max_abs() == 0.0);

  std::stringstream junk("not a checkpoint");
  CHECK_THROWS_AS(read_checkpoint(junk), DataError);
}

TEST_CASE("renormalised transport") {
  const ScalingParams p = params_with(0.2);
  DataSpec spec{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}};

  auto defects = [&](int n, RenormFunction b) {
    const Grid g = Grid::radial(n, 16.0, 10.0);
    const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
    const PrimitiveSystem sys(prof, p, g);
    const PrimitiveState s0 = init_ill_prepared(spec.build(g), prof, p, g);
    const PrimitiveRun run = run_primitive(s0, prof, p, g, uniform_times(0.5, 5));
    return renorm_check(sys, run.states, b);
  };

  SUBCASE("linear b reduces to conservation of q") {
    RenormFunction b;
    b.kind = RenormFunction::Kind::linear;
    for (double d : defects(256, b)) CHECK(d < 1e-12);
  }
  SUBCASE("constant b") {
    RenormFunction b;
    b.kind = RenormFunction::Kind::constant;
    b.constant = 2.5;
    for (double d : defects(256, b)) CHECK(d < 1e-12);
  }
  SUBCASE("capped quadratic b converges under refinement") {
    const std::vector<double> coarse = defects(256, RenormFunction{}), fine = defects(512, RenormFunction{});
    double c = 0.0, f = 0.0;
    for (double d : coarse) c = std::max(c, d);
    for (double d : fine) f = std::max(f, d);
    CHECK(c / f >= 1.8);
  }
  SUBCASE("cap switches the derivative off") {
    RenormFunction b;
    b.cap = 2.0;
    CHECK(b.derivative(1.0) == doctest::Approx(2.0));
    CHECK(b.derivative(10.0) == 0.0);
    CHECK(b.value(1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("diagnostics csv") {
  const Grid g = Grid::radial(64, 16.0, 10.0);
  const ScalingParams p = params_with(0.4);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const PrimitiveRun run = run_primitive(init_ill_prepared(zero_data(g), prof, p, g), prof, p, g, {0.1, 0.2});
  std::ostringstream os;
  write_diagnostics_csv(os, run);
  CHECK(os.str().rfind("t,energy,dissipation,mass_defect,q_defect,sponge_budget\n", 0) == 0);
}
