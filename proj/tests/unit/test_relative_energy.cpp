/// @file test_relative_energy.cpp
/// @brief Relative energy functional, uniform bounds, residual pressure and the inequality audit.

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "lowmach/error.hpp"
#include "lowmach/helmholtz.hpp"
#include "lowmach/quadrature.hpp"
#include "lowmach/relative_energy.hpp"

using namespace lowmach;

namespace {

ScalingParams params_with(double eps, double gamma = 5.0 / 3.0) {
  ScalingParams p;
  p.eps = eps;
  p.gamma = gamma;
  return p;
}

VectorField cell_vector(const Grid& g, const std::function<double(double)>& f) {
  VectorField v(g, Staggering::cell);
  v[0] = ScalarField::from_radius(g, f);
  return v;
}

std::vector<double> sample_mesh(double T, int n) {
  std::vector<double> t;
  for (int k = 0; k <= n; ++k) t.push_back(T * k / n);
  return t;
}

DataSpec mild_data() { return {{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}}; }

// Primitive trajectory (t = 0 included) for one eps.
std::vector<PrimitiveState> trajectory(const DataSpec& spec, const ScalingParams& p, const Grid& g,
                                       const StaticProfile& prof, int samples) {
  const PrimitiveState s0 = init_ill_prepared(spec.build(g), prof, p, g);
  return run_primitive(s0, prof, p, g, sample_mesh(1.0, samples)).states;
}

}  // namespace

TEST_CASE("matched states have zero relative energy") {
  const Grid g = Grid::radial(128, 8.0, 6.0);
  const ScalingParams p = params_with(0.2);
  const ScalarField rho = ScalarField::from_radius(g, [](double r) { return 1.0 + 0.3 * std::exp(-r * r); });
  const ScalarField theta = ScalarField::from_radius(g, [](double r) { return 1.0 + 0.1 * std::exp(-r); });
  const VectorField u = cell_vector(g, [](double r) { return r * std::exp(-r * r); });
  VectorField m = u;
  m[0] *= rho;
  const PrimitiveState s{rho, m, rho * theta, 0.0};
  CHECK(std::abs(rel_energy(s, rho * theta, u, p, g)) < 1e-12);
}

TEST_CASE("closed form at gamma = 2") {
  // unit volume: the radial ball of radius (3 / 4 pi)^(1/3), integrand constant
  const Grid g = Grid::radial(16, std::cbrt(3.0 / (4.0 * M_PI)), 0.5);
  const double vol = integrate(ScalarField(g, 1.0), g);
  const ScalingParams p = params_with(0.1, 2.0);
  const PrimitiveState s{ScalarField(g, 1.0), VectorField(g, Staggering::cell), ScalarField(g, 1.0), 0.0};
  const double e = rel_energy(s, ScalarField(g, 1.2), VectorField(g, Staggering::cell), p, g);
  CHECK(e / vol == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("agrees with an independent quadrature") {
  const double R = 8.0, eps = 0.3, gamma = 5.0 / 3.0;
  auto rho = [](double r) { return 1.0 + 0.4 * std::exp(-r * r); };
  auto theta = [](double r) { return 1.0 + 0.05 * std::exp(-0.5 * r * r); };
  auto u = [](double r) { return 0.3 * r * std::exp(-r * r); };
  auto rr = [](double r) { return 1.0 + 0.2 * std::exp(-(r - 1) * (r - 1)); };
  auto U = [](double r) { return 0.1 * std::exp(-r * r / 4); };
  auto integrand = [&](double r) {
    const double z = rho(r) * theta(r), w = rr(r);
    const double bracket = pressure_potential_bracket(z, w, gamma);
    return 4.0 * M_PI * r * r * (0.5 * rho(r) * std::pow(u(r) - U(r), 2) + bracket / (eps * eps));
  };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 15, 1e-14);

  const Grid g = Grid::radial(8192, R, 6.0);
  const ScalarField rf = ScalarField::from_radius(g, rho);
  VectorField m = cell_vector(g, u);
  m[0] *= rf;
  const PrimitiveState s{rf, m, rf * ScalarField::from_radius(g, theta), 0.0};
  const double got = rel_energy(s, ScalarField::from_radius(g, rr), cell_vector(g, U), params_with(eps), g);
  CHECK(std::abs(got - oracle) / oracle < 1e-6);
}

TEST_CASE("domain and sign") {
  const Grid g = Grid::radial(64, 8.0, 6.0);
  const ScalingParams p = params_with(0.2);
  const PrimitiveState s{ScalarField(g, 1.0), VectorField(g, Staggering::cell), ScalarField(g, 1.0), 0.0};
  ScalarField r(g, 1.0);
  r[5] = 0.0;
  CHECK_THROWS_AS(rel_energy(s, r, VectorField(g, Staggering::cell), p, g), DomainError);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 3.0), v(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    PrimitiveState x{ScalarField(g), VectorField(g, Staggering::cell), ScalarField(g), 0.0};
    ScalarField rr(g);
    VectorField U(g, Staggering::cell);
    for (std::size_t i = 0; i < g.size(); ++i) {
      x.rho[i] = u(rng);
      x.q[i] = u(rng);
      x.mom[0][i] = v(rng);
      rr[i] = u(rng);
      U[0][i] = v(rng);
    }
    CHECK(rel_energy(x, rr, U, p, g) >= 0.0);
  }
}

TEST_CASE("convexity bounds on the plateau") {
  const Grid g = Grid::radial(256, 8.0, 6.0);
  const double gamma = 5.0 / 3.0, eps = 0.2;
  const ScalingParams p = params_with(eps, gamma);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const EssResCutoff cut = EssResCutoff::for_profile(prof);
  // H'' = gamma Z^(gamma - 2) is decreasing for gamma < 2
  const double c1 = 0.5 * pressure_potential_d2(cut.hi, gamma);
  const double c2 = 0.5 * pressure_potential_d2(cut.lo, gamma);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> y(cut.lo, cut.hi);
  for (int trial = 0; trial < 20; ++trial) {
    PrimitiveState s{ScalarField(g, 1.0), VectorField(g, Staggering::cell), ScalarField(g), 0.0};
    ScalarField r(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      s.q[i] = y(rng);
      r[i] = y(rng);
    }
    const double e = rel_energy(s, r, VectorField(g, Staggering::cell), p, g);
    const double l2 = std::pow(lp_norm((1.0 / eps) * (s.q - r), 2.0, g), 2);
    CHECK(e >= c1 * l2 * (1 - 1e-12));
    CHECK(e <= c2 * l2 * (1 + 1e-12));
  }
}

TEST_CASE("uniform bounds vanish on the static state") {
  const Grid g = Grid::radial(256, 16.0, 10.0);
  const ScalingParams p = params_with(0.2);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const DataSpec none{{0.0, 1.0, "gaussian"}, {0.0, 1.0, "gaussian"}, {0.0, 1.0, "gaussian"}};
  const auto traj = trajectory(none, p, g, prof, 4);
  const UniformBounds ub = uniform_bounds_report(traj, prof, p, g);
  for (const BoundMeasure& b : ub.all()) {
    INFO(b.name);
    CHECK(std::abs(b.constant) < 1e-10);
  }
  CHECK(residual_pressure_integral(traj, prof, p.gamma, 5.0, 0.5, g) == 0.0);
}

TEST_CASE("residual pressure") {
  const Grid g = Grid::radial(256, 16.0, 10.0);
  const ScalingParams p = params_with(0.2);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const auto traj = trajectory(mild_data(), p, g, prof, 4);

  SUBCASE("mild data never reach the residual set") {
    CHECK(residual_pressure_integral(traj, prof, p.gamma, 5.0, 0.5, g) == 0.0);
  }
  SUBCASE("exponent range") {
    CHECK(0.5 < p.gamma / 3.0);
    CHECK_NOTHROW(residual_pressure_integral(traj, prof, p.gamma, 5.0, 0.5, g));
    CHECK_THROWS_AS(residual_pressure_integral(traj, prof, p.gamma, 5.0, 0.0, g), DomainError);
    CHECK_THROWS_AS(residual_pressure_integral(traj, prof, p.gamma, 5.0, p.gamma / 3.0, g), DomainError);
  }
}

TEST_CASE("fit_log_slope") {
  const std::vector<double> eps{0.4, 0.2, 0.1};
  std::vector<double> v;
  for (double e : eps) v.push_back(3.0 * std::pow(e, 2.5));
  CHECK(fit_log_slope(eps, v) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(std::isinf(fit_log_slope(eps, {1.0, 0.0, 0.0})));
  CHECK(std::isnan(fit_log_slope(eps, {0.0, 0.0, 0.0})));
  CHECK(std::isnan(fit_log_slope(eps, {0.0, 1.0, 0.5})));
}

TEST_CASE("uniform-bound constants across an eps sweep") {
  const Grid g = Grid::radial(512, 16.0, 10.0);
  const std::vector<double> eps{0.4, 0.2, 0.1};

  SUBCASE("temperature constant with mild data") {
    std::vector<double> c;
    for (double e : eps) {
      const ScalingParams p = params_with(e);
      const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
      c.push_back(uniform_bounds_report(trajectory(mild_data(), p, g, prof, 20), prof, p, g).temperature.constant);
    }
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    CHECK(*lo > 0.0);
    CHECK(*hi / *lo <= 2.0);
  }

  SUBCASE("residual measure with strong data") {
    DataSpec strong = mild_data();
    strong.rho1.amplitude = 25.0;
    std::vector<double> measure;
    for (double e : {0.2, 0.1}) {
      ScalingParams p = params_with(e);
      p.lambda = 0.5;
      const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
      measure.push_back(uniform_bounds_report(trajectory(strong, p, g, prof, 20), prof, p, g).residual_measure);
    }
    REQUIRE(measure[1] > 0.0);
    CHECK(measure[0] / measure[1] >= 4.0);
    const double scaled0 = measure[0] / (0.2 * 0.2), scaled1 = measure[1] / (0.1 * 0.1);
    CHECK(std::max(scaled0, scaled1) / std::min(scaled0, scaled1) <= 2.0);
  }
}

TEST_CASE("relative energy inequality audit") {
  const Grid g = Grid::radial(512, 16.0, 10.0);
  const ScalingParams p = params_with(0.2);
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const AcousticOperator A(prof, g);
  const auto times = sample_mesh(1.0, 40);
  AcousticOptions aopt;
  aopt.sample_times = times;

  SUBCASE("static everything") {
    const DataSpec none{{0.0, 1.0, "gaussian"}, {0.0, 1.0, "gaussian"}, {0.0, 1.0, "gaussian"}};
    const PrimitiveState s0 = init_ill_prepared(none.build(g), prof, p, g);
    const PrimitiveRun run = run_primitive(s0, prof, p, g, times);
    const ScalarField zero(g, 0.0);
    const AcousticTrajectory ac = evolve_acoustic(A, {zero, zero, 0.0}, p, aopt);
    const ReiReport rep = rei_audit(run.states, ac.states, {}, A, prof, p, g, 0.0);
    for (const ReiSample& smp : rep.samples) {
      CHECK(std::abs(smp.lhs) < 1e-10);
      CHECK(std::abs(smp.rhs) < 1e-10);
    }
  }

  SUBCASE("acoustic-only data") {
    const DataSpec acoustic{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {0.0, 1.5, "gaussian"}};
    const IllPreparedData data = acoustic.build(g);
    const PrimitiveState s0 = init_ill_prepared(data, prof, p, g);
    const PrimitiveRun run = run_primitive(s0, prof, p, g, times);
    const AcousticTrajectory ac =
        evolve_acoustic(A, regularize_data(A, data.rho1, project(data.u0, prof, g).second, 0.05), p, aopt);
    const double dissipated = PrimitiveSystem(prof, p, g).energy(s0) - run.samples.back().energy;

    const ReiReport ansatz = rei_audit(run.states, ac.states, {}, A, prof, p, g, dissipated);
    CHECK(ansatz.holds);
    for (const ReiSample& smp : ansatz.samples) CHECK(smp.defect <= ansatz.tolerance);
    CHECK(ansatz.samples.front().rel_energy >= 0.0);

    const ReiReport perturbed = rei_audit(run.states, ac.states, {}, A, prof, p, g, dissipated, 1.1);
    CHECK(perturbed.max_defect > ansatz.max_defect);

    SUBCASE("mismatched meshes") {
      std::vector<AcousticState> shifted = ac.states;
      shifted[3].t += 1e-3;
      CHECK_THROWS_AS(rei_audit(run.states, shifted, {}, A, prof, p, g, dissipated), AlignmentError);
    }
  }
}
