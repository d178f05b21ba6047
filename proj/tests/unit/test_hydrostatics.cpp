/// @file test_hydrostatics.cpp
/// @brief Potential, static profile, static residual and flatness.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lowmach/error.hpp"
#include "lowmach/profile.hpp"

using namespace lowmach;

namespace {

ScalingParams with_gamma(double gamma) {
  ScalingParams p;
  p.gamma = gamma;
  return p;
}

double residual_at(int n, const PotentialSpec& spec, double gamma) {
  const Grid g = Grid::radial(n, 16.0, 10.0);
  return static_residual(build_profile(spec, with_gamma(gamma), g), g);
}

}  // namespace

TEST_CASE("potential is positive with 1/r tails") {
  const PotentialSpec f{1.0, 1.0};
  for (double r = 0.0; r < 100.0; r += 0.37) {
    CHECK(f.value(r) > 0.0);
    if (r > 1.0) {
      CHECK(f.value(r) * r <= 1.0);
      CHECK(f.value(r) * r >= 1.0 / std::sqrt(2.0));
    }
  }
  // derivatives against central differences
  for (double r : {0.3, 1.0, 2.5, 7.0}) {
    const double d = 1e-5;
    CHECK(f.d1(r) == doctest::Approx((f.value(r + d) - f.value(r - d)) / (2 * d)).epsilon(1e-8));
    CHECK(f.d2(r) == doctest::Approx((f.d1(r + d) - f.d1(r - d)) / (2 * d)).epsilon(1e-7));
  }
}

TEST_CASE("enthalpy inverse") {
  for (double gamma : {1.4, 5.0 / 3.0, 2.0, 3.0})
    for (double rho : {0.1, 1.0, 2.7})
      CHECK(enthalpy_q_inverse(enthalpy_q(rho, gamma), gamma) == doctest::Approx(rho).epsilon(1e-13));
}

TEST_CASE("profile closed forms") {
  const Grid g = Grid::radial(64, 16.0, 10.0);

  SUBCASE("vacuum potential") {
    const StaticProfile prof = build_profile(PotentialSpec{0.0, 1.0}, ScalingParams{}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(prof.rho0[i] == 1.0);
  }
  SUBCASE("gamma = 2, F = 0.5") {
    // F(0) = amplitude / core
    const ProfilePoint pt = profile_at(PotentialSpec{0.5, 1.0}, 0.0, 2.0, 1.0);
    CHECK(pt.rho == doctest::Approx(1.25).epsilon(1e-14));
  }
  SUBCASE("gamma = 5/3, F = 2.5") {
    const ProfilePoint pt = profile_at(PotentialSpec{2.5, 1.0}, 0.0, 5.0 / 3.0, 1.0);
    CHECK(pt.rho == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
  }
  SUBCASE("pointwise identity") {
    const StaticProfile prof = build_profile(PotentialSpec{1.0, 1.0}, ScalingParams{}, g);
    const double gamma = prof.gamma;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double want = enthalpy_q_inverse(prof.potential_field[i] + enthalpy_q(1.0, gamma), gamma);
      CHECK(prof.rho0[i] == doctest::Approx(want).epsilon(1e-14));
      CHECK(prof.p_prime[i] == doctest::Approx(gamma * std::pow(prof.rho0[i], gamma - 1)).epsilon(1e-14));
    }
  }
  SUBCASE("unsupported exponent") {
    CHECK_THROWS_AS(build_profile(PotentialSpec{}, with_gamma(1.0), g), DomainError);
    CHECK_THROWS_AS(build_profile(PotentialSpec{}, with_gamma(0.5), g), DomainError);
    ScalingParams p;
    p.rho_bar = 0.0;
    CHECK_THROWS_AS(build_profile(PotentialSpec{}, p, g), DomainError);
  }
}

TEST_CASE("profile derivatives match differences") {
  const PotentialSpec spec{1.0, 1.0};
  for (double r : {0.5, 2.0, 6.0}) {
    const double d = 1e-5;
    const ProfilePoint c = profile_at(spec, r, 5.0 / 3.0, 1.0);
    const ProfilePoint lo = profile_at(spec, r - d, 5.0 / 3.0, 1.0);
    const ProfilePoint hi = profile_at(spec, r + d, 5.0 / 3.0, 1.0);
    CHECK(c.drho == doctest::Approx((hi.rho - lo.rho) / (2 * d)).epsilon(1e-7));
    CHECK(c.d2rho == doctest::Approx((hi.drho - lo.drho) / (2 * d)).epsilon(1e-6));
  }
}

TEST_CASE("profile monotone and bounded below by the far field") {
  const Grid g = Grid::radial(256, 16.0, 10.0);
  const StaticProfile prof = build_profile(PotentialSpec{1.0, 1.0}, ScalingParams{}, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(prof.rho0[i] >= 1.0);
    if (i > 0) CHECK(prof.rho0[i] < prof.rho0[i - 1]);
  }
  // far field: mean value bound F / Q'(rho0) for gamma < 2, decaying like 1/R
  const std::size_t last = g.size() - 1;
  const double excess = prof.rho0[last] - 1.0;
  const double q_prime = prof.gamma * std::pow(prof.rho0[last], prof.gamma - 2.0);
  CHECK(excess <= prof.potential_field[last] / q_prime);
  CHECK(excess * g.center(last) < 1.0);

  SUBCASE("larger potential gives larger density") {
    const StaticProfile big = build_profile(PotentialSpec{2.0, 1.0}, ScalingParams{}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(big.rho0[i] >= prof.rho0[i]);
  }
}

TEST_CASE("static residual") {
  SUBCASE("vacuum") { CHECK(residual_at(128, PotentialSpec{0.0, 1.0}, 5.0 / 3.0) == 0.0); }

  SUBCASE("default profile refines at second order") {
    const PotentialSpec spec{1.0, 1.0};
    const double r512 = residual_at(512, spec, 5.0 / 3.0);
    const double r1024 = residual_at(1024, spec, 5.0 / 3.0);
    CHECK(r512 < 1e-4);
    CHECK(std::log2(r512 / r1024) == doctest::Approx(2.0).epsilon(0.05));
  }

  SUBCASE("gamma = 2 linear profile") {
    const PotentialSpec spec{1.0, 1.0};
    const double a = residual_at(256, spec, 2.0), b = residual_at(512, spec, 2.0),
                 c = residual_at(1024, spec, 2.0);
    CHECK(std::log2(a / b) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(b / c) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("flatness") {
  const PotentialSpec spec{1.0, 1.0};
  const FlatnessReport rep = flatness_report(spec, ScalingParams{}, Grid::radial(512, 16.0, 10.0));
  CHECK(std::isfinite(rep.coefficient_first));
  CHECK(std::isfinite(rep.coefficient_second));
  CHECK(rep.potential_gradient <= 1.01);
  CHECK(rep.potential_gradient > 0.9);

  SUBCASE("tail saturation") {
    const FlatnessReport big = flatness_report(spec, ScalingParams{}, Grid::radial(1024, 32.0, 20.0));
    CHECK(big.potential_gradient == doctest::Approx(rep.potential_gradient).epsilon(0.01));
    CHECK(big.potential_hessian == doctest::Approx(rep.potential_hessian).epsilon(0.01));
    CHECK(big.coefficient_first == doctest::Approx(rep.coefficient_first).epsilon(0.01));
    CHECK(big.coefficient_second == doctest::Approx(rep.coefficient_second).epsilon(0.01));
  }

  SUBCASE("vacuum") {
    const FlatnessReport zero = flatness_report(PotentialSpec{0.0, 1.0}, ScalingParams{},
                                                Grid::radial(128, 16.0, 10.0));
    CHECK(zero.potential_gradient == 0.0);
    CHECK(zero.potential_hessian == 0.0);
    CHECK(zero.coefficient_first == 0.0);
    CHECK(zero.coefficient_second == 0.0);
  }
}

TEST_CASE("profile csv") {
  const Grid g = Grid::radial(8, 4.0, 3.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);
  std::ostringstream os;
  write_profile_csv(os, prof);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  std::getline(is, line);
  CHECK(line == "r,F,rho0,p_prime");
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 8);
}
