/// @file test_helmholtz.cpp
/// @brief Weighted Poisson solver and the weighted Helmholtz projection.

#include <doctest.h>

#include <cmath>
#include <random>

#include "lowmach/error.hpp"
#include "lowmach/helmholtz.hpp"
#include "lowmach/operators.hpp"
#include "lowmach/profile.hpp"
#include "lowmach/quadrature.hpp"

using namespace lowmach;

namespace {

VectorField random_faces(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField v(g, Staggering::face);
  for (int d = 0; d < v.dim(); ++d)
    for (std::size_t i = 0; i < g.size(); ++i) v[d][i] = u(rng);
  clear_wall_faces(v);
  return v;
}

ScalarField random_cells(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = u(rng);
  return f;
}

double face_norm(const VectorField& v) { return std::sqrt(face_inner(v, v)); }

// Phi* = exp(-r^2) - exp(-R^2), vanishing on the outer sphere.
double manufactured(double r, double R) { return std::exp(-r * r) - std::exp(-R * R); }
// Radial Laplacian of exp(-r^2).
double manufactured_laplacian(double r) { return (4.0 * r * r - 6.0) * std::exp(-r * r); }

// Discretely divergence-free flux from a stream function on xy-edges, divided by
// the face coefficients so that div(coef v) vanishes exactly.
VectorField stream_field(const Grid& g, const VectorField& fc) {
  const int n = g.n();
  const double h = g.h();
  auto psi = [&](int a, int b, int k) {
    return std::sin(M_PI * a / n) * std::sin(2.0 * M_PI * b / n) * (1.0 + 0.3 * std::cos(k));
  };
  VectorField v(g, Staggering::face);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t c = g.index(i, j, k);
        v[0][c] = (psi(i + 1, j + 1, k) - psi(i + 1, j, k)) / h / fc[0][c];
        v[1][c] = -(psi(i + 1, j + 1, k) - psi(i, j + 1, k)) / h / fc[1][c];
      }
  clear_wall_faces(v);
  return v;
}

}  // namespace

TEST_CASE("zero right-hand side") {
  const Grid g = Grid::radial(64, 6.0, 4.0);
  const ScalarField phi = solve_weighted_poisson({ScalarField(g, 1.0), ScalarField(g, 0.0)}, g);
  CHECK(phi.max_abs() == 0.0);
}

TEST_CASE("residual meets the tolerance") {
  const Grid g = Grid::radial(256, 6.0, 4.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);
  const ScalarField rhs = ScalarField::from_radius(g, [](double r) { return std::exp(-r * r) * (1 - r); });
  const PoissonResult res = solve_weighted_poisson_detailed({prof.rho0, rhs, 1e-10, 0});
  const ScalarField lphi = weighted_laplacian(res.phi, face_coefficients(prof.rho0));
  CHECK(lp_norm(lphi - rhs, 2.0, g) <= 1e-10 * lp_norm(rhs, 2.0, g) * 1.0001);
  CHECK(res.residual <= 1e-10);
}

TEST_CASE("manufactured recovery, discrete right-hand side") {
  const Grid g = Grid::radial(512, 6.0, 4.0);
  const double R = g.r_max();
  const ScalarField exact = ScalarField::from_radius(g, [&](double r) { return manufactured(r, R); });

  SUBCASE("unit coefficient") {
    const ScalarField coef(g, 1.0);
    const ScalarField rhs = weighted_laplacian(exact, face_coefficients(coef));
    const ScalarField phi = solve_weighted_poisson({coef, rhs}, g);
    CHECK(lp_norm(phi - exact, 2.0, g) < 1e-6);
  }
  SUBCASE("profile coefficient") {
    const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);
    const ScalarField rhs = weighted_laplacian(exact, face_coefficients(prof.rho0));
    const ScalarField phi = solve_weighted_poisson({prof.rho0, rhs}, g);
    CHECK(lp_norm(phi - exact, 2.0, g) < 1e-6);
  }
}

TEST_CASE("manufactured recovery, continuous right-hand side converges at second order") {
  std::vector<double> err;
  for (int n : {128, 256, 512}) {
    const Grid g = Grid::radial(n, 6.0, 4.0);
    const double R = g.r_max();
    const ScalarField exact = ScalarField::from_radius(g, [&](double r) { return manufactured(r, R); });
    const ScalarField rhs = ScalarField::from_radius(g, manufactured_laplacian);
    const ScalarField phi = solve_weighted_poisson({ScalarField(g, 1.0), rhs, 1e-12, 0}, g);
    err.push_back(lp_norm(phi - exact, 2.0, g));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("non-convergence reports the residual") {
  const Grid g = Grid::radial(256, 6.0, 4.0);
  const ScalarField rhs = ScalarField::from_radius(g, manufactured_laplacian);
  try {
    solve_weighted_poisson_detailed({ScalarField(g, 1.0), rhs, 1e-14, 3});
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual() > 1e-14);
    CHECK(std::isfinite(e.residual()));
  }
  CHECK_THROWS_AS(solve_weighted_poisson({ScalarField(g, 0.0), rhs}, g), DomainError);
}

TEST_CASE("radial projection annihilates every field") {
  const Grid g = Grid::radial(256, 16.0, 10.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);
  std::mt19937_64 rng(5);

  SUBCASE("gradient of a decaying potential") {
    const ScalarField psi = ScalarField::from_radius(g, [](double r) { return std::exp(-r * r / 4); });
    const VectorField v = face_gradient(psi);
    const auto [hv, phi] = project(v, prof, g);
    CHECK(face_norm(hv) <= 1e-8 * face_norm(v));
  }
  SUBCASE("random fields") {
    for (int trial = 0; trial < 5; ++trial) {
      const VectorField v = random_faces(g, rng);
      const auto [hv, phi] = project(v, prof, g);
      CHECK(face_norm(hv) <= 1e-6 * face_norm(v));
    }
  }
}

TEST_CASE("cartesian projection") {
  const Grid g = Grid::cartesian(12, 4.0, 3.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, g);
  const VectorField fc = face_coefficients(prof.rho0);
  const double tol = 1e-10;
  std::mt19937_64 rng(17);

  SUBCASE("weighted divergence removed") {
    const VectorField v = random_faces(g, rng);
    const auto [hv, phi] = project(v, prof, g, tol);
    CHECK(weighted_divergence_norm(hv, prof.rho0) <= 10 * tol * weighted_divergence_norm(v, prof.rho0));
  }

  SUBCASE("stream-function field is a fixed point") {
    const VectorField v = stream_field(g, fc);
    CHECK(weighted_divergence_norm(v, prof.rho0) < 1e-12 * face_norm(v));
    const auto [hv, phi] = project(v, prof, g, tol);
    CHECK(face_norm(hv - v) <= 10 * tol * face_norm(v));
  }

  SUBCASE("weighted orthogonality against random potentials") {
    const VectorField v = random_faces(g, rng);
    const auto [hv, phi] = project(v, prof, g, tol);
    VectorField flux = hv;
    for (int d = 0; d < 3; ++d) flux[d] *= fc[d];
    for (int trial = 0; trial < 5; ++trial) {
      const VectorField grad = face_gradient(random_cells(g, rng));
      CHECK(std::abs(face_inner(flux, grad)) < 1e-8 * face_norm(flux) * face_norm(grad));
    }
  }

  SUBCASE("idempotent on 20 random fields") {
    for (int trial = 0; trial < 20; ++trial) {
      const VectorField v = random_faces(g, rng);
      const VectorField h1 = project(v, prof, g, tol).first;
      const VectorField h2 = project(h1, prof, g, tol).first;
      CHECK(face_norm(h2 - h1) <= 10 * tol * face_norm(v));
    }
  }

  SUBCASE("linear") {
    const VectorField v = random_faces(g, rng), w = random_faces(g, rng);
    const VectorField lhs = project(2.0 * v + (-3.0) * w, prof, g, tol).first;
    const VectorField rhs = 2.0 * project(v, prof, g, tol).first + (-3.0) * project(w, prof, g, tol).first;
    CHECK(face_norm(lhs - rhs) <= 10 * tol * (2.0 * face_norm(v) + 3.0 * face_norm(w)));
  }
}

TEST_CASE("misaligned grids") {
  const Grid a = Grid::radial(32, 6.0, 4.0), b = Grid::radial(64, 6.0, 4.0);
  const StaticProfile prof = build_profile(PotentialSpec{}, ScalingParams{}, a);
  CHECK_THROWS_AS(project(VectorField(b, Staggering::face), prof, b), AlignmentError);
  CHECK_THROWS_AS(solve_weighted_poisson({ScalarField(a, 1.0), ScalarField(b, 1.0)}, a), AlignmentError);
}
