/// @file kernels.hpp
/// @brief Data-parallel inner loops.  Every kernel has a serial reference in
/// `kernels::serial` and an OpenMP version in `kernels::omp` with identical
/// per-element arithmetic, so the two agree bit for bit.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lowmach/grid.hpp"

namespace lowmach::kernels {

/// Face coefficients of a weighted Laplacian: one span per direction.
using FaceCoefficients = std::array<std::span<const double>, 3>;

/// Inputs of the radial finite-volume right-hand side of the primitive system.
struct PrimitiveRhsInput {
  std::size_t n;
  double h;
  double gamma;
  double inv_eps2;   ///< 1 / eps^2
  double viscosity;  ///< eps^alpha (4/3 + lambda)
  std::span<const double> rho, mom, q;
  std::span<const double> rho0;      ///< static density, reference for the dissipation
  std::span<const double> grad_p0;   ///< discrete d/dr of the static pressure
  std::span<const double> center;    ///< r_i
  std::span<const double> volume;    ///< 4 pi r_i^2 h
  std::span<const double> area;      ///< 4 pi r_{i+1/2}^2, upper faces
  bool muscl = false;  ///< limited linear reconstruction in the dissipative terms
};

struct PrimitiveRhsOutput {
  std::span<double> drho, dmom, dq;
};

/// Face fluxes (n + 1 faces, face f between cells f-1 and f).
struct PrimitiveWorkspace {
  std::vector<double> mass, heat, momentum, pressure, divergence;
  void resize(std::size_t n);
};

namespace serial {
void weighted_laplacian(const Grid& g, std::span<const double> phi, const FaceCoefficients& coef,
                        std::span<double> out);
/// out[i] = sum_k basis[i * cols + k] * coeffs[k] over the listed rows (row-major basis).
void synthesize(std::span<const double> basis, std::size_t cols, std::span<const double> coeffs,
                std::span<const std::size_t> rows, std::span<double> out);
/// out[k] = sum_i basis[k * rows + i] * x[i] (column-major basis, i.e. columns contiguous).
void analyze(std::span<const double> basis, std::size_t rows, std::span<const double> x,
             std::span<double> out);
void primitive_rhs(const PrimitiveRhsInput& in, PrimitiveWorkspace& ws, const PrimitiveRhsOutput& out);
}  // namespace serial

namespace omp {
void weighted_laplacian(const Grid& g, std::span<const double> phi, const FaceCoefficients& coef,
                        std::span<double> out);
void synthesize(std::span<const double> basis, std::size_t cols, std::span<const double> coeffs,
                std::span<const std::size_t> rows, std::span<double> out);
void analyze(std::span<const double> basis, std::size_t rows, std::span<const double> x,
             std::span<double> out);
void primitive_rhs(const PrimitiveRhsInput& in, PrimitiveWorkspace& ws, const PrimitiveRhsOutput& out);
}  // namespace omp

}  // namespace lowmach::kernels
