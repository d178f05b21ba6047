#include "lowmach/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace lowmach::kernels {

void PrimitiveWorkspace::resize(std::size_t n) {
  for (auto* v : {&mass, &heat, &momentum, &pressure, &divergence}) v->assign(n + 1, 0.0);
}

namespace {

inline double laplacian_radial(const Grid& g, std::span<const double> phi,
                               std::span<const double> c, std::size_t i) {
  const std::size_t n = phi.size();
  const double h = g.h();
  const double up = i + 1 < n ? phi[i + 1] : 0.0;  // Dirichlet decay value at r_max
  double flux = g.face_area(i) * c[i] * (up - phi[i]) / g.face_distance(i);
  if (i > 0) flux -= g.face_area(i - 1) * c[i - 1] * (phi[i] - phi[i - 1]) / h;
  return flux / g.volume(i);
}

inline double laplacian_box(const Grid& g, std::span<const double> phi, const FaceCoefficients& c,
                            int i, int j, int k) {
  const int n = g.n();
  const double h2 = g.h() * g.h();
  const std::size_t me = g.index(i, j, k);
  const int idx[3] = {i, j, k};
  double s = 0.0;
  for (int d = 0; d < 3; ++d) {
    int hi[3] = {i, j, k}, lo[3] = {i, j, k};
    hi[d] += 1;
    lo[d] -= 1;
    if (idx[d] + 1 < n) {
      const std::size_t nb = g.index(hi[0], hi[1], hi[2]);
      s += c[d][me] * (phi[nb] - phi[me]);
    }
    if (idx[d] > 0) {
      const std::size_t nb = g.index(lo[0], lo[1], lo[2]);
      s -= c[d][nb] * (phi[me] - phi[nb]);
    }
  }
  return s / h2;
}

struct CellState {
  double rho, mom, q, rho0, u, theta, p, speed;
};

inline CellState cell_state(const PrimitiveRhsInput& in, std::size_t i, bool mirror) {
  CellState s{};
  s.rho = in.rho[i];
  s.mom = mirror ? -in.mom[i] : in.mom[i];
  s.q = in.q[i];
  s.rho0 = in.rho0[i];
  const bool vacuum = s.rho < 1e-10;
  s.u = vacuum ? 0.0 : s.mom / s.rho;
  s.theta = vacuum ? 1.0 : s.q / std::max(s.rho, 1e-12);
  const double qq = std::max(s.q, 0.0);
  s.p = std::pow(qq, in.gamma);
  s.speed = std::abs(s.u) + std::sqrt(in.gamma * std::pow(qq, in.gamma - 1.0) *
                                      std::max(s.theta, 0.0) * in.inv_eps2);
  return s;
}

// Monotonized central limiter.
inline double mc_slope(double dl, double dr) {
  if (dl * dr <= 0.0) return 0.0;
  const double s = dl > 0.0 ? 1.0 : -1.0;
  return s * std::min({2.0 * std::abs(dl), 2.0 * std::abs(dr), 0.5 * std::abs(dl + dr)});
}

// Limited slopes of rho - rho0, m and Theta in cell i, with the wall and outer
// ghosts mirrored like the face states.
struct Slopes {
  double drho, dmom, dtheta;
};

inline Slopes cell_slopes(const PrimitiveRhsInput& in, std::size_t i) {
  const std::size_t n = in.n;
  const CellState C = cell_state(in, i, false);
  const CellState L = i == 0 ? cell_state(in, 0, true) : cell_state(in, i - 1, false);
  const CellState R = i + 1 == n ? cell_state(in, n - 1, true) : cell_state(in, i + 1, false);
  return {mc_slope((C.rho - C.rho0) - (L.rho - L.rho0), (R.rho - R.rho0) - (C.rho - C.rho0)),
          mc_slope(C.mom - L.mom, R.mom - C.mom), mc_slope(C.theta - L.theta, R.theta - C.theta)};
}

// Face f sits between cells f-1 and f; the boundary faces see mirror images.
inline void primitive_face(const PrimitiveRhsInput& in, PrimitiveWorkspace& ws, std::size_t f) {
  const std::size_t n = in.n;
  const CellState L = f == 0 ? cell_state(in, 0, true) : cell_state(in, f - 1, false);
  const CellState R = f == n ? cell_state(in, n - 1, true) : cell_state(in, f, false);
  const double a = std::max(L.speed, R.speed);
  double jump_rho = (R.rho - R.rho0) - (L.rho - L.rho0);
  double jump_mom = R.mom - L.mom;
  double theta_l = L.theta, theta_r = R.theta;
  if (in.muscl) {
    // mirrored slopes flip sign for the even fields and keep it for m
    Slopes sl = cell_slopes(in, f == 0 ? 0 : f - 1);
    Slopes sr = cell_slopes(in, f == n ? n - 1 : f);
    if (f == 0) sl = {-sr.drho, sr.dmom, -sr.dtheta};
    if (f == n) sr = {-sl.drho, sl.dmom, -sl.dtheta};
    jump_rho -= 0.5 * (sr.drho + sl.drho);
    jump_mom -= 0.5 * (sr.dmom + sl.dmom);
    theta_l += 0.5 * sl.dtheta;
    theta_r -= 0.5 * sr.dtheta;
  }
  const double mass = 0.5 * (L.mom + R.mom) - 0.5 * a * jump_rho;
  ws.mass[f] = mass;
  ws.heat[f] = mass * (mass >= 0.0 ? theta_l : theta_r);
  ws.momentum[f] = 0.5 * (L.mom * L.u + R.mom * R.u) - 0.5 * a * jump_mom;
  ws.pressure[f] = 0.5 * (L.p + R.p);
  // div u on the face, spherical metric
  const double h = in.h;
  if (f == 0) {
    ws.divergence[f] = 6.0 * R.u / h;
  } else {
    const double rf = static_cast<double>(f) * h;
    const double rl = in.center[f - 1];
    const double rr = f == n ? rf + 0.5 * h : in.center[f];
    ws.divergence[f] = (rr * rr * R.u - rl * rl * L.u) / (rf * rf * h);
  }
}

inline void primitive_cell(const PrimitiveRhsInput& in, const PrimitiveWorkspace& ws,
                           const PrimitiveRhsOutput& out, std::size_t i) {
  const double a_hi = in.area[i];
  const double a_lo = i == 0 ? 0.0 : in.area[i - 1];
  const double inv_v = 1.0 / in.volume[i];
  out.drho[i] = -(a_hi * ws.mass[i + 1] - a_lo * ws.mass[i]) * inv_v;
  out.dq[i] = -(a_hi * ws.heat[i + 1] - a_lo * ws.heat[i]) * inv_v;
  const double grad_p = (ws.pressure[i + 1] - ws.pressure[i]) / in.h;
  const double gravity = (in.rho[i] / in.rho0[i]) * in.grad_p0[i];
  out.dmom[i] = -(a_hi * ws.momentum[i + 1] - a_lo * ws.momentum[i]) * inv_v +
                in.inv_eps2 * (gravity - grad_p) +
                in.viscosity * (ws.divergence[i + 1] - ws.divergence[i]) / in.h;
}

inline double dot_strided(std::span<const double> a, std::size_t offset,
                          std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += a[offset + k] * x[k];
  return s;
}

}  // namespace

namespace serial {

void weighted_laplacian(const Grid& g, std::span<const double> phi, const FaceCoefficients& coef,
                        std::span<double> out) {
  if (g.is_radial()) {
    for (std::size_t i = 0; i < phi.size(); ++i) out[i] = laplacian_radial(g, phi, coef[0], i);
    return;
  }
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[g.index(i, j, k)] = laplacian_box(g, phi, coef, i, j, k);
}

void synthesize(std::span<const double> basis, std::size_t cols, std::span<const double> coeffs,
                std::span<const std::size_t> rows, std::span<double> out) {
  for (std::size_t r : rows) out[r] = dot_strided(basis, r * cols, coeffs);
}

void analyze(std::span<const double> basis, std::size_t rows, std::span<const double> x,
             std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = dot_strided(basis, k * rows, x);
}

void primitive_rhs(const PrimitiveRhsInput& in, PrimitiveWorkspace& ws,
                   const PrimitiveRhsOutput& out) {
  ws.resize(in.n);
  for (std::size_t f = 0; f <= in.n; ++f) primitive_face(in, ws, f);
  for (std::size_t i = 0; i < in.n; ++i) primitive_cell(in, ws, out, i);
}

}  // namespace serial

namespace omp {

void weighted_laplacian(const Grid& g, std::span<const double> phi, const FaceCoefficients& coef,
                        std::span<double> out) {
  if (g.is_radial()) {
    const auto n = static_cast<std::ptrdiff_t>(phi.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = laplacian_radial(g, phi, coef[0], static_cast<std::size_t>(i));
    return;
  }
  const int n = g.n();
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[g.index(i, j, k)] = laplacian_box(g, phi, coef, i, j, k);
}

void synthesize(std::span<const double> basis, std::size_t cols, std::span<const double> coeffs,
                std::span<const std::size_t> rows, std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    const std::size_t r = rows[t];
    out[r] = dot_strided(basis, r * cols, coeffs);
  }
}

void analyze(std::span<const double> basis, std::size_t rows, std::span<const double> x,
             std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < m; ++k)
    out[k] = dot_strided(basis, static_cast<std::size_t>(k) * rows, x);
}

void primitive_rhs(const PrimitiveRhsInput& in, PrimitiveWorkspace& ws,
                   const PrimitiveRhsOutput& out) {
  ws.resize(in.n);
  const auto faces = static_cast<std::ptrdiff_t>(in.n + 1);
  const auto cells = static_cast<std::ptrdiff_t>(in.n);
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t f = 0; f < faces; ++f) primitive_face(in, ws, static_cast<std::size_t>(f));
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < cells; ++i)
      primitive_cell(in, ws, out, static_cast<std::size_t>(i));
  }
}

}  // namespace omp

}  // namespace lowmach::kernels
