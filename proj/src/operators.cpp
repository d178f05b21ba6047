#include "lowmach/operators.hpp"

#include "lowmach/error.hpp"
#include "lowmach/kernels.hpp"

namespace lowmach {

namespace {

void require_faces(const VectorField& v, const char* what) {
  if (v.staggering() != Staggering::face) throw AlignmentError(std::string(what) + ": expected face data");
}

// Visits every cell of a cartesian box with its (i, j, k) index.
template <class F>
void for_box(const Grid& g, F&& f) {
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) f(i, j, k, g.index(i, j, k));
}

std::size_t stride(const Grid& g, int d) {
  const auto n = static_cast<std::size_t>(g.n());
  return d == 0 ? n * n : (d == 1 ? n : 1);
}

}  // namespace

VectorField face_coefficients(const ScalarField& coef) {
  const Grid& g = coef.grid();
  VectorField out(g, Staggering::face);
  if (g.is_radial()) {
    const std::size_t n = coef.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double a = coef[i];
      const double b = i + 1 < n ? coef[i + 1] : a;
      out[0][i] = 2.0 * a * b / (a + b);
    }
    return out;
  }
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d) {
      const double a = coef[c];
      const double b = idx[d] + 1 < g.n() ? coef[c + stride(g, d)] : a;
      out[d][c] = 2.0 * a * b / (a + b);
    }
  });
  return out;
}

VectorField face_gradient(const ScalarField& phi) {
  const Grid& g = phi.grid();
  VectorField out(g, Staggering::face);
  if (g.is_radial()) {
    const std::size_t n = phi.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double up = i + 1 < n ? phi[i + 1] : 0.0;
      out[0][i] = (up - phi[i]) / g.face_distance(i);
    }
    return out;
  }
  const double h = g.h();
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d)
      out[d][c] = idx[d] + 1 < g.n() ? (phi[c + stride(g, d)] - phi[c]) / h : 0.0;
  });
  return out;
}

ScalarField face_divergence(const VectorField& v) {
  require_faces(v, "face_divergence");
  const Grid& g = v.grid();
  ScalarField out(g);
  if (g.is_radial()) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      double flux = g.face_area(i) * v[0][i];
      if (i > 0) flux -= g.face_area(i - 1) * v[0][i - 1];
      out[i] = flux / g.volume(i);
    }
    return out;
  }
  const double h = g.h();
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    double s = 0.0;
    for (int d = 0; d < 3; ++d) {
      if (idx[d] + 1 < g.n()) s += v[d][c];
      if (idx[d] > 0) s -= v[d][c - stride(g, d)];
    }
    out[c] = s / h;
  });
  return out;
}

ScalarField weighted_laplacian(const ScalarField& phi, const VectorField& face_coef) {
  require_faces(face_coef, "weighted_laplacian");
  require_aligned(phi.grid(), face_coef.grid(), "weighted_laplacian");
  const Grid& g = phi.grid();
  ScalarField out(g);
  kernels::FaceCoefficients c{};
  for (int d = 0; d < face_coef.dim(); ++d) c[d] = face_coef[d].values();
  kernels::omp::weighted_laplacian(g, phi.values(), c, out.values());
  return out;
}

double face_inner(const VectorField& a, const VectorField& b) {
  require_faces(a, "face_inner");
  require_faces(b, "face_inner");
  require_aligned(a.grid(), b.grid(), "face_inner");
  const Grid& g = a.grid();
  double s = 0.0;
  if (g.is_radial()) {
    for (std::size_t i = 0; i < g.size(); ++i)
      s += g.face_area(i) * g.face_distance(i) * a[0][i] * b[0][i];
    return s;
  }
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d)
      if (idx[d] + 1 < g.n()) s += a[d][c] * b[d][c];
  });
  return s * g.volume(0);
}

VectorField to_faces(const VectorField& cell) {
  if (cell.staggering() != Staggering::cell) throw AlignmentError("to_faces: expected cell data");
  const Grid& g = cell.grid();
  VectorField out(g, Staggering::face);
  if (g.is_radial()) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
      out[0][i] = i + 1 < n ? 0.5 * (cell[0][i] + cell[0][i + 1]) : cell[0][i];
    return out;
  }
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d)
      out[d][c] = idx[d] + 1 < g.n() ? 0.5 * (cell[d][c] + cell[d][c + stride(g, d)]) : 0.0;
  });
  return out;
}

VectorField to_cells(const VectorField& face) {
  require_faces(face, "to_cells");
  const Grid& g = face.grid();
  VectorField out(g, Staggering::cell);
  if (g.is_radial()) {
    for (std::size_t i = 0; i < g.size(); ++i)
      out[0][i] = 0.5 * (face[0][i] + (i > 0 ? face[0][i - 1] : 0.0));
    return out;
  }
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d) {
      const double hi = idx[d] + 1 < g.n() ? face[d][c] : 0.0;
      const double lo = idx[d] > 0 ? face[d][c - stride(g, d)] : 0.0;
      out[d][c] = 0.5 * (hi + lo);
    }
  });
  return out;
}

void clear_wall_faces(VectorField& face) {
  require_faces(face, "clear_wall_faces");
  const Grid& g = face.grid();
  if (g.is_radial()) return;
  for_box(g, [&](int i, int j, int k, std::size_t c) {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < 3; ++d)
      if (idx[d] + 1 == g.n()) face[d][c] = 0.0;
  });
}

}  // namespace lowmach
