/// @file grid.hpp
/// @brief Uniform cell-centred grids: radially symmetric 3D or a cartesian box.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace lowmach {

enum class Geometry { radial, cartesian };

std::string to_string(Geometry g);
Geometry geometry_from_string(const std::string& s);

/// Radial mode: n cells on [0, r_max], centres r_i = (i + 1/2) h, h = r_max / n.
/// Cartesian mode: n^3 cells on [-r_max, r_max]^3, h = 2 r_max / n.
/// Cell i owns its upper face; face-staggered vector data use that convention.
class Grid {
 public:
  static Grid radial(int n, double r_max, double r_sponge);
  static Grid cartesian(int n, double half_width, double r_sponge);

  Geometry geometry() const { return geometry_; }
  bool is_radial() const { return geometry_ == Geometry::radial; }
  int n() const { return n_; }
  double r_max() const { return r_max_; }
  double r_sponge() const { return r_sponge_; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }

  // radial helpers
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h_; }
  /// Radius of the upper face of cell i.
  double upper_face(std::size_t i) const { return static_cast<double>(i + 1) * h_; }
  double face_area(std::size_t i) const {
    const double r = upper_face(i);
    return 4.0 * std::numbers::pi * r * r;
  }
  /// Distance between the centre of cell i and the next unknown across its upper
  /// face: h in the interior, h/2 at the outer radial boundary.
  double face_distance(std::size_t i) const {
    return (is_radial() && i + 1 == static_cast<std::size_t>(n_)) ? 0.5 * h_ : h_;
  }

  /// Quadrature weight: 4 pi r_i^2 h (radial) or h^3 (cartesian).
  double volume(std::size_t cell) const;

  // cartesian helpers
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  double coord(int i) const { return -r_max_ + (i + 0.5) * h_; }

  /// |x| of the cell centre in either geometry.
  double radius(std::size_t cell) const;

  bool operator==(const Grid& o) const {
    return geometry_ == o.geometry_ && n_ == o.n_ && r_max_ == o.r_max_ &&
           r_sponge_ == o.r_sponge_;
  }

 private:
  Grid(Geometry g, int n, double r_max, double r_sponge);

  Geometry geometry_;
  int n_;
  double r_max_;
  double r_sponge_;
  double h_;
  std::size_t size_;
};

}  // namespace lowmach
