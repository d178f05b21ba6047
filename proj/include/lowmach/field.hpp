/// @file field.hpp
/// @brief Value-semantic scalar and vector fields aligned to a Grid.
#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "lowmach/grid.hpp"

namespace lowmach {

class ScalarField {
 public:
  explicit ScalarField(const Grid& g, double value = 0.0);
  ScalarField(const Grid& g, std::vector<double> values);

  /// Samples f(|x|) at cell centres.
  static ScalarField from_radius(const Grid& g, const std::function<double(double)>& f);
  /// Samples f(x, y, z) at cell centres (radial mode: f(r, 0, 0)).
  static ScalarField from_point(const Grid& g,
                                const std::function<double(double, double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double a);

  bool all_finite() const;
  double max_abs() const;
  double min() const;
  double max() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Pointwise map.
ScalarField map(const ScalarField& f, const std::function<double(double)>& op);

/// Where vector components live.  Face data: component d of cell c is the value
/// on the upper face of c in direction d.
enum class Staggering { cell, face };

/// Radial grids carry a single (radial) component, cartesian grids three.
class VectorField {
 public:
  VectorField(const Grid& g, Staggering s);

  const Grid& grid() const { return components_.front().grid(); }
  Staggering staggering() const { return staggering_; }
  int dim() const { return static_cast<int>(components_.size()); }
  ScalarField& operator[](int d) { return components_[d]; }
  const ScalarField& operator[](int d) const { return components_[d]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  bool all_finite() const;
  double max_abs() const;

 private:
  Staggering staggering_;
  std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Throws AlignmentError unless both objects live on the same grid.
void require_aligned(const Grid& a, const Grid& b, std::string_view what);
/// Throws Error naming `what` if any entry is NaN/Inf.
void require_finite(const ScalarField& f, std::string_view what);
void require_finite(const VectorField& f, std::string_view what);

}  // namespace lowmach
