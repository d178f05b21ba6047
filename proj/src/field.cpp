#include "lowmach/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lowmach/error.hpp"

namespace lowmach {

void require_aligned(const Grid& a, const Grid& b, std::string_view what) {
  if (!(a == b)) throw AlignmentError(std::string(what) + ": fields live on different grids");
}

void require_finite(const ScalarField& f, std::string_view what) {
  if (!f.all_finite()) throw Error(std::string(what) + ": non-finite entries");
}

void require_finite(const VectorField& f, std::string_view what) {
  if (!f.all_finite()) throw Error(std::string(what) + ": non-finite entries");
}

ScalarField::ScalarField(const Grid& g, double value) : grid_(g), values_(g.size(), value) {}

ScalarField::ScalarField(const Grid& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.size()) throw AlignmentError("field size does not match grid");
}

ScalarField ScalarField::from_radius(const Grid& g, const std::function<double(double)>& f) {
  ScalarField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.radius(i));
  return out;
}

ScalarField ScalarField::from_point(const Grid& g,
                                    const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  if (g.is_radial()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.center(i), 0.0, 0.0);
    return out;
  }
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[g.index(i, j, k)] = f(g.coord(i), g.coord(j), g.coord(k));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_aligned(grid_, o.grid_, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_aligned(grid_, o.grid_, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_aligned(grid_, o.grid_, "operator*=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (auto& v : values_) v *= a;
  return *this;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField map(const ScalarField& f, const std::function<double(double)>& op) {
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = op(f[i]);
  return out;
}

VectorField::VectorField(const Grid& g, Staggering s) : staggering_(s) {
  const int d = g.is_radial() ? 1 : 3;
  components_.assign(d, ScalarField(g));
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.staggering_ != staggering_) throw AlignmentError("vector fields differ in staggering");
  for (int d = 0; d < dim(); ++d) components_[d] += o.components_[d];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.staggering_ != staggering_) throw AlignmentError("vector fields differ in staggering");
  for (int d = 0; d < dim(); ++d) components_[d] -= o.components_[d];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  for (auto& c : components_) c *= a;
  return *this;
}

bool VectorField::all_finite() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

}  // namespace lowmach
