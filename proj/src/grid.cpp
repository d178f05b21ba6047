#include "lowmach/grid.hpp"

#include "lowmach/error.hpp"

namespace lowmach {

std::string to_string(Geometry g) { return g == Geometry::radial ? "radial" : "cartesian"; }

Geometry geometry_from_string(const std::string& s) {
  if (s == "radial") return Geometry::radial;
  if (s == "cartesian") return Geometry::cartesian;
  throw ValidationError("unknown geometry '" + s + "' (expected radial or cartesian)");
}

Grid::Grid(Geometry g, int n, double r_max, double r_sponge)
    : geometry_(g), n_(n), r_max_(r_max), r_sponge_(r_sponge) {
  if (n < 2) throw DomainError("grid needs at least 2 cells per axis");
  if (!(r_max > 0.0)) throw DomainError("grid extent must be positive");
  if (!(r_sponge < r_max)) throw DomainError("sponge radius must lie inside the domain");
  if (g == Geometry::radial) {
    h_ = r_max / n;
    size_ = static_cast<std::size_t>(n);
  } else {
    h_ = 2.0 * r_max / n;
    size_ = static_cast<std::size_t>(n) * n * n;
  }
}

Grid Grid::radial(int n, double r_max, double r_sponge) {
  return Grid(Geometry::radial, n, r_max, r_sponge);
}

Grid Grid::cartesian(int n, double half_width, double r_sponge) {
  return Grid(Geometry::cartesian, n, half_width, r_sponge);
}

double Grid::volume(std::size_t cell) const {
  if (is_radial()) {
    const double r = center(cell);
    return 4.0 * std::numbers::pi * r * r * h_;
  }
  return h_ * h_ * h_;
}

double Grid::radius(std::size_t cell) const {
  if (is_radial()) return center(cell);
  const auto nn = static_cast<std::size_t>(n_);
  const int k = static_cast<int>(cell % nn);
  const int j = static_cast<int>((cell / nn) % nn);
  const int i = static_cast<int>(cell / (nn * nn));
  const double x = coord(i), y = coord(j), z = coord(k);
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace lowmach
