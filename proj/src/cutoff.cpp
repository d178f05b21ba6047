#include "lowmach/cutoff.hpp"

#include <algorithm>

#include "lowmach/profile.hpp"

namespace lowmach {

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

EssResCutoff EssResCutoff::for_profile(const StaticProfile& prof) {
  const double lo = 0.5 * prof.rho0.min();
  const double hi = 2.0 * prof.rho0.max();
  return {lo, hi, 0.1 * lo};
}

double EssResCutoff::chi(double y) const {
  if (y >= lo && y <= hi) return 1.0;
  if (y < lo) return smoothstep((y - (lo - width)) / width);
  return 1.0 - smoothstep((y - hi) / width);
}

std::pair<ScalarField, ScalarField> ess_res_split(const ScalarField& f, const ScalarField& weight,
                                                  const EssResCutoff& cut) {
  require_aligned(f.grid(), weight.grid(), "ess_res_split");
  ScalarField ess(f.grid()), res(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double c = cut.chi(weight[i]);
    ess[i] = c * f[i];
    res[i] = c == 1.0 ? 0.0 : f[i] - ess[i];
  }
  return {std::move(ess), std::move(res)};
}

}  // namespace lowmach
