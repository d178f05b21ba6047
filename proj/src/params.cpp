#include "lowmach/params.hpp"

#include "lowmach/error.hpp"

namespace lowmach {

std::vector<std::string> ScalingParams::validate(bool warn_only) const {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(rho_bar > 0.0)) throw DomainError("rho_bar must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(lambda >= 0.0)) throw DomainError("bulk viscosity lambda must be non-negative");
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
  std::vector<std::string> violated;
  if (!(gamma > 1.5)) violated.push_back("gamma > 3/2");
  if (!(alpha > 0.0 && alpha < 4.0 / 3.0)) violated.push_back("0 < alpha < 4/3");
  if (!violated.empty() && !warn_only) {
    std::string msg = "scaling parameters violate";
    for (const auto& v : violated) msg += " [" + v + "]";
    throw DomainError(msg);
  }
  return violated;
}

}  // namespace lowmach
