/// @file harness.hpp
/// @brief Run configuration, the eps-sweep and its convergence report.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lowmach/grid.hpp"
#include "lowmach/primitive.hpp"
#include "lowmach/relative_energy.hpp"

namespace lowmach {

/// Every knob the command line tool understands.  Keys are "section.name".
struct Config {
  Geometry geometry = Geometry::radial;
  int n = 512;
  double r_max = 16.0;
  double r_sponge = 10.0;

  ScalingParams params;
  PotentialSpec potential;
  DataSpec data{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}};

  double cfl = 0.4;
  std::string reconstruction = "muscl";  ///< or "first_order"
  int samples = 40;
  unsigned seed = 1;
  double tolerance = 1e-10;

  double delta = 0.05;   ///< regularisation of the acoustic data
  double window = 0.2;   ///< frequency window of decay / Strichartz measurements
  std::string scheme = "spectral";
  double decay_radius = 2.0;
  int time_steps = 400;
  double p = 4.0;
  double q = 12.0;

  std::vector<double> sweep_eps{0.4, 0.2, 0.1};
  double beta = 0.5;
  double k_radius = 5.0;

  std::string output_dir = ".";

  Grid grid() const;
  /// Sample times k T / samples, k = 0..samples.
  std::vector<double> sample_times() const;
};

/// Known keys in file order.
const std::vector<std::string>& config_keys();

/// Sets one key; throws ValidationError on an unknown key or unparsable value.
void apply_setting(Config& c, const std::string& key, const std::string& value);
/// "key=value" form of apply_setting.
void apply_override(Config& c, const std::string& assignment);

/// Reads an INI-style file ("[section]" headers, "name = value", '#' or ';'
/// comments) on top of the defaults.
Config load_config(const std::string& path);
Config parse_config(std::istream& is);
void write_config(std::ostream& os, const Config& c);

std::vector<double> parse_list(const std::string& s);

struct SweepPlan {
  std::vector<double> eps;  ///< strictly decreasing
  DataSpec data;
  PotentialSpec potential;
  ScalingParams base;       ///< eps is overwritten per run
  Geometry geometry = Geometry::radial;
  int n = 512;
  double r_max = 16.0;
  double r_sponge = 10.0;
  std::vector<double> sample_times;  ///< must start at 0
  std::string output_dir = ".";
  double delta = 0.05;
  double beta = 0.5;
  double k_radius = 5.0;
  double cfl = 0.4;
  bool muscl = true;

  static SweepPlan from_config(const Config& c);
  /// Throws ValidationError.
  void validate() const;
};

struct SweepRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  double n1 = 0.0;      ///< sup ||[rho - rho0]_ess||_2 + ||[rho - rho0]_res||_gamma
  double n1_ess = 0.0;  ///< sup of the essential part alone
  double n2a = 0.0;     ///< sup ||Theta - 1||_2
  double n2b = 0.0;     ///< sup ||(Theta - 1)/eps^2 - T||_2 with T = theta2
  double n3 = 0.0;      ///< int_0^T ||sqrt(rho/rho0) u - V||^2_{L2(K)}
  UniformBounds bounds;
  double residual_pressure = 0.0;
  double energy0 = 0.0;
  double energy_violation = 0.0;
  double acoustic_energy = 0.0;
  long steps = 0;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  bool complete = false;
  double slope_n1 = 0.0, slope_n3 = 0.0, slope_n2a = 0.0, slope_residual = 0.0;
  bool n1_decreasing = false;
  bool n3_decreasing = false;
  double n2a_spread = 0.0;     ///< max/min of n2a / eps^2
  double n1_ess_spread = 0.0;  ///< max/min of n1_ess / eps
  std::vector<BoundMeasure> bound_spread;  ///< max/min of each implied constant

  /// Recomputes slopes, flags and spreads from the successful rows.
  void summarize();
  bool monotone() const { return complete && n1_decreasing && n3_decreasing; }
};

/// Runs the primitive system and the acoustic reference for every eps in parallel.
/// V = 0 and T = theta2 serve as the exact limit in radial geometry.  A failed run
/// leaves ok = false on its row and complete = false on the report.
ConvergenceReport sweep_epsilon(const SweepPlan& plan);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep);
void write_sweep_summary(std::ostream& os, const ConvergenceReport& rep);

}  // namespace lowmach
