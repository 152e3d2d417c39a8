#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace chemostat {

/// One recorded knot with its diagnostics. L4 is NaN for single-species runs.
struct Sample {
  double t = 0.0;
  double S = 0.0;
  double x = 0.0;
  double S_r = 0.0;
  double x_r = 0.0;
  double D = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double z_tilde = 0.0;
  double xi_tilde = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double L3 = 0.0;
  double V = 0.0;
  std::vector<double> y;
  double L4 = std::numeric_limits<double>::quiet_NaN();
};

struct TrajectoryMeta {
  double m = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  std::string scenario_id;
  std::string cert_id;
};

/// Time-ordered samples (strictly increasing t). Immutable once produced.
struct Trajectory {
  std::vector<Sample> samples;
  TrajectoryMeta meta;
  std::size_t n_species = 0;
  bool has_disturbance = true;
  bool has_multi_diagnostics = false;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

}  // namespace chemostat
