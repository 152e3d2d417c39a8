#pragma once

// Brute-force minimization of the two ratios that fix the small-error decay
// constants, over K = {(xi, z) : (e^xi - 1)^2 + z^2 <= 1/2}.
//
// With L3(xi, z) = e^xi - xi - 1 + w z^2 (w = kappa / (d_o - ubar)):
//   dissipation ratio  ((e^xi - 1)^2 + z^2) / L3
//   saturation ratio   L3 / (e^L3 - 1)
//
// Two implementations of the grid scan are kept: a serial reference and an
// OpenMP kernel. Both visit identical points with identical arithmetic and
// break ties by flat grid index, so their results are bit-identical.

#include <cstddef>
#include <functional>

namespace chemostat {

struct CompactGrid {
  std::size_t n_xi = 2001;
  std::size_t n_z = 2001;
  double xi_min = -2.0;
  double xi_max = 2.0;
  double z_min = -1.0;
  double z_max = 1.0;
};

struct RatioArgmin {
  double value = 0.0;
  double xi_tilde = 0.0;
  double z_tilde = 0.0;
};

struct CompactSetMinima {
  RatioArgmin dissipation;
  RatioArgmin saturation;
  std::size_t points_in_set = 0;
};

constexpr double kCompactSetRadius2 = 0.5;

bool in_compact_set(double xi_tilde, double z_tilde);

/// Value at the origin is the smallest directional limit, min{2, 1/w}.
double dissipation_ratio(double xi_tilde, double z_tilde, double weight);

/// L3 / (e^L3 - 1), extended by 1 at L3 = 0.
double saturation_ratio(double xi_tilde, double z_tilde, double weight);

CompactSetMinima scan_compact_set_serial(double weight,
                                         const CompactGrid& grid = {});
CompactSetMinima scan_compact_set_parallel(double weight,
                                           const CompactGrid& grid = {});

/// Pattern search started from a grid minimizer; candidates leaving K are
/// pulled back radially onto its boundary (K is star-shaped about 0).
RatioArgmin refine_on_compact_set(
    const std::function<double(double, double)>& ratio, RatioArgmin start,
    double initial_step);

/// Grid scan (OpenMP kernel) followed by local refinement of both minima.
CompactSetMinima minimize_on_compact_set(double weight,
                                         const CompactGrid& grid = {});

}  // namespace chemostat
