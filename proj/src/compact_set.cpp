#include "chemostat/compact_set.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace chemostat {

namespace {

// Per-xi quantities shared by every z on a grid column.
struct Column {
  double xi;
  double dev2;  // (e^xi - 1)^2
  double l1;    // e^xi - xi - 1
};

Column make_column(double xi) {
  const double e = std::expm1(xi);
  return {xi, e * e, e - xi};
}

double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

double saturation_from_l3(double l3) {
  if (l3 == 0.0) return 1.0;
  return l3 / std::expm1(l3);
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  void offer(double v, std::size_t i) {
    if (v < value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
};

struct ScanState {
  Candidate dissipation;
  Candidate saturation;
  std::size_t count = 0;

  void merge(const ScanState& other) {
    dissipation.offer(other.dissipation.value, other.dissipation.index);
    saturation.offer(other.saturation.value, other.saturation.index);
    count += other.count;
  }
};

void scan_column(const Column& col, double weight, std::size_t i,
                 const CompactGrid& grid, ScanState& state) {
  const double origin_limit = std::min(2.0, 1.0 / weight);
  for (std::size_t j = 0; j < grid.n_z; ++j) {
    const double z = grid_coord(grid.z_min, grid.z_max, j, grid.n_z);
    const double z2 = z * z;
    const double w = col.dev2 + z2;
    if (w > kCompactSetRadius2) continue;
    const double l3 = col.l1 + weight * z2;
    const std::size_t flat = i * grid.n_z + j;
    state.dissipation.offer(l3 == 0.0 ? origin_limit : w / l3, flat);
    state.saturation.offer(saturation_from_l3(l3), flat);
    ++state.count;
  }
}

void check_grid(double weight, const CompactGrid& grid) {
  if (!(weight > 0.0)) throw std::invalid_argument("L3 weight must be positive");
  if (grid.n_xi < 2 || grid.n_z < 2 || !(grid.xi_max > grid.xi_min) ||
      !(grid.z_max > grid.z_min)) {
    throw std::invalid_argument("compact-set grid is degenerate");
  }
}

RatioArgmin to_argmin(const Candidate& c, const CompactGrid& grid) {
  if (c.index == std::numeric_limits<std::size_t>::max()) {
    throw std::runtime_error("compact-set grid does not intersect K");
  }
  const std::size_t i = c.index / grid.n_z;
  const std::size_t j = c.index % grid.n_z;
  return {c.value, grid_coord(grid.xi_min, grid.xi_max, i, grid.n_xi),
          grid_coord(grid.z_min, grid.z_max, j, grid.n_z)};
}

CompactSetMinima finish(const ScanState& state, const CompactGrid& grid) {
  return {to_argmin(state.dissipation, grid), to_argmin(state.saturation, grid),
          state.count};
}

// Largest lambda in [0, 1] with lambda * (xi, z) in K, by bisection.
std::pair<double, double> pull_into_set(double xi, double z) {
  if (in_compact_set(xi, z)) return {xi, z};
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (in_compact_set(mid * xi, mid * z)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo * xi, lo * z};
}

}  // namespace

bool in_compact_set(double xi_tilde, double z_tilde) {
  const double e = std::expm1(xi_tilde);
  return e * e + z_tilde * z_tilde <= kCompactSetRadius2;
}

double dissipation_ratio(double xi_tilde, double z_tilde, double weight) {
  const Column col = make_column(xi_tilde);
  const double z2 = z_tilde * z_tilde;
  const double l3 = col.l1 + weight * z2;
  if (l3 == 0.0) return std::min(2.0, 1.0 / weight);
  return (col.dev2 + z2) / l3;
}

double saturation_ratio(double xi_tilde, double z_tilde, double weight) {
  const Column col = make_column(xi_tilde);
  return saturation_from_l3(col.l1 + weight * z_tilde * z_tilde);
}

CompactSetMinima scan_compact_set_serial(double weight,
                                         const CompactGrid& grid) {
  check_grid(weight, grid);
  ScanState state;
  for (std::size_t i = 0; i < grid.n_xi; ++i) {
    const Column col =
        make_column(grid_coord(grid.xi_min, grid.xi_max, i, grid.n_xi));
    scan_column(col, weight, i, grid, state);
  }
  return finish(state, grid);
}

CompactSetMinima scan_compact_set_parallel(double weight,
                                           const CompactGrid& grid) {
  check_grid(weight, grid);
  ScanState global;
  const auto n = static_cast<std::ptrdiff_t>(grid.n_xi);
#pragma omp parallel
  {
    ScanState local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Column col =
          make_column(grid_coord(grid.xi_min, grid.xi_max, ui, grid.n_xi));
      scan_column(col, weight, ui, grid, local);
    }
#pragma omp critical(chemostat_compact_set_merge)
    global.merge(local);
  }
  return finish(global, grid);
}

RatioArgmin refine_on_compact_set(
    const std::function<double(double, double)>& ratio, RatioArgmin start,
    double initial_step) {
  RatioArgmin best = start;
  best.value = ratio(best.xi_tilde, best.z_tilde);
  double step = initial_step;
  constexpr int kMaxIterations = 20000;
  static constexpr double kDirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                         {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  for (int it = 0; it < kMaxIterations && step > 1e-14; ++it) {
    bool improved = false;
    for (const auto& d : kDirs) {
      const auto [xi, z] =
          pull_into_set(best.xi_tilde + d[0] * step, best.z_tilde + d[1] * step);
      const double v = ratio(xi, z);
      if (v < best.value) {
        best = {v, xi, z};
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

CompactSetMinima minimize_on_compact_set(double weight,
                                         const CompactGrid& grid) {
  CompactSetMinima scan = scan_compact_set_parallel(weight, grid);
  const double cell = std::max((grid.xi_max - grid.xi_min) /
                                   static_cast<double>(grid.n_xi - 1),
                               (grid.z_max - grid.z_min) /
                                   static_cast<double>(grid.n_z - 1));
  scan.dissipation = refine_on_compact_set(
      [weight](double xi, double z) { return dissipation_ratio(xi, z, weight); },
      scan.dissipation, cell);
  scan.saturation = refine_on_compact_set(
      [weight](double xi, double z) { return saturation_ratio(xi, z, weight); },
      scan.saturation, cell);
  return scan;
}

}  // namespace chemostat
