#pragma once

// Parameter sweeps over (m, a, ubar, seed) around a base scenario.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemostat/scenario.hpp"

namespace chemostat {

struct SweepSpec {
  Scenario base;
  /// Empty lists keep the base value.
  std::vector<double> m;
  std::vector<double> a;
  /// Fractions of ubar_max. When given, the point runs in ISS mode with
  /// ubar = fraction * ubar_max (1.0 maps to the largest double below
  /// ubar_max) and the certificate uses the same ubar. Otherwise the base
  /// disturbance is kept and the certificate uses ubar_max / 2.
  std::vector<double> ubar_fraction;
  std::vector<std::uint64_t> seeds;
  int workers = 1;
  /// Optional directory receiving one trajectory CSV per row.
  std::string output_dir;
};

/// {"base": scenario, "grid": {"m", "a", "ubar_fraction", "seeds"},
///  "workers", "output_dir"}
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

struct SweepRow {
  std::size_t index = 0;
  double m = 0.0;
  double a = 0.0;
  double ubar_fraction = 0.0;  ///< NaN when the base ubar is kept
  double ubar = 0.0;
  std::uint64_t seed = 0;
  std::string status;          ///< ok, warning or error
  std::string message;
  double d_o = 0.0, d_bar = 0.0, c = 0.0, kappa = 0.0, c1 = 0.0, c2 = 0.0;
  double c3 = 0.0, c4 = 0.0, c5 = 0.0, ubar_max = 0.0;
  double terminal_error = 0.0;    ///< |(z_tilde, xi_tilde)| at tf
  double terminal_x_error = 0.0;  ///< |x - x_r| at tf
  double worst_decay_margin = 0.0;
  bool decay_pass = false;
  bool invariance_pass = false;
  std::size_t halvings = 0;
};

/// Rows in grid order (m outermost, then a, ubar fraction, seed) regardless
/// of the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace chemostat
