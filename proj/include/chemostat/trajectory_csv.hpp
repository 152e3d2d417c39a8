#pragma once

// Trajectory CSV: header row, ',' delimiter, LF line endings, numbers at 17
// significant digits so a write/read cycle is bit-exact.

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "chemostat/trajectory.hpp"

namespace chemostat {

/// t,S,x,S_r,x_r,D,u1,u2,z_tilde,xi_tilde,L1,L2,L3,V then y_1..y_n,L4 for
/// multi-species runs.
std::vector<std::string> trajectory_columns(const Trajectory& traj);

/// printf("%.17g") formatting used by every numeric output.
std::string format_number(double v);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Requires t, S and x. Missing u1/u2 clears has_disturbance; y_i columns
/// set n_species. Other known columns default to 0 (NaN for L4) when absent.
/// Throws std::invalid_argument naming the line on malformed input.
Trajectory read_trajectory_csv(std::istream& is);
Trajectory read_trajectory_csv(const std::string& path);

/// Column-oriented numeric table for plotting.
struct CsvTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;

  bool has(const std::string& name) const { return columns.count(name) != 0; }
  const std::vector<double>& at(const std::string& name) const;
};

CsvTable read_csv_table(std::istream& is);
CsvTable read_csv_table(const std::string& path);

}  // namespace chemostat
