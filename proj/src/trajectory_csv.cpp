#include "chemostat/trajectory_csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chemostat {

namespace {

const std::vector<std::string> kBaseColumns = {
    "t", "S", "x", "S_r", "x_r", "D", "u1", "u2", "z_tilde", "xi_tilde", "L1", "L2", "L3", "V"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& cell, std::size_t line) {
  if (cell.empty()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": empty field");
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": '" + cell +
                                "' is not a number");
  }
  return v;
}

bool read_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
  auto cols = kBaseColumns;
  if (traj.n_species > 0) {
    for (std::size_t i = 1; i <= traj.n_species; ++i) cols.push_back("y_" + std::to_string(i));
    cols.push_back("L4");
  }
  return cols;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto cols = trajectory_columns(traj);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  os << out;
  for (const auto& s : traj.samples) {
    out.clear();
    for (double v : {s.t, s.S, s.x, s.S_r, s.x_r, s.D, s.u1, s.u2, s.z_tilde, s.xi_tilde,
                     s.L1, s.L2, s.L3, s.V}) {
      if (!out.empty()) out += ',';
      out += format_number(v);
    }
    if (traj.n_species > 0) {
      for (double yi : s.y) out += ',' + format_number(yi);
      out += ',' + format_number(s.L4);
    }
    out += '\n';
    os << out;
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_trajectory_csv(out, traj);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

const std::vector<double>& CsvTable::at(const std::string& name) const {
  auto it = columns.find(name);
  if (it == columns.end()) throw std::invalid_argument("missing column '" + name + "'");
  return it->second;
}

CsvTable read_csv_table(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!read_line(is, line) || line.empty()) {
    throw std::invalid_argument("line 1: missing CSV header");
  }
  table.header = split(line);
  for (const auto& name : table.header) {
    if (name.empty()) throw std::invalid_argument("line 1: empty column name");
    if (!table.columns.emplace(name, std::vector<double>{}).second) {
      throw std::invalid_argument("line 1: duplicate column '" + name + "'");
    }
  }
  std::vector<std::vector<double>*> slots;
  for (const auto& name : table.header) slots.push_back(&table.columns[name]);
  std::size_t lineno = 1;
  while (read_line(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != slots.size()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(slots.size()) + " fields, got " +
                                  std::to_string(cells.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) slots[i]->push_back(parse(cells[i], lineno));
  }
  return table;
}

CsvTable read_csv_table(const std::string& path) {
  auto in = open_in(path);
  return read_csv_table(in);
}

Trajectory read_trajectory_csv(std::istream& is) {
  const CsvTable table = read_csv_table(is);
  for (const char* required : {"t", "S", "x"}) {
    if (!table.has(required)) {
      throw std::invalid_argument(std::string("trajectory CSV lacks column '") + required + "'");
    }
  }
  Trajectory traj;
  traj.has_disturbance = table.has("u1") && table.has("u2");
  while (table.has("y_" + std::to_string(traj.n_species + 1))) ++traj.n_species;
  traj.has_multi_diagnostics = traj.n_species > 0 && table.has("L4");

  const std::size_t n = table.at("t").size();
  auto col = [&](const char* name) -> const std::vector<double>* {
    auto it = table.columns.find(name);
    return it == table.columns.end() ? nullptr : &it->second;
  };
  const auto* t = col("t");
  const auto* S = col("S");
  const auto* x = col("x");
  const auto* S_r = col("S_r");
  const auto* x_r = col("x_r");
  const auto* D = col("D");
  const auto* u1 = col("u1");
  const auto* u2 = col("u2");
  const auto* z = col("z_tilde");
  const auto* xi = col("xi_tilde");
  const auto* L1 = col("L1");
  const auto* L2 = col("L2");
  const auto* L3 = col("L3");
  const auto* V = col("V");
  const auto* L4 = col("L4");
  std::vector<const std::vector<double>*> ys;
  for (std::size_t i = 1; i <= traj.n_species; ++i) ys.push_back(&table.at("y_" + std::to_string(i)));

  auto get = [](const std::vector<double>* c, std::size_t k, double fallback) {
    return c ? (*c)[k] : fallback;
  };
  traj.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Sample& s = traj.samples[k];
    s.t = (*t)[k];
    s.S = (*S)[k];
    s.x = (*x)[k];
    s.S_r = get(S_r, k, 0.0);
    s.x_r = get(x_r, k, 0.0);
    s.D = get(D, k, 0.0);
    s.u1 = get(u1, k, 0.0);
    s.u2 = get(u2, k, 0.0);
    s.z_tilde = get(z, k, 0.0);
    s.xi_tilde = get(xi, k, 0.0);
    s.L1 = get(L1, k, 0.0);
    s.L2 = get(L2, k, 0.0);
    s.L3 = get(L3, k, 0.0);
    s.V = get(V, k, 0.0);
    s.L4 = get(L4, k, s.L4);
    for (const auto* c : ys) s.y.push_back((*c)[k]);
    if (k > 0 && !(s.t > traj.samples[k - 1].t)) {
      throw std::invalid_argument("line " + std::to_string(k + 2) +
                                  ": time column must be strictly increasing");
    }
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
  auto in = open_in(path);
  return read_trajectory_csv(in);
}

}  // namespace chemostat
