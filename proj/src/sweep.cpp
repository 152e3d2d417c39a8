#include "chemostat/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include "chemostat/batch.hpp"
#include "chemostat/checks.hpp"
#include "chemostat/trajectory_csv.hpp"

namespace chemostat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> numbers(const nlohmann::json& grid, const char* key) {
  std::vector<double> out;
  if (!grid.contains(key)) return out;
  const auto& list = grid.at(key);
  if (!list.is_array() || list.empty()) {
    throw std::invalid_argument(std::string("sweep grid '") + key + "' must be a non-empty array");
  }
  for (const auto& v : list) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("sweep grid '") + key + "' entries must be numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::string clean(std::string msg) {
  for (char& c : msg) {
    if (c == ',' || c == '\n' || c == '"') c = ';';
  }
  return msg;
}

struct Point {
  double m, a, fraction;
  std::uint64_t seed;
};

void run_point(const SweepSpec& spec, const Point& p, SweepRow& row) {
  row.m = p.m;
  row.a = p.a;
  row.ubar_fraction = p.fraction;
  row.seed = p.seed;
  row.status = "ok";
  for (double* v : {&row.d_o, &row.d_bar, &row.c, &row.kappa, &row.c1, &row.c2, &row.c3,
                    &row.c4, &row.c5, &row.ubar_max, &row.terminal_error, &row.terminal_x_error,
                    &row.worst_decay_margin}) {
    *v = kNaN;
  }

  Scenario sc = spec.base;
  try {
    sc.params = ModelParams(p.m, p.a);
  } catch (const std::exception& e) {
    row.status = "warning";
    row.message = std::string("skipped: ") + e.what();
    return;
  }
  const double cap = disturbance_cap(sc.params);
  row.ubar_max = cap;
  std::optional<double> cert_ubar;
  if (!std::isnan(p.fraction)) {
    if (!(p.fraction > 0.0) || p.fraction > 1.0) {
      row.status = "warning";
      row.message = "skipped: ubar fraction must lie in (0; 1]";
      return;
    }
    const double u = p.fraction >= 1.0 ? std::nextafter(cap, 0.0) : p.fraction * cap;
    sc.disturbance.ubar = u;
    sc.disturbance.mode = DisturbanceMode::iss;
    cert_ubar = u;
  }
  sc.disturbance.seed = p.seed;
  row.ubar = sc.disturbance.ubar;

  SimulationResult sim;
  try {
    if (!(sc.disturbance.ubar < dilution_bounds(sc.params).d_o)) {
      throw AdmissibilityError("ubar must be below d_o");
    }
    sim = run_scenario(sc);
  } catch (const std::invalid_argument& e) {
    row.status = "warning";
    row.message = std::string("skipped: ") + e.what();
    return;
  } catch (const std::exception& e) {
    row.status = "error";
    row.message = e.what();
    return;
  }
  row.halvings = sim.stats.halvings;
  const auto& traj = sim.trajectory;
  const auto& last = traj.samples.back();
  row.terminal_error = std::hypot(last.z_tilde, last.xi_tilde);
  row.terminal_x_error = std::abs(last.x - last.x_r);
  row.invariance_pass = check_invariance(traj).pass;

  if (!spec.output_dir.empty()) {
    write_trajectory_csv((std::filesystem::path(spec.output_dir) /
                          ("point_" + std::to_string(row.index) + ".csv"))
                             .string(),
                         traj);
  }

  try {
    const Certificate cert = make_certificate(sc.params, cert_ubar, DisturbanceMode::iss);
    row.d_o = cert.d_o;
    row.d_bar = cert.d_bar;
    row.c = cert.c;
    row.kappa = cert.kappa;
    row.c1 = cert.c1;
    row.c2 = cert.c2;
    row.c3 = cert.c3;
    row.c4 = cert.c4;
    row.c5 = cert.c5;
    if (traj.n_species == 0) {
      const auto report = check_decay(traj, cert);
      row.worst_decay_margin = report.worst_margin;
      row.decay_pass = report.pass;
    } else {
      row.message = "decay check not applicable to multi-species runs";
    }
  } catch (const std::exception& e) {
    row.status = "warning";
    row.message = std::string("certificate unavailable: ") + e.what();
  }
}

}  // namespace

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("sweep spec must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (k != "base" && k != "grid" && k != "workers" && k != "output_dir") {
      throw std::invalid_argument("sweep spec: unknown field '" + k + "'");
    }
  }
  if (!j.contains("base")) throw std::invalid_argument("sweep spec lacks 'base'");
  SweepSpec spec;
  spec.base = scenario_from_json(j.at("base"));
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw std::invalid_argument("sweep 'grid' must be an object");
    for (const auto& [k, _] : g.items()) {
      if (k != "m" && k != "a" && k != "ubar_fraction" && k != "seeds") {
        throw std::invalid_argument("sweep grid: unknown field '" + k + "'");
      }
    }
    spec.m = numbers(g, "m");
    spec.a = numbers(g, "a");
    spec.ubar_fraction = numbers(g, "ubar_fraction");
    if (g.contains("seeds")) {
      const auto& seeds = g.at("seeds");
      if (!seeds.is_array() || seeds.empty()) {
        throw std::invalid_argument("sweep grid 'seeds' must be a non-empty array");
      }
      for (const auto& s : seeds) {
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
          throw std::invalid_argument("sweep seeds must be non-negative integers");
        }
        spec.seeds.push_back(s.get<std::uint64_t>());
      }
    }
  }
  if (j.contains("workers")) {
    if (!j.at("workers").is_number_integer() || j.at("workers").get<int>() < 1) {
      throw std::invalid_argument("sweep 'workers' must be a positive integer");
    }
    spec.workers = j.at("workers").get<int>();
  }
  if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const auto ms = spec.m.empty() ? std::vector<double>{spec.base.params.m()} : spec.m;
  const auto as = spec.a.empty() ? std::vector<double>{spec.base.params.a()} : spec.a;
  const auto fs = spec.ubar_fraction.empty() ? std::vector<double>{kNaN} : spec.ubar_fraction;
  const auto seeds =
      spec.seeds.empty() ? std::vector<std::uint64_t>{spec.base.disturbance.seed} : spec.seeds;

  std::vector<Point> points;
  for (double m : ms) {
    for (double a : as) {
      for (double f : fs) {
        for (auto s : seeds) points.push_back({m, a, f, s});
      }
    }
  }
  if (!spec.output_dir.empty()) std::filesystem::create_directories(spec.output_dir);

  std::vector<SweepRow> rows(points.size());
  const Job job = [&](std::size_t i) {
    rows[i].index = i;
    run_point(spec, points[i], rows[i]);
    JobResult r;
    r.ok = true;
    return r;
  };
  const auto results = spec.workers > 1 ? run_batch_parallel(points.size(), job, spec.workers)
                                        : run_batch_serial(points.size(), job);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      rows[i].status = "error";
      rows[i].message = results[i].error;
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "index,m,a,ubar_fraction,ubar,seed,status,message,d_o,d_bar,c,kappa,c1,c2,c3,c4,c5,"
        "ubar_max,terminal_error,terminal_x_error,worst_decay_margin,decay_pass,"
        "invariance_pass,halvings\n";
  for (const auto& r : rows) {
    std::string line = std::to_string(r.index);
    for (double v : {r.m, r.a, r.ubar_fraction, r.ubar}) line += ',' + format_number(v);
    line += ',' + std::to_string(r.seed) + ',' + r.status + ',' + clean(r.message);
    for (double v : {r.d_o, r.d_bar, r.c, r.kappa, r.c1, r.c2, r.c3, r.c4, r.c5, r.ubar_max,
                     r.terminal_error, r.terminal_x_error, r.worst_decay_margin}) {
      line += ',' + format_number(v);
    }
    line += std::string(",") + (r.decay_pass ? "1" : "0") + ',' + (r.invariance_pass ? "1" : "0") +
            ',' + std::to_string(r.halvings) + '\n';
    os << line;
  }
}

}  // namespace chemostat
