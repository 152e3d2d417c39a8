// chemostat: certify, simulate, verify, plot and sweep from the command line.
// Exit codes: 0 success / all checks pass, 1 verification or integration
// failure, 2 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chemostat/certificate.hpp"
#include "chemostat/checks.hpp"
#include "chemostat/envelope.hpp"
#include "chemostat/scenario.hpp"
#include "chemostat/svg_plot.hpp"
#include "chemostat/sweep.hpp"
#include "chemostat/trajectory_csv.hpp"

namespace {

using namespace chemostat;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Configuration problems map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

struct CertifyArgs {
  double m = 0.0;
  double a = 0.0;
  std::optional<double> ubar;
  std::string mode = "iss";
  std::string out;
};

int run_certify(const CertifyArgs& args) {
  Certificate cert;
  try {
    const ModelParams params(args.m, args.a);
    cert = make_certificate(params, args.ubar, disturbance_mode_from_string(args.mode));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(json(cert).dump(2) + "\n", args.out);
  return kOk;
}

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string oracle;
};

int run_simulate(const SimulateArgs& args) {
  Scenario sc;
  try {
    sc = load_scenario(args.scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string out = !args.out.empty() ? args.out : sc.trajectory_out;
  if (out.empty()) throw UsageError("no output path (--out or output.trajectory)");

  const auto cap = sc.disturbance.mode == DisturbanceMode::iss ? disturbance_cap(sc.params)
                                                               : iiss_disturbance_cap(sc.params);
  if (!(sc.disturbance.ubar < cap)) {
    std::fprintf(stderr,
                 "warning: ubar = %.17g is outside the certified %s range (0, %.17g); "
                 "simulating anyway\n",
                 sc.disturbance.ubar, to_string(sc.disturbance.mode).c_str(), cap);
  }
  try {
    const SimulationContext ctx = scenario_context(sc);
    const auto result = simulate(ctx, sc.initial, sc.integrator);
    write_trajectory_csv(out, result.trajectory);
    if (result.stats.halvings > 0) {
      std::fprintf(stderr, "note: %zu step(s) halved at the positivity floor\n",
                   result.stats.halvings);
    }
    if (!args.oracle.empty()) {
      write_trajectory_csv(args.oracle,
                           simulate_oracle(ctx, sc.initial, sc.integrator).trajectory);
    }
  } catch (const IntegrationFailure& e) {
    std::fprintf(stderr, "integration failure: %s\n", e.what());
    return kFail;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

struct VerifyArgs {
  std::string trajectory;
  std::string certificate;
  std::string scenario;
  std::vector<std::string> checks;
  std::string out;
  double tol = kDefaultCheckTolerance;
  double epsilon = std::nan("");
};

int run_verify(const VerifyArgs& args) {
  std::vector<std::string> checks;
  for (const auto& item : args.checks) {
    std::stringstream ss(item);
    std::string c;
    while (std::getline(ss, c, ',')) {
      if (c != "decay" && c != "iss" && c != "iiss" && c != "extinction" && c != "invariance") {
        throw UsageError("unknown check '" + c + "'");
      }
      checks.push_back(c);
    }
  }
  if (checks.empty()) throw UsageError("no checks requested");

  Trajectory traj;
  try {
    traj = read_trajectory_csv(args.trajectory);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (traj.empty()) throw UsageError("trajectory has no samples");

  std::optional<Certificate> cert;
  if (!args.certificate.empty()) {
    try {
      cert = certificate_from_json(read_json_file(args.certificate));
    } catch (const std::invalid_argument& e) {
      throw UsageError(args.certificate + ": " + e.what());
    }
  }
  std::optional<Scenario> scenario;
  if (!args.scenario.empty()) {
    try {
      scenario = load_scenario(args.scenario);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  json reports = json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    VerificationReport report;
    try {
      if (c == "invariance") {
        report = check_invariance(traj);
      } else if (c == "extinction") {
        if (!scenario || scenario->species.empty()) {
          throw UsageError("extinction check needs --scenario with species");
        }
        const double eps = std::isnan(args.epsilon) ? scenario->epsilon : args.epsilon;
        const auto T = settling_time(traj, eps);
        if (!T) throw UsageError("S never settles below 1 + epsilon; no settling time");
        const auto mc = multi_certificate(scenario->params, scenario->species, eps, *T);
        ExtinctionOptions opts;
        opts.tolerance = args.tol;
        report = check_extinction(traj, mc, opts);
      } else {
        if (!cert) throw UsageError("check '" + c + "' needs --certificate");
        if (!traj.has_disturbance) throw UsageError("trajectory lacks u1/u2 columns");
        if (c == "decay") {
          report = check_decay(traj, *cert, args.tol);
        } else if (c == "iss") {
          report = check_iss(traj, iss_envelope(*cert), args.tol);
        } else {
          report = iiss_check(traj, *cert, args.tol);
        }
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(c + ": " + e.what());
    }
    all_pass = all_pass && report.pass;
    reports.push_back(report);
  }
  json doc = {{"trajectory", args.trajectory}, {"pass", all_pass}, {"reports", reports}};
  if (!args.certificate.empty()) doc["certificate"] = args.certificate;
  emit(doc.dump(2) + "\n", args.out);
  return all_pass ? kOk : kFail;
}

struct PlotArgs {
  std::string spec;
  std::string csv;
  std::string x = "t";
  std::vector<std::string> y;
  std::string xlabel;
  std::string ylabel;
  std::string out;
};

int run_plot(const PlotArgs& args) {
  PlotSpec spec;
  try {
    if (!args.spec.empty()) {
      spec = plot_spec_from_json(read_json_file(args.spec));
    } else {
      if (args.csv.empty() || args.out.empty()) {
        throw UsageError("plot needs --csv and --out (or --spec)");
      }
      spec.csv = args.csv;
      spec.out = args.out;
      spec.x_column = args.x;
      spec.xlabel = args.xlabel;
      spec.ylabel = args.ylabel;
      for (const auto& y : args.y) spec.series.push_back(parse_series(y));
    }
    plot(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

struct SweepArgs {
  std::string spec;
  std::string out;
  int workers = 0;
};

int run_sweep_cmd(const SweepArgs& args) {
  SweepSpec spec;
  try {
    spec = sweep_spec_from_json(read_json_file(args.spec));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (args.workers > 0) spec.workers = args.workers;
  const auto rows = run_sweep(spec);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  emit(os.str(), args.out);
  for (const auto& r : rows) {
    if (r.status == "error") return kFail;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemostat tracking controller: certificates, simulation and verification"};
  app.require_subcommand(1);

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "Compute the certificate constants for (m, a)");
  c->add_option("--m", certify.m, "Monod maximal growth rate m (m > 4a + 1)")->required();
  c->add_option("--a", certify.a, "Monod half-saturation a")->required();
  c->add_option("--ubar", certify.ubar, "Disturbance bound (default ubar_max / 2)");
  c->add_option("--mode", certify.mode, "iss or iiss")->check(CLI::IsMember({"iss", "iiss"}));
  c->add_option("--out", certify.out, "Output JSON path (default stdout)");

  SimulateArgs simulate_args;
  auto* s = app.add_subcommand("simulate", "Integrate a scenario and write the trajectory CSV");
  s->add_option("--scenario", simulate_args.scenario, "Scenario JSON file")->required();
  s->add_option("--out", simulate_args.out, "Trajectory CSV (overrides output.trajectory)");
  s->add_option("--oracle-out", simulate_args.oracle, "Also write the 100x fine-step oracle run");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check certificate inequalities along a trajectory");
  v->add_option("--trajectory", verify.trajectory, "Trajectory CSV")->required();
  v->add_option("--certificate", verify.certificate, "Certificate JSON (decay, iss, iiss)");
  v->add_option("--scenario", verify.scenario, "Scenario JSON (extinction)");
  v->add_option("--check", verify.checks,
                "decay, iss, iiss, extinction, invariance (repeatable or comma separated)")
      ->required();
  v->add_option("--tol", verify.tol, "Margin tolerance (default 1e-9)");
  v->add_option("--epsilon", verify.epsilon, "Override the scenario epsilon (extinction)");
  v->add_option("--out", verify.out, "Report JSON path (default stdout)");

  PlotArgs plot_args;
  auto* p = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  p->add_option("--spec", plot_args.spec, "Plot spec JSON (replaces the other flags)");
  p->add_option("--csv", plot_args.csv, "Input CSV");
  p->add_option("--x", plot_args.x, "x column (default t)");
  p->add_option("--y", plot_args.y, "y column, optionally column:solid or column:dashed");
  p->add_option("--xlabel", plot_args.xlabel, "x axis label");
  p->add_option("--ylabel", plot_args.ylabel, "y axis label");
  p->add_option("--out", plot_args.out, "Output SVG path");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run a parameter grid and write a summary CSV");
  w->add_option("--spec", sweep.spec, "Sweep spec JSON")->required();
  w->add_option("--out", sweep.out, "Summary CSV path (default stdout)");
  w->add_option("--workers", sweep.workers, "Concurrent sweep points (overrides the spec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c->parsed()) return run_certify(certify);
    if (s->parsed()) return run_simulate(simulate_args);
    if (v->parsed()) return run_verify(verify);
    if (p->parsed()) return run_plot(plot_args);
    if (w->parsed()) return run_sweep_cmd(sweep);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  }
  return kUsage;
}
