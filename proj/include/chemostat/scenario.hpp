#pragma once

// Scenario files: one JSON document per scenario. Physical fields are
// mandatory; only the integrator block has defaults.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemostat/disturbance.hpp"
#include "chemostat/integrator.hpp"
#include "chemostat/simulate.hpp"

namespace chemostat {

/// Configuration error with the 1-based line it refers to (0 if unknown).
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Scenario {
  std::string id;
  ModelParams params{10.0, 0.5};
  /// (S0, x0, y0_1, ..., y0_n)
  std::vector<double> initial;
  DisturbanceConfig disturbance;
  std::vector<SpeciesGrowth> species;
  /// Substrate margin of the multi-species certificate (required with species).
  double epsilon = 0.0;
  IntegratorConfig integrator;
  std::string trajectory_out;
};

/// Parses and validates; every error names a line of `text`.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& sc);

/// Same validation as parse_scenario on an already parsed document (no
/// line information).
Scenario scenario_from_json(const nlohmann::json& j);

SimulationContext scenario_context(const Scenario& sc);
SimulationResult run_scenario(const Scenario& sc);

}  // namespace chemostat
