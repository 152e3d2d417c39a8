#pragma once

// Closed-loop simulation of the chemostat with diagnostics attached.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemostat/certificate.hpp"
#include "chemostat/controller.hpp"
#include "chemostat/integrator.hpp"
#include "chemostat/trajectory.hpp"

namespace chemostat {

struct SimulationContext {
  ModelParams params;
  DilutionProfile dilution;
  DisturbanceSpec disturbance;
  /// Weights of L2 and L3 in the diagnostics columns.
  LyapunovWeights weights;
  /// Extra species; a non-empty list switches to the augmented model, which
  /// is unperturbed.
  std::vector<SpeciesGrowth> species;
  /// Supplies the L4 weights for multi-species runs.
  std::optional<MultiCertificate> multi;
  std::string scenario_id;
  std::string cert_id;
};

/// Context with the sinusoidal dilution law and diagnostics weights
/// (kappa, d_o, disturbance.ubar()). With species, `epsilon` feeds the
/// multi-species certificate used for L4.
SimulationContext make_context(const ModelParams& params, const DisturbanceSpec& disturbance,
                               std::vector<SpeciesGrowth> species = {},
                               double epsilon = 0.1);

struct SimulationResult {
  Trajectory trajectory;
  IntegrationStats stats;
};

/// Integrates from s0 = (S, x[, y_1..y_n]).
SimulationResult simulate(const SimulationContext& ctx, std::span<const double> s0,
                          const IntegratorConfig& cfg);

/// Fine-step reference run; knots coincide with simulate().
SimulationResult simulate_oracle(const SimulationContext& ctx, std::span<const double> s0,
                                 const IntegratorConfig& cfg, std::size_t factor = 100);

/// The right-hand side integrate() sees for this context.
RhsFn make_rhs(const SimulationContext& ctx);

/// Attaches reference, dilution, disturbance and Lyapunov columns to raw
/// knots.
Trajectory build_trajectory(const SimulationContext& ctx, const Solution& sol);

}  // namespace chemostat
