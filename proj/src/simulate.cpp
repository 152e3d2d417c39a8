#include "chemostat/simulate.hpp"

#include <stdexcept>

namespace chemostat {

SimulationContext make_context(const ModelParams& params, const DisturbanceSpec& disturbance,
                               std::vector<SpeciesGrowth> species, double epsilon) {
  const auto k = constants(params);
  const auto dilution = DilutionProfile::sinusoidal(params);
  if (!(disturbance.ubar() < dilution.d_o())) {
    throw AdmissibilityError("ubar must be below d_o for the diagnostics weights");
  }
  SimulationContext ctx{params,
                        dilution,
                        disturbance,
                        {k.kappa, dilution.d_o(), disturbance.ubar()},
                        std::move(species),
                        std::nullopt,
                        {},
                        {}};
  if (!ctx.species.empty()) {
    validate_species(ctx.species, dilution.d_o());
    ctx.multi = multi_certificate(params, ctx.species, epsilon, 0.0);
  }
  return ctx;
}

RhsFn make_rhs(const SimulationContext& ctx) {
  if (ctx.species.empty()) {
    return [&ctx](double t, std::span<const double> y, std::span<double> dy) {
      const Vec2 d = rhs_perturbed(t, {y[0], y[1]}, ctx.dilution(t), ctx.disturbance(t),
                                   ctx.params);
      dy[0] = d[0];
      dy[1] = d[1];
    };
  }
  return [&ctx](double t, std::span<const double> y, std::span<double> dy) {
    thread_local AugmentedState s;
    s.S = y[0];
    s.x = y[1];
    s.y.assign(y.begin() + 2, y.end());
    rhs_multi(t, s, ctx.dilution(t), ctx.species, ctx.params, dy);
  };
}

Trajectory build_trajectory(const SimulationContext& ctx, const Solution& sol) {
  Trajectory traj;
  traj.meta.m = ctx.params.m();
  traj.meta.a = ctx.params.a();
  traj.meta.scenario_id = ctx.scenario_id;
  traj.meta.cert_id = ctx.cert_id;
  traj.n_species = ctx.species.size();
  traj.has_multi_diagnostics = ctx.multi.has_value();
  traj.samples.reserve(sol.t.size());
  const bool multi = !ctx.species.empty();
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    const double t = sol.t[k];
    const auto& y = sol.y[k];
    Sample s;
    s.t = t;
    s.S = y[0];
    s.x = y[1];
    const auto ref = reference_sinusoidal(t);
    s.S_r = ref.S_r;
    s.x_r = ref.x_r;
    s.D = ctx.dilution(t);
    const Disturbance u = multi ? Disturbance{} : ctx.disturbance(t);
    s.u1 = u.u1;
    s.u2 = u.u2;
    const ErrorCoords e = error_coords({s.S, s.x}, t);
    s.z_tilde = e.z_tilde;
    s.xi_tilde = e.xi_tilde;
    const LyapunovValues lv = lyapunov(e, ctx.weights);
    s.L1 = lv.L1;
    s.L2 = lv.L2;
    s.L3 = lv.L3;
    s.V = lv.V;
    if (multi) {
      s.y.assign(y.begin() + 2, y.end());
      if (ctx.multi) s.L4 = lyapunov_multi(e, s.y, *ctx.multi);
    }
    traj.samples.push_back(std::move(s));
  }
  return traj;
}

namespace {

PositivityGuard guard_for(const SimulationContext&) { return {2}; }

void check_initial(const SimulationContext& ctx, std::span<const double> s0) {
  if (s0.size() != ctx.species.size() + 2) {
    throw std::invalid_argument("initial state has " + std::to_string(s0.size()) +
                                " components, expected " +
                                std::to_string(ctx.species.size() + 2));
  }
}

}  // namespace

SimulationResult simulate(const SimulationContext& ctx, std::span<const double> s0,
                          const IntegratorConfig& cfg) {
  check_initial(ctx, s0);
  const RhsFn rhs = make_rhs(ctx);
  const Solution sol = integrate(rhs, s0, cfg, guard_for(ctx));
  return {build_trajectory(ctx, sol), sol.stats};
}

SimulationResult simulate_oracle(const SimulationContext& ctx, std::span<const double> s0,
                                 const IntegratorConfig& cfg, std::size_t factor) {
  check_initial(ctx, s0);
  const RhsFn rhs = make_rhs(ctx);
  const Solution sol = oracle_integrate(rhs, s0, cfg, guard_for(ctx), factor);
  return {build_trajectory(ctx, sol), sol.stats};
}

}  // namespace chemostat
