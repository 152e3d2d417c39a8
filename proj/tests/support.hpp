#pragma once

// Shared scenario builders for the test suites.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "chemostat/scenario.hpp"

namespace chemostat::fixtures {

/// m = 10, a = 1/2, (S0, x0) = (1, 2), u1 = 0.5 e^{-t}, u2 = 0 on [0, 60].
inline Scenario pulse_scenario() {
  Scenario sc;
  sc.id = "pulse";
  sc.params = ModelParams(10.0, 0.5);
  sc.initial = {1.0, 2.0};
  sc.disturbance.kind = DisturbanceKind::exp_decay;
  sc.disturbance.amplitude = 0.5;
  sc.disturbance.rate = 1.0;
  sc.disturbance.channel = 1;
  sc.disturbance.ubar = 0.5;
  sc.disturbance.mode = DisturbanceMode::iiss;
  sc.integrator.h = 1e-3;
  sc.integrator.t0 = 0.0;
  sc.integrator.tf = 60.0;
  return sc;
}

/// One extra species with Monod (1, 1), y1(0) = 0.3, epsilon = 0.1, u = 0.
inline Scenario extinction_scenario() {
  Scenario sc;
  sc.id = "extinction";
  sc.params = ModelParams(10.0, 0.5);
  sc.initial = {1.0, 2.0, 0.3};
  sc.disturbance.kind = DisturbanceKind::zero;
  sc.disturbance.ubar = 0.0;
  sc.disturbance.mode = DisturbanceMode::iss;
  sc.species = {{1.0, 1.0}};
  sc.epsilon = 0.1;
  sc.integrator.tf = 60.0;
  return sc;
}

/// Randomized ISS-admissible scenario: S0, x0 uniform in (0.1, 3), seeded
/// random u with ubar = ubar_max / 2.
inline Scenario random_iss_scenario(std::uint64_t seed, double tf = 60.0) {
  std::mt19937_64 rng(0x5eed0000ULL + seed);
  std::uniform_real_distribution<double> pick(0.1, 3.0);
  Scenario sc;
  sc.id = "random_" + std::to_string(seed);
  sc.params = ModelParams(10.0, 0.5);
  const double S0 = pick(rng);
  const double x0 = pick(rng);
  sc.initial = {S0, x0};
  sc.disturbance.kind = DisturbanceKind::random;
  sc.disturbance.ubar = disturbance_cap(sc.params) / 2.0;
  sc.disturbance.mode = DisturbanceMode::iss;
  sc.disturbance.seed = seed;
  sc.integrator.tf = tf;
  return sc;
}

}  // namespace chemostat::fixtures
