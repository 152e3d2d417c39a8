#pragma once

// Built-in disturbance signals.

#include <cstdint>
#include <string>

#include "chemostat/model.hpp"

namespace chemostat {

enum class DisturbanceKind { zero, exp_decay, constant, random };

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& text);

struct DisturbanceConfig {
  DisturbanceKind kind = DisturbanceKind::zero;
  double ubar = 0.0;
  DisturbanceMode mode = DisturbanceMode::iss;
  // exp_decay: amplitude * e^{-rate (t - t0)} on channel 1 or 2.
  double amplitude = 0.0;
  double rate = 0.0;
  int channel = 1;
  // constant
  double u1 = 0.0;
  double u2 = 0.0;
  // random: piecewise constant on intervals of length `interval` (<= 0 means
  // 10 h), uniform in [-ubar, ubar]^2.
  std::uint64_t seed = 0;
  double interval = 0.0;
};

/// Builds the signal. The random kind pregenerates its table over
/// [t0, tf] with step h so evaluation is lock-free and reproducible.
/// Throws AdmissibilityError when a fixed amplitude exceeds ubar.
DisturbanceSpec make_disturbance(const DisturbanceConfig& cfg, double t0, double tf,
                                 double h);

}  // namespace chemostat
