#pragma once

// Certificate constants for the tracking-error Lyapunov function
//   L1 = e^xi - xi - 1,  L2 = z^2 / (d_o - ubar),  L3 = L1 + kappa L2,
//   V  = e^L3 - 1,
// which satisfies V' <= -C5 V + C2 |u| for disturbances bounded by ubar.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemostat/compact_set.hpp"
#include "chemostat/model.hpp"

namespace chemostat {

struct CoreConstants {
  double c = 0.0;
  double kappa = 0.0;
  double c1 = 0.0;
};

/// c = 8 (1/2 + d_bar/d_o)^2,
/// kappa = 4 + max{112m/(4a+1), 16m(4a+3)(a+2) / (a(4a+1)^2)},
/// C1 = min{1, kappa/200, ma / (2(4a+3)(a+2))}.
CoreConstants constants(const ModelParams& params);

/// Largest admissible ISS disturbance bound (exclusive):
/// min{C1 / sqrt(8(1 + 2 c kappa C1)), d_o / 2}.
double disturbance_cap(const ModelParams& params);

/// Exclusive iISS disturbance bound min{1, d_o}.
double iiss_disturbance_cap(const ModelParams& params);

struct DecayConstants {
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  CompactSetMinima minima;  ///< where the compact-set ratios bottom out
};

/// C2 = (1/C1 + 2 kappa c) ubar exactly; C3, C4 from compact-set minima;
/// C5 = min{C4, C1/8}. Rejects ubar outside (0, disturbance_cap).
DecayConstants decay_constants(const ModelParams& params, double ubar,
                               const CompactGrid& grid = {});

/// Every constant in force for one (params, ubar, mode) choice. In iISS
/// mode the decay constants C3..C5 do not apply and are NaN.
struct Certificate {
  double m = 0.0;
  double a = 0.0;
  DisturbanceMode mode = DisturbanceMode::iss;
  double d_o = 0.0;
  double d_bar = 0.0;
  double c = 0.0;
  double kappa = 0.0;
  double c1 = 0.0;
  double ubar_max = 0.0;
  double ubar = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;

  ModelParams params() const { return {m, a}; }
  bool has_decay_constants() const;
};

/// Builds the certificate. ISS mode requires 0 < ubar < ubar_max (default
/// ubar_max / 2); iISS mode requires 0 < ubar < min{1, d_o}.
Certificate make_certificate(const ModelParams& params,
                             std::optional<double> ubar = std::nullopt,
                             DisturbanceMode mode = DisturbanceMode::iss,
                             const CompactGrid& grid = {});

/// Checks a DisturbanceSpec's declared bound against its mode.
void validate_disturbance(const DisturbanceSpec& spec,
                          const ModelParams& params);

/// e^xi - xi - 1, evaluated without cancellation near xi = 0.
double log_error_potential(double xi);

struct LyapunovValues {
  double L1 = 0.0;
  double L2 = 0.0;
  double L3 = 0.0;
  double V = 0.0;
};

/// The weights the Lyapunov functions need; split out so simulations can
/// carry them without recomputing the compact-set constants.
struct LyapunovWeights {
  double kappa = 0.0;
  double d_o = 0.0;
  double ubar = 0.0;

  double l2_scale() const { return 1.0 / (d_o - ubar); }
};

LyapunovWeights weights_of(const Certificate& cert);

LyapunovValues lyapunov(const ErrorCoords& e, const LyapunovWeights& w);
LyapunovValues lyapunov(const ErrorCoords& e, const Certificate& cert);

/// Constants of the multi-species extinction argument.
struct MultiCertificate {
  double epsilon = 0.0;
  double T = 0.0;
  double delta = 0.0;  ///< d_o - max_i nu_i(1 + epsilon)
  double A = 0.0;      ///< 16 m n^2 / (a delta)
  double d_o = 0.0;
  double m = 0.0;
  double a = 0.0;
  std::size_t n = 0;
};

/// Rejects any species with nu_i(1 + epsilon) >= d_o, naming it.
MultiCertificate multi_certificate(const ModelParams& params,
                                   std::span<const SpeciesGrowth> growths,
                                   double epsilon, double T);

/// L4 = L1(xi) + 4m/(a d_o) z^2 + A sum y_i^2.
double lyapunov_multi(const ErrorCoords& e, std::span<const double> y,
                      const MultiCertificate& mc);

void to_json(nlohmann::json& j, const Certificate& cert);
/// Throws std::invalid_argument naming the first missing or mistyped field.
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace chemostat
