#pragma once

// Numerical verification of the certificate inequalities along trajectories.
// Every check reports the worst signed margin (bound minus observed value);
// a check passes when that margin is >= -tolerance.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemostat/certificate.hpp"
#include "chemostat/envelope.hpp"
#include "chemostat/trajectory.hpp"

namespace chemostat {

/// Certificate mode does not match the requested check.
class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VerificationReport {
  std::string check;
  std::size_t n_samples = 0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double worst_t = 0.0;
  std::vector<double> worst_state;
  std::map<std::string, double> details;
};

void to_json(nlohmann::json& j, const VerificationReport& report);

constexpr double kDefaultCheckTolerance = 1e-9;

/// V' <= -C5 V + C2 |u| at every sample, with V' from the chain rule on the
/// error dynamics. Details carry the number of samples in the large-error
/// region ((e^xi - 1)^2 + z^2 >= 1/2, "case_1b") and in the compact set
/// ("case_2b").
VerificationReport check_decay(const Trajectory& traj, const Certificate& cert,
                               double tolerance = kDefaultCheckTolerance);

/// |(S - S_r, ln x - ln x_r)|(t) <= beta(|e(t0)|, t - t0) + gamma(sup |u|)
/// where e(t0) is the initial transformed error (z_tilde, xi_tilde).
VerificationReport check_iss(const Trajectory& traj, const IssEnvelope& env,
                             double tolerance = kDefaultCheckTolerance);

/// delta1(|e(t)|) <= beta(|e(t0)|, t - t0) + int_{t0}^{t} 2 C2 |u|, with the
/// integral by the trapezoid rule on the sample grid. Requires an iISS-mode
/// certificate. Details carry the final integral ("delta2_integral").
VerificationReport iiss_check(const Trajectory& traj, const Certificate& cert,
                              double tolerance = kDefaultCheckTolerance);

/// Trapezoid rule of 2 C2 |u| over the whole sample grid.
double delta2_integral(const Trajectory& traj, double c2);

/// First sample time after which S(t) <= 1 + epsilon for the rest of the
/// trajectory; nullopt when the last sample violates it.
std::optional<double> settling_time(const Trajectory& traj, double epsilon);

struct ExtinctionOptions {
  double tolerance = kDefaultCheckTolerance;
  double terminal_threshold = 1e-3;
};

/// For t >= T: y_i(t) <= y_i(T) e^{-delta (t - T)} + tol, L4 non-increasing
/// between consecutive samples, and the terminal error norm
/// |(xi, z, y)| below the threshold. S(t) > 1 + epsilon after T fails the
/// check with details["precondition_violations"] > 0.
VerificationReport check_extinction(const Trajectory& traj,
                                    const MultiCertificate& mc,
                                    const ExtinctionOptions& opts = {});

/// S > 0, x > 0, y_i >= 0 at every sample. The margin is min(S, x) (and any
/// negative y_i); this check passes only on a strictly positive margin.
VerificationReport check_invariance(const Trajectory& traj);

}  // namespace chemostat
