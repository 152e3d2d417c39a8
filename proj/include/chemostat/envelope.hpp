#pragma once

// Comparison-function envelopes turning the Lyapunov decay into explicit
// tracking bounds.

#include <span>
#include <vector>

#include "chemostat/certificate.hpp"

namespace chemostat {

/// ISS envelope
///   Omega(r)  = exp(e^r - 1 - r + w r^2) - 1,  w = kappa / (d_o - ubar)
///   beta(s,t) = 4 sqrt(Omega(s) e^{-C5 t} (1 + 1/w)) + exp(4 sqrt(Omega(s) e^{-C5 t})) - 1
///   gamma(r)  = 4 sqrt(C2 (1 + 1/w) r) + exp(4 sqrt(C2 r)) - 1
/// Values overflow to +inf for large arguments; that is still a valid bound.
class IssEnvelope {
 public:
  IssEnvelope(double kappa, double d_o, double ubar, double c2, double c5);

  double omega(double r) const;
  double beta(double s, double t) const;
  double gamma(double r) const;

 private:
  double weight_;
  double c2_;
  double c5_;
};

/// Requires an ISS-mode certificate (C5 defined).
IssEnvelope iss_envelope(const Certificate& cert);
IssEnvelope iss_envelope(const ModelParams& params, double ubar);

/// iISS envelope built from the comparison
///   L3' <= -gamma3(rho(L3)) + C2 |u|,  gamma3(s) = C1 (e^{-s} - 1)^2 / 2,
/// where rho inverts the largest value of L3 on the circle of radius r.
///   delta1(r)  = smallest value of L3 on the circle of radius r
///   delta2(r)  = 2 C2 r
///   beta(s, t) = solution at t of w' = -gamma3(rho(w)), w(0) = max of L3
///                on the circle of radius s.
class IissEnvelope {
 public:
  IissEnvelope(double kappa, double d_o, double ubar, double c1, double c2);

  double circle_min(double r) const;
  double circle_max(double r) const;
  double delta1(double r) const { return circle_min(r); }
  double delta2(double r) const { return 2.0 * c2_ * r; }
  double gamma3(double s) const;

  /// Lower bound on |(xi, z)| given L3 = w: inverse of circle_max through
  /// chords of a table, which under-approximates since circle_max is
  /// convex. Saturates at the largest tabulated radius.
  double rho(double w) const;
  double decay_rate(double w) const { return gamma3(rho(w)); }

  /// Comparison solution started at circle_max(s), evaluated at offsets
  /// `times` (non-decreasing, first >= 0).
  std::vector<double> beta_path(double s, std::span<const double> times) const;
  double beta(double s, double t) const;

  double weight() const { return weight_; }

 private:
  double weight_;
  double c1_;
  double c2_;
  // circle_max tabulated on log-spaced radii; rho interpolates in it.
  std::vector<double> radii_;
  std::vector<double> maxima_;
};

/// Requires ubar < min{1, d_o}.
IissEnvelope iiss_envelope(const Certificate& cert);

}  // namespace chemostat
