#include "chemostat/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// L3 restricted to the circle of radius r, parametrized by xi in [-r, r]:
// L1(xi) + w (r^2 - xi^2).
double on_circle(double xi, double r, double weight) {
  return log_error_potential(xi) + weight * std::max(0.0, r * r - xi * xi);
}

// Extremum of on_circle over [-r, r]: scan, then golden section around the
// best scanned point. sign = +1 minimizes, -1 maximizes.
double circle_extremum(double r, double weight, double sign) {
  if (r == 0.0) return 0.0;
  constexpr int kScan = 256;
  auto f = [&](double xi) { return sign * on_circle(xi, r, weight); };

  double best_xi = -r;
  double best = f(-r);
  for (int i = 1; i <= kScan; ++i) {
    const double xi = -r + 2.0 * r * static_cast<double>(i) / kScan;
    const double v = f(xi);
    if (v < best) {
      best = v;
      best_xi = xi;
    }
  }
  if (const double v0 = f(0.0); v0 < best) {
    best = v0;
    best_xi = 0.0;
  }

  const double cell = 2.0 * r / kScan;
  double lo = std::max(-r, best_xi - cell);
  double hi = std::min(r, best_xi + cell);
  constexpr double kPhi = 0.6180339887498949;
  double x1 = hi - kPhi * (hi - lo);
  double x2 = lo + kPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, r); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  best = std::min({best, f1, f2});
  return sign * best;
}

}  // namespace

IssEnvelope::IssEnvelope(double kappa, double d_o, double ubar, double c2,
                         double c5)
    : weight_(kappa / (d_o - ubar)), c2_(c2), c5_(c5) {
  if (!(weight_ > 0.0) || !(c2 >= 0.0) || !(c5 > 0.0)) {
    throw std::invalid_argument("ISS envelope needs kappa, d_o - ubar, C5 > 0");
  }
}

double IssEnvelope::omega(double r) const {
  return std::expm1(log_error_potential(r) + weight_ * r * r);
}

double IssEnvelope::beta(double s, double t) const {
  const double om = omega(s);
  if (om == 0.0) return 0.0;
  if (std::isinf(om)) return kInf;
  const double decayed = om * std::exp(-c5_ * t);
  return 4.0 * std::sqrt(decayed * (1.0 + 1.0 / weight_)) +
         std::expm1(4.0 * std::sqrt(decayed));
}

double IssEnvelope::gamma(double r) const {
  return 4.0 * std::sqrt(c2_ * (1.0 + 1.0 / weight_) * r) +
         std::expm1(4.0 * std::sqrt(c2_ * r));
}

IssEnvelope iss_envelope(const Certificate& cert) {
  if (!cert.has_decay_constants()) {
    throw std::invalid_argument("ISS envelope requires an ISS-mode certificate");
  }
  return {cert.kappa, cert.d_o, cert.ubar, cert.c2, cert.c5};
}

IssEnvelope iss_envelope(const ModelParams& params, double ubar) {
  return iss_envelope(make_certificate(params, ubar, DisturbanceMode::iss));
}

IissEnvelope::IissEnvelope(double kappa, double d_o, double ubar, double c1,
                           double c2)
    : weight_(kappa / (d_o - ubar)), c1_(c1), c2_(c2) {
  if (!(weight_ > 0.0) || !(c1 > 0.0) || !(c2 >= 0.0)) {
    throw std::invalid_argument("iISS envelope needs kappa, d_o - ubar, C1 > 0");
  }
  constexpr std::size_t kTable = 2048;
  constexpr double kRMin = 1e-9;
  constexpr double kRMax = 50.0;
  radii_.resize(kTable);
  maxima_.resize(kTable);
  double running = 0.0;
  for (std::size_t i = 0; i < kTable; ++i) {
    const double r = kRMin * std::pow(kRMax / kRMin, static_cast<double>(i) /
                                                         (kTable - 1));
    radii_[i] = r;
    running = std::max(running, circle_max(r));
    maxima_[i] = running;
  }
}

double IissEnvelope::circle_min(double r) const {
  return circle_extremum(std::abs(r), weight_, 1.0);
}

double IissEnvelope::circle_max(double r) const {
  return circle_extremum(std::abs(r), weight_, -1.0);
}

double IissEnvelope::gamma3(double s) const {
  const double d = std::expm1(-s);
  return 0.5 * c1_ * d * d;
}

double IissEnvelope::rho(double w) const {
  if (!(w > 0.0)) return 0.0;
  if (w <= maxima_.front()) return radii_.front() * w / maxima_.front();
  if (w >= maxima_.back()) return radii_.back();
  const auto it = std::upper_bound(maxima_.begin(), maxima_.end(), w);
  const auto hi = static_cast<std::size_t>(it - maxima_.begin());
  const auto lo = hi - 1;
  const double span = maxima_[hi] - maxima_[lo];
  if (span <= 0.0) return radii_[lo];
  return radii_[lo] + (radii_[hi] - radii_[lo]) * (w - maxima_[lo]) / span;
}

std::vector<double> IissEnvelope::beta_path(
    double s, std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  double w = circle_max(s);
  double tau = 0.0;
  constexpr double kMaxStep = 1e-2;
  auto rate = [this](double v) { return -decay_rate(std::max(v, 0.0)); };
  for (double target : times) {
    if (target < tau) {
      throw std::invalid_argument("beta_path: times must be non-decreasing");
    }
    while (tau < target) {
      const double h = std::min(kMaxStep, target - tau);
      const double k1 = rate(w);
      const double k2 = rate(w + 0.5 * h * k1);
      const double k3 = rate(w + 0.5 * h * k2);
      const double k4 = rate(w + h * k3);
      w = std::max(0.0, w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      tau = (target - tau <= kMaxStep) ? target : tau + h;
    }
    out.push_back(w);
  }
  return out;
}

double IissEnvelope::beta(double s, double t) const {
  const double times[] = {t};
  return beta_path(s, times).front();
}

IissEnvelope iiss_envelope(const Certificate& cert) {
  if (!(cert.ubar > 0.0) || !(cert.ubar < std::min(1.0, cert.d_o))) {
    throw std::invalid_argument("iISS envelope requires ubar < min{1, d_o}");
  }
  return {cert.kappa, cert.d_o, cert.ubar, cert.c1, cert.c2};
}

}  // namespace chemostat
