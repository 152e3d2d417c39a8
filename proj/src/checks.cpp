#include "chemostat/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemostat/controller.hpp"

namespace chemostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tracks the minimum margin and where it occurred.
class WorstTracker {
 public:
  void offer(double margin, const Sample& s) {
    if (first_ || margin < worst_) {
      first_ = false;
      worst_ = margin;
      t_ = s.t;
      state_ = {s.S, s.x};
      state_.insert(state_.end(), s.y.begin(), s.y.end());
    }
  }

  void fill(VerificationReport& r) const {
    r.worst_margin = first_ ? kInf : worst_;
    r.worst_t = t_;
    r.worst_state = state_;
  }

 private:
  bool first_ = true;
  double worst_ = kInf;
  double t_ = 0.0;
  std::vector<double> state_;
};

VerificationReport start(const char* id, const Trajectory& traj,
                         double tolerance) {
  if (traj.empty()) throw std::invalid_argument("trajectory has no samples");
  VerificationReport r;
  r.check = id;
  r.n_samples = traj.size();
  r.tolerance = tolerance;
  return r;
}

void require_disturbance(const Trajectory& traj) {
  if (!traj.has_disturbance) {
    throw std::invalid_argument("trajectory lacks the disturbance channels u1, u2");
  }
}

ErrorCoords error_of(const Sample& s) { return error_coords({s.S, s.x}, s.t); }

// (sign of b) * e^L3 * |b| without overflow into NaN.
double scaled_margin(double l3, double bracket) {
  if (bracket == 0.0) return 0.0;
  if (l3 < 700.0) return bracket * std::exp(l3);
  return bracket > 0.0 ? kInf : -kInf;
}

}  // namespace

void to_json(nlohmann::json& j, const VerificationReport& r) {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  j = nlohmann::json{{"check", r.check},
                     {"n_samples", r.n_samples},
                     {"worst_margin", finite_or_null(r.worst_margin)},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass},
                     {"worst_t", r.worst_t},
                     {"worst_state", r.worst_state}};
  if (!std::isfinite(r.worst_margin)) {
    j["worst_margin_sign"] = r.worst_margin > 0 ? "+inf" : "-inf";
  }
  auto details = nlohmann::json::object();
  for (const auto& [k, v] : r.details) details[k] = finite_or_null(v);
  j["details"] = details;
}

VerificationReport check_decay(const Trajectory& traj, const Certificate& cert,
                               double tolerance) {
  require_disturbance(traj);
  if (!cert.has_decay_constants()) {
    throw ModeMismatch("decay check requires an ISS-mode certificate (C5 undefined)");
  }
  auto report = start("decay", traj, tolerance);
  const ModelParams params = cert.params();
  const LyapunovWeights w = weights_of(cert);
  WorstTracker worst;
  std::size_t large = 0;
  std::size_t compact = 0;

  for (const auto& s : traj.samples) {
    const ErrorCoords e = error_of(s);
    const Disturbance u{s.u1, s.u2};
    const Vec2 de = rhs_error(s.t, e, u, s.D, params);
    const LyapunovValues lv = lyapunov(e, w);
    const double dev = std::expm1(e.xi_tilde);
    const double dl3 = dev * de[1] + w.kappa * 2.0 * e.z_tilde * de[0] * w.l2_scale();
    const double un = u.norm();

    double margin;
    if (lv.L3 < 700.0) {
      margin = -cert.c5 * lv.V + cert.c2 * un - std::exp(lv.L3) * dl3;
    } else {
      // Divide through by e^L3 to keep the sign without overflow.
      const double bracket = cert.c5 * std::expm1(-lv.L3) +
                             cert.c2 * un * std::exp(-lv.L3) - dl3;
      margin = scaled_margin(lv.L3, bracket);
    }
    worst.offer(margin, s);

    if (dev * dev + e.z_tilde * e.z_tilde >= kCompactSetRadius2) {
      ++large;
    } else {
      ++compact;
    }
  }
  worst.fill(report);
  report.pass = report.worst_margin >= -tolerance;
  report.details["case_1b"] = static_cast<double>(large);
  report.details["case_2b"] = static_cast<double>(compact);
  return report;
}

VerificationReport check_iss(const Trajectory& traj, const IssEnvelope& env,
                             double tolerance) {
  require_disturbance(traj);
  auto report = start("iss", traj, tolerance);
  const Sample& first = traj.samples.front();
  const double s0 = error_of(first).norm();
  double sup_u = 0.0;
  WorstTracker worst;
  for (const auto& s : traj.samples) {
    sup_u = std::max(sup_u, Disturbance{s.u1, s.u2}.norm());
    const double xi = error_of(s).xi_tilde;
    const double lhs = std::hypot(s.S - reference_sinusoidal(s.t).S_r, xi);
    const double rhs = env.beta(s0, s.t - first.t) + env.gamma(sup_u);
    worst.offer(rhs - lhs, s);
  }
  worst.fill(report);
  report.pass = report.worst_margin >= -tolerance;
  report.details["initial_error_norm"] = s0;
  report.details["sup_u"] = sup_u;
  return report;
}

double delta2_integral(const Trajectory& traj, double c2) {
  double total = 0.0;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const auto& a = traj.samples[k - 1];
    const auto& b = traj.samples[k];
    const double fa = 2.0 * c2 * Disturbance{a.u1, a.u2}.norm();
    const double fb = 2.0 * c2 * Disturbance{b.u1, b.u2}.norm();
    total += 0.5 * (b.t - a.t) * (fa + fb);
  }
  return total;
}

VerificationReport iiss_check(const Trajectory& traj, const Certificate& cert,
                              double tolerance) {
  require_disturbance(traj);
  if (cert.mode != DisturbanceMode::iiss) {
    throw ModeMismatch("iISS check requires an iISS-mode certificate");
  }
  auto report = start("iiss", traj, tolerance);
  const IissEnvelope env = iiss_envelope(cert);
  const Sample& first = traj.samples.front();
  const double s0 = error_of(first).norm();

  std::vector<double> offsets;
  offsets.reserve(traj.size());
  for (const auto& s : traj.samples) offsets.push_back(s.t - first.t);
  const std::vector<double> beta = env.beta_path(s0, offsets);

  WorstTracker worst;
  double integral = 0.0;
  double prev_rate = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Sample& s = traj.samples[k];
    const double rate = env.delta2(Disturbance{s.u1, s.u2}.norm());
    if (k > 0) integral += 0.5 * (s.t - traj.samples[k - 1].t) * (prev_rate + rate);
    prev_rate = rate;
    const double lhs = env.delta1(error_of(s).norm());
    worst.offer(beta[k] + integral - lhs, s);
  }
  worst.fill(report);
  report.pass = report.worst_margin >= -tolerance;
  report.details["delta2_integral"] = integral;
  report.details["initial_error_norm"] = s0;
  return report;
}

std::optional<double> settling_time(const Trajectory& traj, double epsilon) {
  if (traj.empty() || traj.samples.back().S > 1.0 + epsilon) return std::nullopt;
  std::size_t k = traj.size() - 1;
  while (k > 0 && traj.samples[k - 1].S <= 1.0 + epsilon) --k;
  return traj.samples[k].t;
}

VerificationReport check_extinction(const Trajectory& traj,
                                    const MultiCertificate& mc,
                                    const ExtinctionOptions& opts) {
  auto report = start("extinction", traj, opts.tolerance);
  if (traj.n_species != mc.n) {
    throw std::invalid_argument("trajectory species count does not match the certificate");
  }
  if (!(traj.samples.back().t > mc.T)) {
    throw std::invalid_argument("trajectory horizon does not exceed the settling time T");
  }
  auto it = std::find_if(traj.samples.begin(), traj.samples.end(),
                         [&](const Sample& s) { return s.t >= mc.T; });
  const Sample& anchor = *it;

  WorstTracker worst;
  std::size_t violations = 0;
  double worst_decay = kInf;
  double worst_l4 = kInf;
  double prev_l4 = 0.0;
  for (auto k = it; k != traj.samples.end(); ++k) {
    const Sample& s = *k;
    if (s.S > 1.0 + mc.epsilon) ++violations;
    const double factor = std::exp(-mc.delta * (s.t - anchor.t));
    for (std::size_t i = 0; i < mc.n; ++i) {
      const double margin = anchor.y[i] * factor - s.y[i];
      worst_decay = std::min(worst_decay, margin);
      worst.offer(margin, s);
    }
    const double l4 = lyapunov_multi(error_of(s), s.y, mc);
    if (k != it) {
      const double margin = prev_l4 - l4;
      worst_l4 = std::min(worst_l4, margin);
      worst.offer(margin, s);
    }
    prev_l4 = l4;
  }

  const Sample& last = traj.samples.back();
  const ErrorCoords e_end = error_of(last);
  double norm2 = e_end.xi_tilde * e_end.xi_tilde + e_end.z_tilde * e_end.z_tilde;
  for (double yi : last.y) norm2 += yi * yi;
  const double terminal = std::sqrt(norm2);
  worst.offer(opts.terminal_threshold - terminal, last);

  worst.fill(report);
  report.pass = violations == 0 && report.worst_margin >= -opts.tolerance;
  report.details["T"] = anchor.t;
  report.details["delta"] = mc.delta;
  report.details["precondition_violations"] = static_cast<double>(violations);
  report.details["worst_decay_margin"] = worst_decay;
  report.details["worst_l4_increase_margin"] = worst_l4;
  report.details["terminal_error_norm"] = terminal;
  return report;
}

VerificationReport check_invariance(const Trajectory& traj) {
  auto report = start("invariance", traj, 0.0);
  WorstTracker worst;
  for (const auto& s : traj.samples) {
    double margin = std::min(s.S, s.x);
    for (double yi : s.y) {
      if (yi < 0.0) margin = std::min(margin, yi);
    }
    worst.offer(margin, s);
  }
  worst.fill(report);
  report.pass = report.worst_margin > 0.0;
  return report;
}

}  // namespace chemostat
