#include "chemostat/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chemostat {

namespace {

std::string describe(double t, std::span<const double> y) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t = %.17g, state = (", t);
  std::string out = buf;
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", y[i]);
    out += buf;
  }
  return out + ")";
}

bool inside(std::span<const double> y, const PositivityGuard& guard, double floor) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < guard.n_positive) {
      if (!(y[i] > floor)) return false;
    } else if (guard.nonnegative_rest && !(y[i] >= 0.0)) {
      return false;
    }
  }
  return true;
}

class Rk4 {
 public:
  Rk4(const RhsFn& rhs, std::size_t n, const PositivityGuard& guard,
      const IntegratorConfig& cfg, IntegrationStats& stats)
      : rhs_(rhs), guard_(guard), cfg_(cfg), stats_(stats),
        k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n), out_(n) {}

  // Advances y from t by h in place, splitting on guard breaches.
  void advance(double t, double h, std::vector<double>& y, int depth) {
    const std::size_t n = y.size();
    rhs_(t, y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    rhs_(t + 0.5 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
    rhs_(t + 0.5 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
    rhs_(t + h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      out_[i] = y[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    if (inside(out_, guard_, cfg_.positivity_floor)) {
      y.swap(out_);
      ++stats_.steps;
      return;
    }
    if (depth >= cfg_.max_halvings) {
      throw IntegrationFailure("positivity floor breached after " +
                                   std::to_string(depth) + " step halvings at " +
                                   describe(t, y),
                               t, y);
    }
    ++stats_.halvings;
    advance(t, 0.5 * h, y, depth + 1);
    advance(t + 0.5 * h, 0.5 * h, y, depth + 1);
  }

 private:
  const RhsFn& rhs_;
  const PositivityGuard& guard_;
  const IntegratorConfig& cfg_;
  IntegrationStats& stats_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_, out_;
};

Solution fixed_rk4(const RhsFn& rhs, std::span<const double> y0,
                   const IntegratorConfig& cfg, const PositivityGuard& guard,
                   std::size_t factor) {
  Solution sol;
  std::vector<double> y(y0.begin(), y0.end());
  Rk4 stepper(rhs, y.size(), guard, cfg, sol.stats);

  const double span = cfg.tf - cfg.t0;
  auto n_steps = static_cast<std::size_t>(std::ceil(span / cfg.h));
  // Absorb a sliver of a final step produced by rounding of span / h.
  if (n_steps > 1 && cfg.t0 + static_cast<double>(n_steps - 1) * cfg.h >=
                         cfg.tf - 1e-12 * std::max(1.0, std::abs(cfg.tf))) {
    --n_steps;
  }
  auto knot = [&](std::size_t k) {
    return k == n_steps ? cfg.tf : cfg.t0 + static_cast<double>(k) * cfg.h;
  };

  const std::size_t expected = n_steps / cfg.record_every + 2;
  sol.t.reserve(expected);
  sol.y.reserve(expected);
  sol.t.push_back(cfg.t0);
  sol.y.push_back(y);
  const auto sub = static_cast<double>(factor);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double ta = knot(k);
    const double len = knot(k + 1) - ta;
    for (std::size_t j = 0; j < factor; ++j) {
      const double ts = ta + len * (static_cast<double>(j) / sub);
      const double te = j + 1 == factor ? ta + len : ta + len * (static_cast<double>(j + 1) / sub);
      stepper.advance(ts, te - ts, y, 0);
    }
    if ((k + 1) % cfg.record_every == 0 || k + 1 == n_steps) {
      sol.t.push_back(knot(k + 1));
      sol.y.push_back(y);
    }
  }
  return sol;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

Solution adaptive_rk45(const RhsFn& rhs, std::span<const double> y0,
                       const IntegratorConfig& cfg, const PositivityGuard& guard) {
  Solution sol;
  const std::size_t n = y0.size();
  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), yn(n);

  sol.t.push_back(cfg.t0);
  sol.y.push_back(y);
  double t = cfg.t0;
  double h = std::min(cfg.h, cfg.tf - cfg.t0);
  double err_prev = 1e-4;
  int breaches = 0;
  std::size_t accepted = 0;
  rhs(t, y, k1);

  while (t < cfg.tf) {
    const bool last = t + h >= cfg.tf;
    if (last) h = cfg.tf - t;
    if (!(h > 1e-14 * std::max(1.0, std::abs(t)))) {
      throw IntegrationFailure("adaptive step size underflow at " + describe(t, y), t, y);
    }
    auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& [k, c] : terms) acc += c * (*k)[i];
        out[i] = y[i] + h * acc;
      }
    };
    stage(tmp, {{&k1, a21}});
    rhs(t + c2 * h, tmp, k2);
    stage(tmp, {{&k1, a31}, {&k2, a32}});
    rhs(t + c3 * h, tmp, k3);
    stage(tmp, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    rhs(t + c4 * h, tmp, k4);
    stage(tmp, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    rhs(t + c5 * h, tmp, k5);
    stage(tmp, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    rhs(t + h, tmp, k6);
    stage(yn, {{&k1, b1}, {&k3, b3}, {&k4, b4}, {&k5, b5}, {&k6, b6}});

    if (!inside(yn, guard, cfg.positivity_floor)) {
      if (++breaches > cfg.max_halvings) {
        throw IntegrationFailure("positivity floor breached after " +
                                     std::to_string(cfg.max_halvings) +
                                     " step halvings at " + describe(t, y),
                                 t, y);
      }
      ++sol.stats.halvings;
      h *= 0.5;
      continue;
    }
    rhs(t + h, yn, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double est = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(yn[i]));
      err = std::max(err, std::abs(est) / scale);
    }

    if (err <= 1.0) {
      t = last ? cfg.tf : t + h;
      y.swap(yn);
      k1.swap(k7);
      breaches = 0;
      ++sol.stats.steps;
      ++accepted;
      if (accepted % cfg.record_every == 0 || t >= cfg.tf) {
        sol.t.push_back(t);
        sol.y.push_back(y);
      }
      // PI controller.
      const double e = std::max(err, 1e-10);
      const double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = e;
    } else {
      ++sol.stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
    }
  }
  return sol;
}

}  // namespace

std::string to_string(StepMethod method) {
  return method == StepMethod::fixed_rk4 ? "fixed_rk4" : "adaptive_rk45";
}

StepMethod step_method_from_string(const std::string& text) {
  if (text == "fixed_rk4") return StepMethod::fixed_rk4;
  if (text == "adaptive_rk45") return StepMethod::adaptive_rk45;
  throw std::invalid_argument("unknown integrator method '" + text +
                              "' (expected fixed_rk4 or adaptive_rk45)");
}

void IntegratorConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("integrator: h must be > 0");
  if (!(tf > t0)) throw std::invalid_argument("integrator: tf must exceed t0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrator: tolerances must be > 0");
  }
  if (record_every == 0) throw std::invalid_argument("integrator: record_every must be >= 1");
  if (!(positivity_floor >= 0.0)) {
    throw std::invalid_argument("integrator: positivity_floor must be >= 0");
  }
  if (max_halvings < 0) throw std::invalid_argument("integrator: max_halvings must be >= 0");
}

IntegrationFailure::IntegrationFailure(const std::string& what, double t,
                                       std::vector<double> state)
    : std::runtime_error(what), t_(t), state_(std::move(state)) {}

Solution integrate(const RhsFn& rhs, std::span<const double> y0,
                   const IntegratorConfig& cfg, const PositivityGuard& guard) {
  cfg.validate();
  if (!inside(y0, guard, 0.0)) {
    throw std::invalid_argument("initial state outside the admissible domain: " +
                                describe(cfg.t0, y0));
  }
  if (cfg.method == StepMethod::adaptive_rk45) return adaptive_rk45(rhs, y0, cfg, guard);
  return fixed_rk4(rhs, y0, cfg, guard, 1);
}

Solution oracle_integrate(const RhsFn& rhs, std::span<const double> y0,
                          const IntegratorConfig& cfg, const PositivityGuard& guard,
                          std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("oracle factor must be >= 1");
  if (factor == 1 || cfg.method == StepMethod::adaptive_rk45) {
    // Adaptive runs refine through the tolerances instead of the step.
    IntegratorConfig fine = cfg;
    if (cfg.method == StepMethod::adaptive_rk45) {
      fine.rel_tol /= static_cast<double>(factor);
      fine.abs_tol /= static_cast<double>(factor);
    }
    return integrate(rhs, y0, fine, guard);
  }
  cfg.validate();
  if (!inside(y0, guard, 0.0)) {
    throw std::invalid_argument("initial state outside the admissible domain: " +
                                describe(cfg.t0, y0));
  }
  return fixed_rk4(rhs, y0, cfg, guard, factor);
}

}  // namespace chemostat
