#pragma once

// Explicit Runge-Kutta integration with positivity guarding.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemostat {

enum class StepMethod { fixed_rk4, adaptive_rk45 };

std::string to_string(StepMethod method);
StepMethod step_method_from_string(const std::string& text);

struct IntegratorConfig {
  double h = 1e-3;
  double t0 = 0.0;
  double tf = 60.0;
  std::size_t record_every = 1;
  StepMethod method = StepMethod::fixed_rk4;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double positivity_floor = 1e-12;
  int max_halvings = 20;

  /// Throws std::invalid_argument on h <= 0, tf <= t0, non-positive
  /// tolerances or record_every == 0.
  void validate() const;
};

/// dy/dt = f(t, y), written into `dy` (same length as y).
using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Domain guard: the first `n_positive` components must stay above the floor,
/// the remaining ones must stay >= 0 unless `nonnegative_rest` is off.
struct PositivityGuard {
  std::size_t n_positive = 2;
  bool nonnegative_rest = true;
};

class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double t, std::vector<double> state);
  double t() const { return t_; }
  const std::vector<double>& state() const { return state_; }

 private:
  double t_;
  std::vector<double> state_;
};

struct IntegrationStats {
  std::size_t steps = 0;       ///< accepted steps, including halved pieces
  std::size_t halvings = 0;    ///< steps retried because of a floor breach
  std::size_t rejected = 0;    ///< adaptive steps rejected by error control
};

/// Recorded knots of a numerical solution.
struct Solution {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  IntegrationStats stats;
};

/// Integrates over [t0, tf]. Fixed mode takes ceil((tf - t0)/h) steps at
/// t_k = t0 + k h (the last one shortened to land on tf) and records every
/// `record_every`-th knot plus the final one. A step that breaches the guard
/// is replaced by two half steps, recursively up to `max_halvings` levels.
Solution integrate(const RhsFn& rhs, std::span<const double> y0,
                   const IntegratorConfig& cfg, const PositivityGuard& guard = {});

/// Same algorithm with every step split into `factor` equal substeps. The
/// recorded knots coincide bit-for-bit with those of integrate(cfg); with
/// factor == 1 the result is identical.
Solution oracle_integrate(const RhsFn& rhs, std::span<const double> y0,
                          const IntegratorConfig& cfg,
                          const PositivityGuard& guard = {}, std::size_t factor = 100);

}  // namespace chemostat
