#pragma once

// Reference trajectory and designed dilution laws.

#include <cstddef>
#include <functional>
#include <numbers>

#include "chemostat/model.hpp"

namespace chemostat {

struct ReferencePoint {
  double S_r = 0.0;
  double x_r = 0.0;
};

/// (S_r, x_r) = (1/2 - cos(t)/4, 1/2 + cos(t)/4).
ReferencePoint reference_sinusoidal(double t);

/// d/dt of the sinusoidal reference, (sin(t)/4, -sin(t)/4).
ReferencePoint reference_sinusoidal_rate(double t);

/// D(t) = sin t / (2 + cos t) + m (2 - cos t) / (4a + 2 - cos t).
double dilution_sinusoidal(double t, const ModelParams& params);

struct DilutionBounds {
  double d_o = 0.0;    ///< lower bound m/(4a+1) - 1
  double d_bar = 0.0;  ///< upper bound 1 + 3m/(4a+3)
};

DilutionBounds dilution_bounds(const ModelParams& params);

/// A general species reference x_r with its exact derivative. Admissible
/// when max{ell, |x_r'(t)|} <= x_r(t) <= 3/4; then S_r = 1 - x_r.
struct ReferenceSpec {
  std::function<double(double)> x_r;
  std::function<double(double)> dx_r;
  double ell = 0.0;
};

ReferenceSpec sinusoidal_reference_spec();

/// Dilution law D(t) with positive bounds d_o <= D(t) <= d_bar.
class DilutionProfile {
 public:
  DilutionProfile(std::function<double(double)> law, double d_o, double d_bar);

  /// The closed-form sinusoidal law with its analytic bounds.
  static DilutionProfile sinusoidal(const ModelParams& params);

  double operator()(double t) const { return law_(t); }
  double d_o() const { return d_o_; }
  double d_bar() const { return d_bar_; }

 private:
  std::function<double(double)> law_;
  double d_o_;
  double d_bar_;
};

/// Sampling grid for validating a general reference and estimating bounds.
struct DesignGrid {
  double t_begin = 0.0;
  double t_end = 2.0 * std::numbers::pi;
  std::size_t points = 100000;
  double lower_safety = 0.99;
  double upper_safety = 1.01;
};

/// Rejection of a general reference at a specific sampled time.
class ReferenceAdmissibilityError : public AdmissibilityError {
 public:
  ReferenceAdmissibilityError(const std::string& what, double t)
      : AdmissibilityError(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// D(t) = -x_r'(t)/x_r(t) + mu(1 - x_r(t)). Bounds are the grid min/max
/// scaled by the safety factors.
DilutionProfile design_general(const ReferenceSpec& ref,
                               const ModelParams& params,
                               const DesignGrid& grid = {});

}  // namespace chemostat
