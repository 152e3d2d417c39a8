#include "chemostat/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemostat {

ReferencePoint reference_sinusoidal(double t) {
  const double c = 0.25 * std::cos(t);
  return {0.5 - c, 0.5 + c};
}

ReferencePoint reference_sinusoidal_rate(double t) {
  const double s = 0.25 * std::sin(t);
  return {s, -s};
}

double dilution_sinusoidal(double t, const ModelParams& params) {
  const double c = std::cos(t);
  return std::sin(t) / (2.0 + c) +
         params.m() * (2.0 - c) / (4.0 * params.a() + 2.0 - c);
}

DilutionBounds dilution_bounds(const ModelParams& params) {
  const double m = params.m();
  const double a = params.a();
  return {m / (4.0 * a + 1.0) - 1.0, 1.0 + 3.0 * m / (4.0 * a + 3.0)};
}

ReferenceSpec sinusoidal_reference_spec() {
  return {[](double t) { return reference_sinusoidal(t).x_r; },
          [](double t) { return reference_sinusoidal_rate(t).x_r; }, 0.25};
}

DilutionProfile::DilutionProfile(std::function<double(double)> law,
                                 double d_o, double d_bar)
    : law_(std::move(law)), d_o_(d_o), d_bar_(d_bar) {
  if (!law_) throw std::invalid_argument("dilution law is empty");
  if (!(d_o > 0.0) || !(d_bar >= d_o)) {
    throw AdmissibilityError("dilution bounds must satisfy 0 < d_o <= d_bar");
  }
}

DilutionProfile DilutionProfile::sinusoidal(const ModelParams& params) {
  const auto bounds = dilution_bounds(params);
  return {[params](double t) { return dilution_sinusoidal(t, params); },
          bounds.d_o, bounds.d_bar};
}

DilutionProfile design_general(const ReferenceSpec& ref,
                               const ModelParams& params,
                               const DesignGrid& grid) {
  if (!ref.x_r || !ref.dx_r) {
    throw std::invalid_argument("reference requires x_r and its derivative");
  }
  if (!(ref.ell > 0.0)) {
    throw AdmissibilityError("reference lower bound ell must be positive");
  }
  if (grid.points < 2 || !(grid.t_end > grid.t_begin)) {
    throw std::invalid_argument("design grid needs >= 2 points on t_end > t_begin");
  }

  auto law = [ref, params](double t) {
    const double x_r = ref.x_r(t);
    return -ref.dx_r(t) / x_r + monod(1.0 - x_r, params);
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double step =
      (grid.t_end - grid.t_begin) / static_cast<double>(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double t = grid.t_begin + static_cast<double>(i) * step;
    const double x_r = ref.x_r(t);
    const double dx_r = ref.dx_r(t);
    if (!(std::max(ref.ell, std::abs(dx_r)) <= x_r) || !(x_r <= 0.75)) {
      std::ostringstream os;
      os.precision(17);
      os << "reference inadmissible at t = " << t << ": x_r = " << x_r
         << ", |x_r'| = " << std::abs(dx_r) << ", ell = " << ref.ell;
      throw ReferenceAdmissibilityError(os.str(), t);
    }
    const double d = law(t);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo > 0.0)) {
    throw AdmissibilityError("designed dilution rate is not positive on the grid");
  }
  return {std::move(law), lo * grid.lower_safety, hi * grid.upper_safety};
}

}  // namespace chemostat
