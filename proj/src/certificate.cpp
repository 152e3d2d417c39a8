#include "chemostat/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chemostat/controller.hpp"

namespace chemostat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double log_error_potential(double xi) {
  if (std::abs(xi) < 1e-2) {
    // Truncation after xi^9 / 9! is below 1e-20 relative here.
    constexpr double inv_fact[] = {1.0 / 2,    1.0 / 6,     1.0 / 24,     1.0 / 120,
                                   1.0 / 720,  1.0 / 5040,  1.0 / 40320,  1.0 / 362880};
    double sum = 0.0;
    for (int k = 7; k >= 0; --k) sum = sum * xi + inv_fact[k];
    return xi * xi * sum;
  }
  return std::expm1(xi) - xi;
}

CoreConstants constants(const ModelParams& params) {
  const double m = params.m();
  const double a = params.a();
  const auto b = dilution_bounds(params);
  const double ratio = 0.5 + b.d_bar / b.d_o;
  const double c = 8.0 * ratio * ratio;
  const double k1 = 112.0 * m / (4.0 * a + 1.0);
  const double k2 = 16.0 * m * (4.0 * a + 3.0) * (a + 2.0) /
                    (a * (4.0 * a + 1.0) * (4.0 * a + 1.0));
  const double kappa = 4.0 + std::max(k1, k2);
  const double c1 = std::min(
      {1.0, kappa / 200.0, m * a / (2.0 * (4.0 * a + 3.0) * (a + 2.0))});
  return {c, kappa, c1};
}

double disturbance_cap(const ModelParams& params) {
  const auto k = constants(params);
  const double d_o = dilution_bounds(params).d_o;
  return std::min(k.c1 / std::sqrt(8.0 * (1.0 + 2.0 * k.c * k.kappa * k.c1)),
                  d_o / 2.0);
}

double iiss_disturbance_cap(const ModelParams& params) {
  return std::min(1.0, dilution_bounds(params).d_o);
}

DecayConstants decay_constants(const ModelParams& params, double ubar,
                               const CompactGrid& grid) {
  const double cap = disturbance_cap(params);
  if (!(ubar > 0.0) || !(ubar < cap)) {
    throw AdmissibilityError("ubar = " + fmt(ubar) +
                             " outside the ISS range (0, " + fmt(cap) + ")");
  }
  const auto k = constants(params);
  const double d_o = dilution_bounds(params).d_o;

  DecayConstants out;
  out.c2 = (1.0 / k.c1 + 2.0 * k.kappa * k.c) * ubar;
  out.minima = minimize_on_compact_set(k.kappa / (d_o - ubar), grid);
  out.c3 = 0.5 * k.c1 * out.minima.dissipation.value;
  out.c4 = out.c3 * out.minima.saturation.value;
  if (!(out.c3 > 0.0) || !(out.c4 > 0.0)) {
    throw DomainError("compact-set constants underflow double precision (C3 = " +
                      fmt(out.c3) + ", C4 = " + fmt(out.c4) + ")");
  }
  out.c5 = std::min(out.c4, k.c1 / 8.0);
  return out;
}

bool Certificate::has_decay_constants() const {
  return std::isfinite(c3) && std::isfinite(c4) && std::isfinite(c5);
}

Certificate make_certificate(const ModelParams& params,
                             std::optional<double> ubar, DisturbanceMode mode,
                             const CompactGrid& grid) {
  const auto k = constants(params);
  const auto b = dilution_bounds(params);
  Certificate cert;
  cert.m = params.m();
  cert.a = params.a();
  cert.mode = mode;
  cert.d_o = b.d_o;
  cert.d_bar = b.d_bar;
  cert.c = k.c;
  cert.kappa = k.kappa;
  cert.c1 = k.c1;
  cert.ubar_max = disturbance_cap(params);
  cert.ubar = ubar.value_or(cert.ubar_max / 2.0);

  if (mode == DisturbanceMode::iss) {
    const auto decay = decay_constants(params, cert.ubar, grid);
    cert.c2 = decay.c2;
    cert.c3 = decay.c3;
    cert.c4 = decay.c4;
    cert.c5 = decay.c5;
  } else {
    const double cap = iiss_disturbance_cap(params);
    if (!(cert.ubar > 0.0) || !(cert.ubar < cap)) {
      throw AdmissibilityError("ubar = " + fmt(cert.ubar) +
                               " outside the iISS range (0, " + fmt(cap) + ")");
    }
    cert.c2 = (1.0 / k.c1 + 2.0 * k.kappa * k.c) * cert.ubar;
    cert.c3 = cert.c4 = cert.c5 = kNaN;
  }
  return cert;
}

void validate_disturbance(const DisturbanceSpec& spec,
                          const ModelParams& params) {
  const double ubar = spec.ubar();
  const double cap = spec.mode() == DisturbanceMode::iss
                         ? disturbance_cap(params)
                         : iiss_disturbance_cap(params);
  if (!(ubar < cap)) {
    throw AdmissibilityError("disturbance bound " + fmt(ubar) + " must be below " +
                             fmt(cap) + " in " + to_string(spec.mode()) +
                             " mode");
  }
}

LyapunovWeights weights_of(const Certificate& cert) {
  return {cert.kappa, cert.d_o, cert.ubar};
}

LyapunovValues lyapunov(const ErrorCoords& e, const LyapunovWeights& w) {
  LyapunovValues v;
  v.L1 = log_error_potential(e.xi_tilde);
  v.L2 = e.z_tilde * e.z_tilde * w.l2_scale();
  v.L3 = v.L1 + w.kappa * v.L2;
  v.V = std::expm1(v.L3);
  return v;
}

LyapunovValues lyapunov(const ErrorCoords& e, const Certificate& cert) {
  return lyapunov(e, weights_of(cert));
}

MultiCertificate multi_certificate(const ModelParams& params,
                                   std::span<const SpeciesGrowth> growths,
                                   double epsilon, double T) {
  if (!(epsilon > 0.0)) throw AdmissibilityError("epsilon must be positive");
  if (!(T >= 0.0)) throw AdmissibilityError("settling time must be >= 0");
  const double d_o = dilution_bounds(params).d_o;
  double worst = 0.0;
  for (std::size_t i = 0; i < growths.size(); ++i) {
    const double rate = growths[i](1.0 + epsilon);
    if (!(rate < d_o)) {
      throw AdmissibilityError("species " + std::to_string(i + 1) +
                               ": nu(1 + epsilon) = " + fmt(rate) +
                               " is not below d_o = " + fmt(d_o));
    }
    worst = std::max(worst, rate);
  }
  MultiCertificate mc;
  mc.epsilon = epsilon;
  mc.T = T;
  mc.delta = d_o - worst;
  mc.n = growths.size();
  const double n = static_cast<double>(mc.n);
  mc.A = 16.0 * params.m() * n * n / (params.a() * mc.delta);
  mc.d_o = d_o;
  mc.m = params.m();
  mc.a = params.a();
  return mc;
}

double lyapunov_multi(const ErrorCoords& e, std::span<const double> y,
                      const MultiCertificate& mc) {
  double sum = 0.0;
  for (double yi : y) sum += yi * yi;
  return log_error_potential(e.xi_tilde) +
         4.0 * mc.m / (mc.a * mc.d_o) * e.z_tilde * e.z_tilde + mc.A * sum;
}

void to_json(nlohmann::json& j, const Certificate& cert) {
  // NaN entries (iISS mode) serialize as null.
  j = nlohmann::json{{"m", cert.m},         {"a", cert.a},
                     {"mode", to_string(cert.mode)},
                     {"d_o", cert.d_o},     {"d_bar", cert.d_bar},
                     {"c", cert.c},         {"kappa", cert.kappa},
                     {"c1", cert.c1},       {"c2", cert.c2},
                     {"c3", cert.c3},       {"c4", cert.c4},
                     {"c5", cert.c5},       {"ubar", cert.ubar},
                     {"ubar_max", cert.ubar_max}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("certificate must be a JSON object");
  auto number = [&j](const char* key, bool nullable) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("certificate field '") + key +
                                  "' is missing");
    }
    const auto& v = j.at(key);
    if (v.is_null() && nullable) return kNaN;
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("certificate field '") + key +
                                  "' must be a number");
    }
    return v.get<double>();
  };
  Certificate cert;
  cert.m = number("m", false);
  cert.a = number("a", false);
  cert.mode = j.contains("mode")
                  ? disturbance_mode_from_string(j.at("mode").get<std::string>())
                  : DisturbanceMode::iss;
  cert.d_o = number("d_o", false);
  cert.d_bar = number("d_bar", false);
  cert.c = number("c", false);
  cert.kappa = number("kappa", false);
  cert.c1 = number("c1", false);
  cert.c2 = number("c2", false);
  cert.c3 = number("c3", true);
  cert.c4 = number("c4", true);
  cert.c5 = number("c5", true);
  cert.ubar = number("ubar", false);
  cert.ubar_max = number("ubar_max", false);
  // Validates the Monod pair as a side effect.
  (void)cert.params();
  return cert;
}

}  // namespace chemostat
