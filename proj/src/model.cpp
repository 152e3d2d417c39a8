#include "chemostat/model.hpp"

#include <sstream>

#include "chemostat/controller.hpp"

namespace chemostat {

namespace {

constexpr double kExtinctionFloor = 1e-300;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

}  // namespace

ModelParams::ModelParams(double m, double a) : m_(m), a_(a) {
  if (!(m > 0.0) || !(a > 0.0)) {
    throw AdmissibilityError("Monod parameters must satisfy m > 0 and a > 0");
  }
  if (!(m > 4.0 * a + 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "Monod parameters must satisfy m > 4a + 1 (m = " << m
       << ", 4a + 1 = " << 4.0 * a + 1.0 << ")";
    throw AdmissibilityError(os.str());
  }
}

bool in_interior(const State& s) { return s.S > 0.0 && s.x > 0.0; }

bool in_closure(const State& s) { return s.S >= 0.0 && s.x >= 0.0; }

bool admissible(const AugmentedState& s) {
  if (!(s.S > 0.0 && s.x > 0.0)) return false;
  for (double yi : s.y) {
    if (!(yi >= 0.0)) return false;
  }
  return true;
}

void validate_species(std::span<const SpeciesGrowth> growths, double d_o) {
  for (std::size_t i = 0; i < growths.size(); ++i) {
    const auto& g = growths[i];
    if (!(g.m > 0.0) || !(g.a > 0.0)) {
      throw AdmissibilityError("species " + std::to_string(i + 1) +
                               ": growth parameters must be positive");
    }
    if (!(g(1.0) < d_o)) {
      std::ostringstream os;
      os.precision(17);
      os << "species " << i + 1 << ": nu(1) = " << g(1.0)
         << " must be below d_o = " << d_o;
      throw AdmissibilityError(os.str());
    }
  }
}

std::string to_string(DisturbanceMode mode) {
  return mode == DisturbanceMode::iss ? "iss" : "iiss";
}

DisturbanceMode disturbance_mode_from_string(const std::string& text) {
  if (text == "iss" || text == "ISS") return DisturbanceMode::iss;
  if (text == "iiss" || text == "iISS" || text == "IISS") {
    return DisturbanceMode::iiss;
  }
  throw std::invalid_argument("unknown disturbance mode '" + text + "'");
}

DisturbanceSpec::DisturbanceSpec(Signal signal, double ubar,
                                 DisturbanceMode mode)
    : signal_(std::move(signal)), ubar_(ubar), mode_(mode) {
  if (!signal_) throw std::invalid_argument("disturbance signal is empty");
  if (!(ubar >= 0.0) || !std::isfinite(ubar)) {
    throw AdmissibilityError("disturbance bound must be finite and >= 0");
  }
}

DisturbanceSpec DisturbanceSpec::zero(double ubar, DisturbanceMode mode) {
  return {[](double) { return Disturbance{}; }, ubar, mode};
}

Disturbance DisturbanceSpec::operator()(double t) const {
  if (!signal_) return {};
  const Disturbance u = signal_(t);
  if (!(std::abs(u.u1) <= ubar_) || !(std::abs(u.u2) <= ubar_)) {
    std::ostringstream os;
    os.precision(17);
    os << "disturbance (" << u.u1 << ", " << u.u2 << ") at t = " << t
       << " exceeds declared bound " << ubar_;
    throw AdmissibilityError(os.str());
  }
  return u;
}

double monod(double S, const ModelParams& params) {
  if (!(S >= 0.0)) throw DomainError(describe("monod: S must be >= 0", S));
  return params.m() * S / (params.a() + S);
}

Vec2 rhs_perturbed(double /*t*/, const State& s, double D, const Disturbance& u,
                   const ModelParams& params) {
  const double mu = params.m() * s.S / (params.a() + s.S);
  const double dil = D + u.u1;
  return {dil * (1.0 + u.u2 - s.S) - mu * s.x, s.x * (mu - dil)};
}

void rhs_multi(double /*t*/, const AugmentedState& s, double D,
               std::span<const SpeciesGrowth> growths,
               const ModelParams& params, std::span<double> out) {
  if (growths.size() != s.y.size() || out.size() != s.y.size() + 2) {
    throw std::invalid_argument("rhs_multi: dimension mismatch");
  }
  const double mu = params.m() * s.S / (params.a() + s.S);
  double uptake = mu * s.x;
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    const double nu = growths[i](s.S);
    uptake += nu * s.y[i];
    out[i + 2] = s.y[i] * (nu - D);
  }
  out[0] = D * (1.0 - s.S) - uptake;
  out[1] = s.x * (mu - D);
}

std::vector<double> rhs_multi(double t, const AugmentedState& s, double D,
                              std::span<const SpeciesGrowth> growths,
                              const ModelParams& params) {
  std::vector<double> out(s.y.size() + 2);
  rhs_multi(t, s, D, growths, params, out);
  return out;
}

ErrorCoords error_coords(const State& s, double t) {
  if (!(s.x > 0.0)) {
    throw DomainError(describe("error_coords: x must be > 0", s.x));
  }
  if (s.x < kExtinctionFloor) {
    throw ExtinctionWarning(
        describe("error_coords: species concentration is numerically extinct",
                 s.x));
  }
  const double x_r = reference_sinusoidal(t).x_r;
  return {s.S + s.x - 1.0, std::log(s.x) - std::log(x_r)};
}

State state_from_error(const ErrorCoords& e, double t) {
  const double x = reference_sinusoidal(t).x_r * std::exp(e.xi_tilde);
  return {e.z_tilde + 1.0 - x, x};
}

Vec2 rhs_error(double t, const ErrorCoords& e, const Disturbance& u, double D,
               const ModelParams& params) {
  const auto ref = reference_sinusoidal(t);
  const double x = ref.x_r * std::exp(e.xi_tilde);
  const double z = e.z_tilde + 1.0;
  const double S = z - x;
  if (!(S > 0.0)) {
    throw DomainError(describe("rhs_error: reconstructed S must be > 0", S));
  }
  const double ma = params.m() * params.a();
  const double dz = -(D + u.u1) * (e.z_tilde - u.u2);
  // a + z_r - e^{xi_r} = a + S_r
  const double dxi = ma * (e.z_tilde - ref.x_r * std::expm1(e.xi_tilde)) /
                         ((params.a() + S) * (params.a() + ref.S_r)) -
                     u.u1;
  return {dz, dxi};
}

}  // namespace chemostat
