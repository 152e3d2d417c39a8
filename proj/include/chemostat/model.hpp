#pragma once

// Normalized single-species chemostat with a perturbed dilution rate, its
// multi-species augmentation, and the transformed tracking-error dynamics.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemostat {

/// Raised when an argument leaves the domain of a model function
/// (negative concentration, reconstructed substrate <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The tracked species concentration is numerically extinct (x < 1e-300),
/// so the log-error would be -inf.
class ExtinctionWarning : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Violated admissibility condition on constructed inputs.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Vec2 = std::array<double, 2>;

/// Dimensionless Monod pair mu(S) = m S / (a + S) for the tracked species.
/// Construction enforces m > 0, a > 0 and m > 4a + 1.
class ModelParams {
 public:
  ModelParams(double m, double a);

  double m() const { return m_; }
  double a() const { return a_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double m_;
  double a_;
};

/// Interior state (S, x); both components are expected positive.
struct State {
  double S = 0.0;
  double x = 0.0;
};

/// (S, x, y_1..y_n) for the augmented multi-species model.
struct AugmentedState {
  double S = 0.0;
  double x = 0.0;
  std::vector<double> y;
};

/// True when S > 0 and x > 0.
bool in_interior(const State& s);
/// Non-strict variant S >= 0, x >= 0 used for boundary tests.
bool in_closure(const State& s);
/// S > 0, x > 0 and every y_i >= 0.
bool admissible(const AugmentedState& s);

/// Monod growth for an extra species, nu(S) = m S / (a + S).
struct SpeciesGrowth {
  double m = 0.0;
  double a = 0.0;

  double operator()(double S) const { return m * S / (a + S); }
};

/// Checks m_i, a_i > 0 and nu_i(1) < d_o for every extra species.
void validate_species(std::span<const SpeciesGrowth> growths, double d_o);

/// Instantaneous disturbance value (u1 on the dilution, u2 on the inflow).
struct Disturbance {
  double u1 = 0.0;
  double u2 = 0.0;

  double norm() const { return std::hypot(u1, u2); }
};

enum class DisturbanceMode { iss, iiss };

std::string to_string(DisturbanceMode mode);
DisturbanceMode disturbance_mode_from_string(const std::string& text);

/// Time-dependent disturbance with a declared sup-norm bound. Every
/// evaluation spot-checks |u1|, |u2| <= ubar.
class DisturbanceSpec {
 public:
  using Signal = std::function<Disturbance(double)>;

  DisturbanceSpec() = default;
  DisturbanceSpec(Signal signal, double ubar, DisturbanceMode mode);

  static DisturbanceSpec zero(double ubar, DisturbanceMode mode);

  Disturbance operator()(double t) const;

  double ubar() const { return ubar_; }
  DisturbanceMode mode() const { return mode_; }

 private:
  Signal signal_;
  double ubar_ = 0.0;
  DisturbanceMode mode_ = DisturbanceMode::iss;
};

/// Transformed error: z_tilde = S + x - 1, xi_tilde = ln x - ln x_r(t).
struct ErrorCoords {
  double z_tilde = 0.0;
  double xi_tilde = 0.0;

  double norm() const { return std::hypot(z_tilde, xi_tilde); }
};

/// mu(S) = m S / (a + S). Throws DomainError for S < 0.
double monod(double S, const ModelParams& params);

/// (dS/dt, dx/dt) of the perturbed chemostat
///   S' = (D + u1)(1 + u2 - S) - mu(S) x,   x' = x (mu(S) - D - u1).
Vec2 rhs_perturbed(double t, const State& s, double D, const Disturbance& u,
                   const ModelParams& params);

/// Augmented unperturbed model with n extra species competing for S.
/// Writes (S', x', y_1', ..., y_n') into `out`, which must have n + 2 slots.
void rhs_multi(double t, const AugmentedState& s, double D,
               std::span<const SpeciesGrowth> growths,
               const ModelParams& params, std::span<double> out);

std::vector<double> rhs_multi(double t, const AugmentedState& s, double D,
                              std::span<const SpeciesGrowth> growths,
                              const ModelParams& params);

/// Error coordinates against the sinusoidal reference. Throws
/// ExtinctionWarning when x < 1e-300 and DomainError when x <= 0.
ErrorCoords error_coords(const State& s, double t);

/// Inverse of error_coords: x = x_r(t) e^xi_tilde, S = z_tilde + 1 - x.
State state_from_error(const ErrorCoords& e, double t);

/// (z_tilde', xi_tilde') of the error dynamics. Throws DomainError when the
/// reconstructed substrate a + z - e^xi leaves (0, inf) in the sense S <= 0.
Vec2 rhs_error(double t, const ErrorCoords& e, const Disturbance& u, double D,
               const ModelParams& params);

}  // namespace chemostat
