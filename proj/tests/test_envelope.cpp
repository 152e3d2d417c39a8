#include <cmath>

#include <gtest/gtest.h>

#include "chemostat/envelope.hpp"

using namespace chemostat;

namespace {

const ModelParams kParams(10.0, 0.5);

TEST(IssEnvelope, VanishesAtZero) {
  const auto env = iss_envelope(kParams, 5e-4);
  EXPECT_EQ(env.omega(0.0), 0.0);
  EXPECT_EQ(env.gamma(0.0), 0.0);
  for (double t : {0.0, 1.0, 100.0}) EXPECT_EQ(env.beta(0.0, t), 0.0);
}

TEST(IssEnvelope, OmegaAtOne) {
  const auto env = iss_envelope(kParams, 5e-4);
  // log(1 + Omega(1)) = e - 2 + kappa / (d_o - ubar).
  const double w = 448.4444444444444 / (7.0 / 3.0 - 5e-4);
  EXPECT_NEAR(w, 192.2316687, 1e-6);
  EXPECT_NEAR(std::log1p(env.omega(1.0)), std::exp(1.0) - 2.0 + w, 1e-10);
  EXPECT_GT(env.omega(1.0), 1e83);
}

TEST(IssEnvelope, ClassProperties) {
  const auto env = iss_envelope(kParams, 5e-4);
  double prev_g = 0.0, prev_o = 0.0;
  for (int i = -12; i <= 6; ++i) {
    const double r = std::pow(10.0, 0.5 * i);
    const double g = env.gamma(r);
    const double o = env.omega(r);
    EXPECT_GT(g, prev_g) << r;
    if (std::isfinite(prev_o)) {
      EXPECT_GE(o, prev_o) << r;
    }
    prev_g = g;
    prev_o = o;
  }
  EXPECT_TRUE(std::isinf(env.gamma(1e300)) || env.gamma(1e300) > 1e100);

  // beta(s, .) non-increasing, beta(., t) increasing, beta(s, t) -> 0.
  for (double s : {1e-6, 1e-3, 0.05}) {
    double prev = INFINITY;
    for (double t = 0.0; t <= 1e46; t = t == 0.0 ? 1.0 : t * 10.0) {
      const double b = env.beta(s, t);
      EXPECT_LE(b, prev);
      prev = b;
    }
    EXPECT_LT(prev, 1e-6);
  }
  for (double t : {0.0, 10.0, 1e44}) {
    double prev = 0.0;
    for (double s : {1e-8, 1e-6, 1e-4, 1e-2}) {
      const double b = env.beta(s, t);
      EXPECT_GT(b, prev);
      prev = b;
    }
  }
}

TEST(IssEnvelope, RequiresIssCertificate) {
  const auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  EXPECT_THROW(iss_envelope(cert), std::invalid_argument);
}

TEST(IissEnvelope, CircleExtrema) {
  const auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  const auto env = iiss_envelope(cert);
  const double w = env.weight();
  EXPECT_EQ(env.circle_min(0.0), 0.0);
  for (double r : {1e-3, 0.1, 1.0, 3.0}) {
    // Brute-force over the circle.
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double th = 2.0 * M_PI * i / 100000.0;
      const double xi = r * std::cos(th), z = r * std::sin(th);
      const double v = log_error_potential(xi) + w * z * z;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LE(env.circle_min(r), lo * (1 + 1e-9));
    EXPECT_NEAR(env.circle_min(r), lo, 1e-6 * lo);
    EXPECT_GE(env.circle_max(r), hi * (1 - 1e-9));
    EXPECT_NEAR(env.circle_max(r), hi, 1e-6 * hi);
  }
}

TEST(IissEnvelope, RhoUnderestimatesNorm) {
  const auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  const auto env = iiss_envelope(cert);
  // If L3 = w then |e| >= rho(w): check on points with known L3.
  for (double r : {1e-6, 1e-3, 0.05, 0.5, 2.0, 10.0}) {
    EXPECT_LE(env.rho(env.circle_max(r)), r * (1 + 1e-12));
    EXPECT_GT(env.rho(env.circle_max(r)), 0.9 * r);
  }
  EXPECT_EQ(env.rho(0.0), 0.0);
}

TEST(IissEnvelope, BetaIsDecreasingComparisonSolution) {
  const auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  const auto env = iiss_envelope(cert);
  EXPECT_EQ(env.beta(0.0, 5.0), 0.0);
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.5 * i);
  const auto path = env.beta_path(1.0, times);
  EXPECT_EQ(path.front(), env.circle_max(1.0));
  for (std::size_t i = 1; i < path.size(); ++i) EXPECT_LE(path[i], path[i - 1]);
  EXPECT_LT(path.back(), path.front());
  EXPECT_NEAR(env.beta(1.0, 50.0), path.back(), 1e-12 * path.front());
  EXPECT_EQ(env.delta2(0.5), cert.c2);
  EXPECT_EQ(env.gamma3(0.0), 0.0);
}

TEST(IissEnvelope, RequiresSmallUbar) {
  auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  cert.ubar = 1.0;
  EXPECT_THROW(iiss_envelope(cert), std::invalid_argument);
}

}  // namespace
