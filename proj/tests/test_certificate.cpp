#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "chemostat/certificate.hpp"
#include "chemostat/controller.hpp"

using namespace chemostat;

namespace {

const ModelParams kParams(10.0, 0.5);

// Reference values from an independent multiprecision evaluation.
constexpr double kUbarMax = 5.33304554099152e-4;
constexpr double kC2Half = 23.43876478068852;
constexpr double kC3Half = 5.20257684080935e-4;
constexpr double kC4Half = 9.13205496422174e-44;

TEST(Constants, Examples) {
  const auto k = constants(kParams);
  EXPECT_EQ(k.c, 98.0);
  EXPECT_NEAR(k.kappa, 448.444444, 1e-6);
  EXPECT_DOUBLE_EQ(k.kappa, 4.0 + 2000.0 / 4.5);
  EXPECT_EQ(k.c1, 0.2);
}

TEST(DisturbanceCap, Example) {
  const double cap = disturbance_cap(kParams);
  EXPECT_NEAR(cap, kUbarMax, 1e-15);
  EXPECT_LT(cap, dilution_bounds(kParams).d_o / 2.0);
}

TEST(DisturbanceCap, PositiveAndBelowHalfDo) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> as(0.05, 5.0);
  std::uniform_real_distribution<double> extra(1e-3, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double a = as(rng);
    const ModelParams p(4.0 * a + 1.0 + extra(rng), a);
    const double cap = disturbance_cap(p);
    EXPECT_GT(cap, 0.0);
    EXPECT_LE(cap, dilution_bounds(p).d_o / 2.0);
  }
}

TEST(Constants, GainRelationHoldsAtCap) {
  // ubar C2(ubar) <= C1 / 8 at ubar = ubar_max.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> as(0.05, 5.0);
  std::uniform_real_distribution<double> extra(1e-3, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double a = as(rng);
    const ModelParams p(4.0 * a + 1.0 + extra(rng), a);
    const auto k = constants(p);
    const double u = disturbance_cap(p);
    const double c2 = (1.0 / k.c1 + 2.0 * k.kappa * k.c) * u;
    EXPECT_LE(u * c2, k.c1 / 8.0 * (1.0 + 1e-12));
  }
}

TEST(Constants, CTildeBoundedByC) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> as(0.05, 5.0);
  std::uniform_real_distribution<double> extra(1e-3, 50.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = as(rng);
    const ModelParams p(4.0 * a + 1.0 + extra(rng), a);
    const auto b = dilution_bounds(p);
    const double u = frac(rng) * b.d_o / 2.0;
    const double ct = 2.0 * (b.d_bar + u) / (b.d_o - u);
    EXPECT_LE(0.5 * ct * ct, constants(p).c * (1.0 + 1e-12));
  }
}

TEST(Lyapunov, Examples) {
  const auto cert = make_certificate(kParams, 5e-4);
  auto v = lyapunov({0.0, 0.0}, cert);
  EXPECT_EQ(v.L1, 0.0);
  EXPECT_EQ(v.L2, 0.0);
  EXPECT_EQ(v.L3, 0.0);
  EXPECT_EQ(v.V, 0.0);

  v = lyapunov({0.0, std::log(2.0)}, cert);
  EXPECT_NEAR(v.L1, 0.306853, 1e-6);
  EXPECT_DOUBLE_EQ(v.L1, 1.0 - std::log(2.0));
  EXPECT_EQ(v.L2, 0.0);
  EXPECT_EQ(v.L3, v.L1);
  EXPECT_NEAR(v.V, 0.359141, 1e-6);

  v = lyapunov({0.1, 0.0}, cert);
  EXPECT_NEAR(v.L2, 0.004287, 1e-6);
  EXPECT_NEAR(v.L2, 0.004286632849896406, 1e-17);
}

TEST(Lyapunov, PositiveDefiniteAndRadiallyUnbounded) {
  const LyapunovWeights w{448.0, 7.0 / 3.0, 1e-4};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const ErrorCoords e{pick(rng), pick(rng)};
    if (e.z_tilde == 0.0 && e.xi_tilde == 0.0) continue;
    EXPECT_GT(lyapunov(e, w).L3, 0.0);
  }
  double prev = 0.0;
  for (double r : {1.0, 10.0, 100.0, 1000.0}) {
    const double lz = lyapunov({r, 0.0}, w).L3;
    const double lxp = lyapunov({0.0, r}, w).L3;
    const double lxm = lyapunov({0.0, -r}, w).L3;
    EXPECT_GT(lz, prev);
    EXPECT_GT(lxm, r - 1.0 - 1e-9);
    EXPECT_GT(lxp, lxm);
    prev = lz;
  }
}

TEST(LogErrorPotential, SeriesMatchesClosedForm) {
  for (double xi : {-0.5, -0.02, -0.011, 0.011, 0.02, 0.3}) {
    EXPECT_NEAR(log_error_potential(xi), std::expm1(xi) - xi, 1e-17);
  }
  for (double xi : {-0.0099, -1e-5, 1e-5, 0.0099}) {
    // Taylor series in long double: sum_{k>=2} xi^k / k!.
    long double term = static_cast<long double>(xi) * xi / 2, sum = 0;
    for (int k = 3; k < 30; ++k) {
      sum += term;
      term *= static_cast<long double>(xi) / k;
    }
    const double exact = static_cast<double>(sum);
    EXPECT_NEAR(log_error_potential(xi), exact, 1e-15 * exact + 1e-30);
  }
}

TEST(DecayConstants, Examples) {
  const auto d = decay_constants(kParams, 5e-4);
  EXPECT_NEAR(d.c2, 43.950, 1e-3);
  EXPECT_NEAR(d.c2, 43.95005555555556, 1e-11);
  EXPECT_GT(d.c3, 0.0);
  EXPECT_GT(d.c4, 0.0);
  EXPECT_TRUE(std::isfinite(d.c3));
  EXPECT_LE(d.c5, 0.025);
}

TEST(DecayConstants, MatchAnalyticMinima) {
  const auto cert = make_certificate(kParams);
  EXPECT_DOUBLE_EQ(cert.ubar, kUbarMax / 2.0);
  EXPECT_NEAR(cert.c2, kC2Half, 1e-12);
  EXPECT_NEAR(cert.c3 / kC3Half, 1.0, 1e-9);
  EXPECT_NEAR(cert.c4 / kC4Half, 1.0, 1e-9);
  EXPECT_EQ(cert.c5, cert.c4);
}

TEST(DecayConstants, RejectsOutOfRange) {
  EXPECT_THROW(decay_constants(kParams, 0.0), AdmissibilityError);
  EXPECT_THROW(decay_constants(kParams, kUbarMax * 1.001), AdmissibilityError);
  EXPECT_THROW(make_certificate(kParams, 1.0), AdmissibilityError);
}

TEST(Certificate, IissMode) {
  const auto cert = make_certificate(kParams, 0.5, DisturbanceMode::iiss);
  EXPECT_NEAR(cert.c2, 43950.05555555556, 1e-8);
  EXPECT_FALSE(cert.has_decay_constants());
  EXPECT_THROW(make_certificate(kParams, 1.0, DisturbanceMode::iiss), AdmissibilityError);
}

TEST(Certificate, JsonRoundTrip) {
  for (auto mode : {DisturbanceMode::iss, DisturbanceMode::iiss}) {
    const auto cert = make_certificate(kParams, mode == DisturbanceMode::iss ? 1e-4 : 0.3, mode);
    const nlohmann::json j = cert;
    for (const char* key : {"d_o", "d_bar", "c", "kappa", "c1", "c2", "c3", "c4", "c5", "ubar",
                            "ubar_max"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    const auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.c2, cert.c2);
    EXPECT_EQ(back.kappa, cert.kappa);
    EXPECT_EQ(back.mode, cert.mode);
    EXPECT_EQ(back.has_decay_constants(), cert.has_decay_constants());
    if (cert.has_decay_constants()) {
      EXPECT_EQ(back.c4, cert.c4);
    }
  }
}

TEST(Certificate, JsonMissingField) {
  nlohmann::json j = make_certificate(kParams);
  j.erase("kappa");
  try {
    certificate_from_json(j);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
  }
}

TEST(MultiCertificate, Examples) {
  const std::vector<SpeciesGrowth> g = {{1.0, 1.0}};
  const auto mc = multi_certificate(kParams, g, 0.1, 0.0);
  EXPECT_NEAR(mc.delta, 1.809524, 1e-6);
  EXPECT_NEAR(mc.delta, 7.0 / 3.0 - 1.1 / 2.1, 1e-15);
  EXPECT_NEAR(mc.A, 176.842, 1e-3);
  EXPECT_NEAR(mc.A, 176.8421052631579, 1e-11);

  const auto none = multi_certificate(kParams, {}, 0.1, 0.0);
  EXPECT_DOUBLE_EQ(none.delta, 7.0 / 3.0);
  EXPECT_EQ(none.A, 0.0);

  EXPECT_EQ(lyapunov_multi({0.0, 0.0}, std::vector<double>{0.0}, mc), 0.0);
}

TEST(MultiCertificate, RejectsSpeciesAtDo) {
  // nu(1.1) = m 1.1 / (a + 1.1) = 7/3 with a = 1.
  const double m = 7.0 / 3.0 * 2.1 / 1.1;
  const std::vector<SpeciesGrowth> g = {{0.5, 1.0}, {m, 1.0}};
  try {
    multi_certificate(kParams, g, 0.1, 0.0);
    FAIL();
  } catch (const AdmissibilityError& e) {
    EXPECT_NE(std::string(e.what()).find("species 2"), std::string::npos);
  }
}

}  // namespace
