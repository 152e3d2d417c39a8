#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "chemostat/controller.hpp"

using namespace chemostat;
using std::numbers::pi;

namespace {

const ModelParams kParams(10.0, 0.5);

TEST(Reference, Examples) {
  auto r = reference_sinusoidal(0.0);
  EXPECT_EQ(r.S_r, 0.25);
  EXPECT_EQ(r.x_r, 0.75);
  r = reference_sinusoidal(pi);
  EXPECT_DOUBLE_EQ(r.S_r, 0.75);
  EXPECT_DOUBLE_EQ(r.x_r, 0.25);
  r = reference_sinusoidal(pi / 2);
  EXPECT_NEAR(r.S_r, 0.5, 1e-16);
  EXPECT_NEAR(r.x_r, 0.5, 1e-16);
}

TEST(Dilution, Examples) {
  EXPECT_NEAR(dilution_sinusoidal(0.0, kParams), 10.0 / 3.0, 1e-15);
  EXPECT_NEAR(dilution_sinusoidal(pi, kParams), 6.0, 1e-15);
}

TEST(Dilution, BoundsAndContainment) {
  const auto b = dilution_bounds(kParams);
  EXPECT_DOUBLE_EQ(b.d_o, 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.d_bar, 7.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = 2.0 * pi * i / 10000.0;
    const double D = dilution_sinusoidal(t, kParams);
    EXPECT_GE(D, b.d_o);
    EXPECT_LE(D, b.d_bar);
  }
}

TEST(Dilution, LowerBoundVanishesAtAdmissibilityBoundary) {
  double prev = INFINITY;
  for (double eps : {1.0, 1e-2, 1e-4, 1e-8}) {
    const double d_o = dilution_bounds(ModelParams(3.0 + eps, 0.5)).d_o;
    EXPECT_GT(d_o, 0.0);
    EXPECT_LT(d_o, prev);
    prev = d_o;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(Dilution, Periodic) {
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.013 * i;
    EXPECT_NEAR(dilution_sinusoidal(t + 2.0 * pi, kParams), dilution_sinusoidal(t, kParams),
                4e-15);
  }
}

TEST(Reference, ResidualOnGrid) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = 2.0 * pi * i / 9999.0;
    const auto r = reference_sinusoidal(t);
    const auto dr = reference_sinusoidal_rate(t);
    const double D = dilution_sinusoidal(t, kParams);
    const double mu = monod(r.S_r, kParams);
    const double res = std::abs(dr.S_r - D * (1.0 - r.S_r) + mu * r.x_r) +
                       std::abs(dr.x_r - r.x_r * (mu - D));
    worst = std::max(worst, res);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(DilutionProfile, RejectsBadBounds) {
  EXPECT_THROW(DilutionProfile([](double) { return 1.0; }, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(DilutionProfile([](double) { return 1.0; }, 2.0, 1.0), std::invalid_argument);
}

TEST(DesignGeneral, ReproducesSinusoidalLaw) {
  DesignGrid grid;
  grid.points = 20000;
  const auto profile = design_general(sinusoidal_reference_spec(), kParams, grid);
  for (int i = 0; i < 20000; ++i) {
    const double t = 2.0 * pi * i / 19999.0;
    EXPECT_NEAR(profile(t), dilution_sinusoidal(t, kParams), 1e-12);
  }
  EXPECT_GT(profile.d_o(), 0.0);
  EXPECT_LE(profile.d_o(), 7.0);
  EXPECT_GE(profile.d_bar(), profile.d_o());
}

TEST(DesignGeneral, ConstantReference) {
  ReferenceSpec ref{[](double) { return 0.5; }, [](double) { return 0.0; }, 0.5};
  const auto profile = design_general(ref, kParams);
  EXPECT_DOUBLE_EQ(profile(0.0), 5.0);
  EXPECT_DOUBLE_EQ(profile(3.7), 5.0);
  EXPECT_DOUBLE_EQ(profile.d_o(), 0.99 * 5.0);
  EXPECT_DOUBLE_EQ(profile.d_bar(), 1.01 * 5.0);
}

TEST(DesignGeneral, RejectsReferenceAboveThreeQuarters) {
  ReferenceSpec ref{[](double) { return 0.8; }, [](double) { return 0.0; }, 0.5};
  try {
    design_general(ref, kParams);
    FAIL() << "expected rejection";
  } catch (const ReferenceAdmissibilityError& e) {
    EXPECT_EQ(e.t(), 0.0);
  }
}

TEST(DesignGeneral, RejectsReferenceBelowEll) {
  ReferenceSpec ref{[](double t) { return 0.5 + 0.25 * std::cos(t); },
                    [](double t) { return -0.25 * std::sin(t); }, 0.3};
  try {
    design_general(ref, kParams);
    FAIL() << "expected rejection";
  } catch (const ReferenceAdmissibilityError& e) {
    EXPECT_LT(0.5 + 0.25 * std::cos(e.t()), 0.3);
  }
}

}  // namespace
