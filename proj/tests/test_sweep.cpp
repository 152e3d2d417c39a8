#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "chemostat/batch.hpp"
#include "chemostat/checks.hpp"
#include "chemostat/sweep.hpp"
#include "support.hpp"

using namespace chemostat;

namespace {

TEST(Batch, SerialAndParallelAgree) {
  const Job job = [](std::size_t i) {
    auto sc = fixtures::random_iss_scenario(i, 5.0);
    const auto r = run_scenario(sc);
    JobResult out;
    out.ok = true;
    out.values["S_end"] = r.trajectory.samples.back().S;
    out.values["x_end"] = r.trajectory.samples.back().x;
    if (i == 3) throw std::runtime_error("boom");
    return out;
  };
  const auto s = run_batch_serial(6, job);
  const auto p = run_batch_parallel(6, job, 3);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].ok, p[i].ok);
    EXPECT_EQ(s[i].values, p[i].values);
    EXPECT_EQ(s[i].error, p[i].error);
  }
  EXPECT_FALSE(s[3].ok);
  EXPECT_EQ(s[3].error, "boom");
}

TEST(Sweep, SinglePointMatchesSimulateAndVerify) {
  SweepSpec spec;
  spec.base = fixtures::pulse_scenario();
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  const auto traj = run_scenario(spec.base).trajectory;
  const auto report = check_decay(traj, make_certificate(spec.base.params));
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_EQ(rows[0].worst_decay_margin, report.worst_margin);
  EXPECT_EQ(rows[0].decay_pass, report.pass);
  const auto& last = traj.samples.back();
  EXPECT_EQ(rows[0].terminal_x_error, std::abs(last.x - last.x_r));
  EXPECT_TRUE(rows[0].invariance_pass);
}

TEST(Sweep, UbarFractionsKeepDecayMargin) {
  SweepSpec spec;
  spec.base = fixtures::random_iss_scenario(0, 20.0);
  spec.ubar_fraction = {0.25, 0.5, 1.0};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "ok") << r.message;
    EXPECT_GE(r.worst_decay_margin, -1e-9);
    EXPECT_TRUE(r.decay_pass);
  }
  EXPECT_LT(rows[2].ubar, rows[2].ubar_max);
  EXPECT_EQ(rows[2].ubar, std::nextafter(rows[2].ubar_max, 0.0));
}

TEST(Sweep, GridOverMonodPairs) {
  SweepSpec spec;
  spec.base = fixtures::random_iss_scenario(1, 10.0);
  spec.m = {8.0, 10.0, 14.0};
  spec.a = {0.25, 0.5, 1.0};
  spec.ubar_fraction = {0.5};
  spec.workers = 2;
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.invariance_pass) << r.m << " " << r.a << " " << r.message;
    EXPECT_EQ(r.halvings, 0u);
  }
  spec.workers = 1;
  const auto serial = run_sweep(spec);
  std::ostringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, serial);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, InvalidPointYieldsWarningRow) {
  SweepSpec spec;
  spec.base = fixtures::random_iss_scenario(1, 1.0);
  spec.m = {2.0, 10.0};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].status, "warning");
  EXPECT_NE(rows[0].message.find("skipped"), std::string::npos);
  EXPECT_EQ(rows[1].status, "ok");
}

TEST(Sweep, SpecFromJson) {
  nlohmann::json j;
  j["base"] = scenario_to_json(fixtures::pulse_scenario());
  j["grid"] = {{"m", {10, 12}}, {"seeds", {1, 2}}};
  j["workers"] = 2;
  const auto spec = sweep_spec_from_json(j);
  EXPECT_EQ(spec.m.size(), 2u);
  EXPECT_EQ(spec.seeds.size(), 2u);
  EXPECT_EQ(spec.workers, 2);
  j["grid"]["bogus"] = {1};
  EXPECT_THROW(sweep_spec_from_json(j), std::invalid_argument);
}

}  // namespace
