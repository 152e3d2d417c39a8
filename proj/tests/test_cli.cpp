#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chemostat/trajectory_csv.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("chemostat_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static int run(const std::string& args) {
    const std::string cmd = std::string(CHEMOSTAT_CLI) + " " + args + " > " + path("stdout") +
                            " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void write(const std::string& file, const std::string& text) {
    std::ofstream(file, std::ios::binary) << text;
  }

  static std::string pulse(const std::string& name, const std::string& disturbance) {
    const std::string file = path(name);
    write(file, R"({
  "id": ")" + name + R"(",
  "params": {"m": 10, "a": 0.5},
  "initial": {"S": 1, "x": 2},
  "disturbance": )" + disturbance + R"(,
  "integrator": {"h": 1e-3, "t0": 0, "tf": 60}
})");
    return file;
  }

  static inline fs::path dir_;
};

TEST_F(Cli, CertifyDefaults) {
  ASSERT_EQ(run("certify --m 10 --a 0.5"), 0);
  const auto j = json::parse(slurp(path("stdout")));
  EXPECT_NEAR(j["d_o"].get<double>(), 2.333333, 1e-6);
  EXPECT_EQ(j["d_bar"].get<double>(), 7.0);
  EXPECT_EQ(j["c"].get<double>(), 98.0);
  EXPECT_NEAR(j["kappa"].get<double>(), 448.444444, 1e-6);
  EXPECT_EQ(j["c1"].get<double>(), 0.2);
  EXPECT_NEAR(j["ubar_max"].get<double>(), 5.333e-4, 1e-7);
  EXPECT_EQ(j["ubar"].get<double>(), j["ubar_max"].get<double>() / 2);
}

TEST_F(Cli, CertifyRejections) {
  EXPECT_EQ(run("certify --m 3 --a 0.5"), 2);
  EXPECT_NE(slurp(path("stderr")).find("4a + 1"), std::string::npos);
  EXPECT_EQ(run("certify --m 10 --a 0.5 --ubar 1.0"), 2);
  EXPECT_EQ(run("certify --m 10"), 2);
  EXPECT_EQ(run("certify --m ten --a 0.5"), 2);
  EXPECT_EQ(run("certify --m 10 --a 0.5 --mode both"), 2);
}

TEST_F(Cli, UsageContract) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("verify --help"), 0);
  EXPECT_NE(slurp(path("stdout")).find("--check"), std::string::npos);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("launch"), 2);
  EXPECT_EQ(run("simulate --scenario " + path("does_not_exist.json") + " --out x.csv"), 2);
}

TEST_F(Cli, SimulateVerifyPlotPulse) {
  const auto sc = pulse("pulse", R"({"kind": "exp_decay", "amplitude": 0.5, "rate": 1,
    "channel": 1, "ubar": 0.5, "mode": "iiss"})");
  const auto csv = path("pulse.csv");
  ASSERT_EQ(run("simulate --scenario " + sc + " --out " + csv), 0);
  const auto traj = chemostat::read_trajectory_csv(csv);
  const auto& last = traj.samples.back();
  EXPECT_EQ(last.t, 60.0);
  EXPECT_LE(std::abs(last.x - last.x_r), 1e-2);

  ASSERT_EQ(run("certify --m 10 --a 0.5 --out " + path("cert.json")), 0);
  ASSERT_EQ(run("verify --trajectory " + csv + " --certificate " + path("cert.json") +
                " --check decay --check invariance --out " + path("report.json")),
            0);
  const auto report = json::parse(slurp(path("report.json")));
  EXPECT_TRUE(report["pass"].get<bool>());
  for (const auto& r : report["reports"]) {
    for (const char* key : {"check", "n_samples", "worst_margin", "pass", "worst_t"}) {
      EXPECT_TRUE(r.contains(key));
    }
    EXPECT_EQ(r["n_samples"].get<std::size_t>(), traj.size());
  }

  ASSERT_EQ(run("certify --m 10 --a 0.5 --ubar 0.5 --mode iiss --out " + path("icert.json")), 0);
  EXPECT_EQ(run("verify --trajectory " + csv + " --certificate " + path("icert.json") +
                " --check iiss"),
            0);
  // Mode mismatch is a schema error.
  EXPECT_EQ(run("verify --trajectory " + csv + " --certificate " + path("icert.json") +
                " --check decay"),
            2);
  EXPECT_EQ(run("verify --trajectory " + csv + " --check decay"), 2);
  EXPECT_EQ(run("verify --trajectory " + csv + " --certificate " + path("cert.json") +
                " --check nonsense"),
            2);

  const auto svg = path("pulse.svg");
  ASSERT_EQ(run("plot --csv " + csv + " --x t --y x:dashed --y x_r:solid --out " + svg), 0);
  const auto first = slurp(svg);
  ASSERT_EQ(run("plot --csv " + csv + " --x t --y x:dashed --y x_r:solid --out " + svg), 0);
  EXPECT_EQ(first, slurp(svg));
  EXPECT_EQ(run("plot --csv " + csv + " --x t --out " + svg), 2);
  EXPECT_EQ(run("plot --csv " + csv + " --y nope --out " + svg), 2);

  write(path("plot.json"), R"({"csv": ")" + csv + R"(", "out": ")" + path("fig2.svg") +
                               R"j(", "x": "t", "y": ["D"], "ylabel": "D(t)"})j");
  EXPECT_EQ(run("plot --spec " + path("plot.json")), 0);
  EXPECT_TRUE(fs::exists(path("fig2.svg")));
}

TEST_F(Cli, ZeroDisturbanceOnReference) {
  const auto file = path("onref.json");
  write(file, R"({"params": {"m": 10, "a": 0.5}, "initial": {"S": 0.25, "x": 0.75},
    "disturbance": {"kind": "zero", "ubar": 0, "mode": "iss"},
    "integrator": {"tf": 60}})");
  ASSERT_EQ(run("simulate --scenario " + file + " --out " + path("onref.csv")), 0);
  double worst = 0.0;
  for (const auto& s : chemostat::read_trajectory_csv(path("onref.csv")).samples) {
    worst = std::max(worst, std::abs(s.x - s.x_r));
  }
  EXPECT_LE(worst, 1e-7);
}

TEST_F(Cli, OutOfCertificateTrajectoryStillReports) {
  const double ubar = 10 * 5.33304554099152e-4;
  std::ostringstream d;
  d.precision(17);
  d << R"({"kind": "random", "seed": 9, "ubar": )" << ubar << R"(, "mode": "iss"})";
  const auto sc = pulse("big_u", d.str());
  ASSERT_EQ(run("simulate --scenario " + sc + " --out " + path("big_u.csv")), 0);
  EXPECT_NE(slurp(path("stderr")).find("warning"), std::string::npos);
  ASSERT_EQ(run("certify --m 10 --a 0.5 --out " + path("cert2.json")), 0);
  const int code = run("verify --trajectory " + path("big_u.csv") + " --certificate " +
                       path("cert2.json") + " --check decay");
  EXPECT_TRUE(code == 0 || code == 1);
  const auto report = json::parse(slurp(path("stdout")));
  EXPECT_TRUE(report["reports"][0].contains("worst_margin"));
}

TEST_F(Cli, Extinction) {
  const auto file = path("multi.json");
  write(file, R"({"params": {"m": 10, "a": 0.5}, "initial": {"S": 1, "x": 2, "y": [0.3]},
    "disturbance": {"kind": "zero", "ubar": 0, "mode": "iss"},
    "species": [{"m": 1, "a": 1}], "epsilon": 0.1})");
  ASSERT_EQ(run("simulate --scenario " + file + " --out " + path("multi.csv")), 0);
  ASSERT_EQ(run("verify --trajectory " + path("multi.csv") + " --scenario " + file +
                " --check extinction,invariance"),
            0);
  const auto report = json::parse(slurp(path("stdout")));
  EXPECT_NEAR(report["reports"][0]["details"]["delta"].get<double>(), 1.809524, 1e-6);
  EXPECT_EQ(run("verify --trajectory " + path("multi.csv") + " --check extinction"), 2);
}

TEST_F(Cli, Sweep) {
  const auto sc = path("sweep_base.json");
  write(path("sweep.json"), R"({
    "base": {"params": {"m": 10, "a": 0.5}, "initial": {"S": 1, "x": 2},
             "disturbance": {"kind": "random", "seed": 1, "ubar": 0.0001, "mode": "iss"},
             "integrator": {"tf": 5}},
    "grid": {"m": [2, 10], "ubar_fraction": [0.5]},
    "workers": 2})");
  ASSERT_EQ(run("sweep --spec " + path("sweep.json") + " --out " + path("sweep.csv")), 0);
  const auto text = slurp(path("sweep.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find(",warning,"), std::string::npos);
  EXPECT_NE(text.find(",ok,"), std::string::npos);
}

TEST_F(Cli, MalformedInputsExitTwo) {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "{}[]\":,0123456789.eE-+abcdefghijklmnopqrstuvwxyz \n";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 200);
  for (int i = 0; i < 25; ++i) {
    std::string junk;
    for (int k = len(rng); k > 0; --k) junk += alphabet[pick(rng)];
    write(path("junk.json"), junk);
    write(path("junk.csv"), junk);
    EXPECT_EQ(run("simulate --scenario " + path("junk.json") + " --out " + path("j.csv")), 2)
        << junk;
    EXPECT_EQ(run("verify --trajectory " + path("junk.csv") + " --check invariance"), 2) << junk;
    EXPECT_EQ(run("sweep --spec " + path("junk.json")), 2) << junk;
    EXPECT_EQ(run("plot --spec " + path("junk.json")), 2) << junk;
  }
}

}  // namespace
