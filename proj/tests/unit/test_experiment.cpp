#include "xkerr/experiment.hpp"

#ifdef XKERR_HAVE_CLI
#include "cli.hpp"
#endif

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace xkerr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_file(const std::string& name, const std::string& contents = {}) {
  const fs::path p = fs::temp_directory_path() / ("xkerr_test_" + name);
  if (!contents.empty()) std::ofstream(p) << contents;
  return p;
}

SweepRow strip_timing(SweepRow r) {
  r.wall_time_ms = 0.0;
  return r;
}

const char* kSmallSweep = R"({
  "common": {"beta": 6, "tasks": ["ln", "witness"]},
  "series": [
    {"alpha": 1, "grid": {"loss": [0, 0.2], "theta": {"start": 0, "stop": 0.2, "num": 3}}},
    {"alpha": 0.5, "beta_theta": 0.3, "loss1": 0.1, "loss2": 0.3}
  ]
})";

}  // namespace

TEST(RunConfig, Defaults) {
  const auto c = parse_run_config(R"({"alpha": 2, "beta": 50})");
  EXPECT_EQ(c.theta, 0.0);
  EXPECT_EQ(c.loss1, 0.0);
  EXPECT_EQ(c.loss2, 0.0);
  EXPECT_TRUE(c.ln);
  EXPECT_TRUE(c.witness);
  EXPECT_TRUE(c.prepare_phases);
  EXPECT_EQ(c.sigma, kDefaultSigma);
  EXPECT_EQ(c.epsilon, kDefaultFrameEpsilon);
}

TEST(RunConfig, BetaThetaAndLossForms) {
  const auto c = parse_run_config(R"({"alpha": 2, "beta": 50, "beta_theta": 1, "loss": 0.1})");
  EXPECT_DOUBLE_EQ(c.theta, 0.02);
  EXPECT_EQ(c.loss1, 0.1);
  EXPECT_EQ(c.loss2, 0.1);
  const auto d = parse_run_config(R"({"alpha": 2, "beta": 50, "loss1": 0.1, "loss2": 0.4, "tasks": ["witness"]})");
  EXPECT_EQ(d.loss1, 0.1);
  EXPECT_EQ(d.loss2, 0.4);
  EXPECT_FALSE(d.ln);
  EXPECT_TRUE(d.witness);
}

TEST(RunConfig, Rejections) {
  const char* bad[] = {
      R"({"beta": 50})",                                  // missing alpha
      R"({"alpha": 1, "beta": 50, "lossy": 0.1})",        // unknown field
      R"({"alpha": 1, "beta": 50, "loss": 1.0})",         // loss out of range
      R"({"alpha": -1, "beta": 50})",                     // negative amplitude
      R"({"alpha": "2", "beta": 50})",                    // wrong type
      R"({"alpha": 1, "beta": 50, "tasks": ["purity"]})",  // unknown task
      R"({"alpha": 1, "beta": 50, "tasks": []})",
      R"({"alpha": 1, "beta": 0, "beta_theta": 1})",
      R"({"alpha": 1, "beta": 50, "grid": {"loss": [0]}})",  // grid outside sweeps
      R"({"alpha": 1, "beta": 50, "sigma": 1})",
      R"([1, 2])",
  };
  for (const char* text : bad) EXPECT_THROW(parse_run_config(text), ConfigError) << text;
}

TEST(RunConfig, ParseErrorNamesLocation) {
  try {
    parse_run_config("{\n  \"alpha\": 1,\n  \"beta\": ,\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(SweepConfig, ExpansionOrder) {
  const auto spec = parse_sweep_config(kSmallSweep);
  const auto pts = expand_sweep(spec);
  ASSERT_EQ(pts.size(), 7u);
  // First grid key outermost, theta linspace innermost.
  const double want[][2] = {{0, 0}, {0, 0.1}, {0, 0.2}, {0.2, 0}, {0.2, 0.1}, {0.2, 0.2}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(pts[i].loss1, want[i][0]);
    EXPECT_NEAR(pts[i].theta, want[i][1], 1e-15);
    EXPECT_EQ(pts[i].alpha, 1.0);
    EXPECT_EQ(pts[i].beta, 6.0);
  }
  EXPECT_EQ(pts[6].alpha, 0.5);
  EXPECT_DOUBLE_EQ(pts[6].theta, 0.05);
  EXPECT_EQ(pts[6].loss2, 0.3);
}

TEST(SweepConfig, Rejections) {
  EXPECT_THROW(parse_sweep_config(R"({"alpha": 1, "beta": 5, "grid": {"theta": [0], "beta_theta": [1]}})"),
               ConfigError);
  EXPECT_THROW(parse_sweep_config(R"({"alpha": 1, "beta": 5, "grid": {"gamma": [0]}})"), ConfigError);
  EXPECT_THROW(parse_sweep_config(R"({"alpha": 1, "beta": 5, "grid": {"theta": []}})"), ConfigError);
  EXPECT_THROW(
      parse_sweep_config(R"({"alpha": 1, "beta": 5, "grid": {"theta": [0], "loss": [0], "alpha": [1]}})"),
      ConfigError);
  EXPECT_THROW(parse_sweep_config(R"({"common": {"alpha": 1}, "series": []})"), ConfigError);
}

TEST(Presets, AllLoadAndCarryControlPoints) {
  const auto names = preset_names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()),
            (std::set<std::string>{"fig2", "fig3a", "fig3b", "fig4"}));
  EXPECT_FALSE(preset_version().empty());
  for (const auto& n : names) {
    const auto pts = expand_sweep(load_preset(n));
    EXPECT_FALSE(pts.empty());
    EXPECT_TRUE(std::any_of(pts.begin(), pts.end(), [](const RunConfig& c) { return c.theta == 0.0; })) << n;
  }
  EXPECT_THROW(load_preset("fig9"), ConfigError);
}

TEST(Presets, Figure4Grid) {
  const auto pts = expand_sweep(load_preset("fig4"));
  std::set<double> losses;
  for (const auto& c : pts) {
    EXPECT_EQ(c.alpha, 2.0);
    EXPECT_EQ(c.beta, 50.0);
    EXPECT_TRUE(c.witness);
    losses.insert(c.loss1);
  }
  EXPECT_EQ(losses, (std::set<double>{0.0, 0.01, 0.1, 0.5}));
}

TEST(Presets, Figure3bReachesHighLoss) {
  const auto pts = expand_sweep(load_preset("fig3b"));
  EXPECT_TRUE(std::any_of(pts.begin(), pts.end(), [](const RunConfig& c) { return c.loss1 == 0.55; }));
}

TEST(RunPoint, LosslessRegression) {
  const auto row = run_point(parse_run_config(R"({"alpha": 4, "beta": 40, "theta": 0.025, "tasks": ["ln"]})"));
  ASSERT_TRUE(row.ln_value.has_value());
  EXPECT_GT(*row.ln_value, 1.0);
  EXPECT_NEAR(*row.ln_value, 3.9287205377665, 1e-9);
  EXPECT_FALSE(row.w_value.has_value());
  EXPECT_DOUBLE_EQ(row.beta_theta, 1.0);
}

TEST(RunPoint, ZeroThetaAndVacuum) {
  const auto zero = run_point(parse_run_config(R"({"alpha": 2, "beta": 50, "theta": 0, "loss": 0.1})"));
  EXPECT_NEAR(*zero.ln_value, 0.0, 1e-12);
  EXPECT_EQ(*zero.w_value, 0.0);
  const auto vac = run_point(parse_run_config(R"({"alpha": 0, "beta": 50, "theta": 0.01, "tasks": ["ln"]})"));
  EXPECT_EQ(*vac.ln_value, 0.0);
}

TEST(Sweep, WorkerCountDoesNotChangeRows) {
  const auto spec = parse_sweep_config(kSmallSweep);
  const auto a = run_sweep(spec, 1);
  const auto b = run_sweep(spec, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(csv_line(strip_timing(a[i])), csv_line(strip_timing(b[i]))) << i;
}

TEST(Sweep, DefaultWorkerCountFromEnvironment) {
  setenv("XKERR_WORKERS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3);
  setenv("XKERR_WORKERS", "zero", 1);
  EXPECT_GE(default_worker_count(), 1);
  unsetenv("XKERR_WORKERS");
}

TEST(Csv, HeaderAndEmptyTaskColumns) {
  SweepRow r;
  r.alpha = 2;
  r.beta = 50;
  r.theta = 0.01;
  r.loss = 0.1;
  r.beta_theta = 0.5;
  r.ln_value = 1.25;
  r.frame_rank = 31;
  r.n1_cutoff = 21;
  r.trace_error = 1e-12;
  r.wall_time_ms = 12.3456;
  EXPECT_EQ(csv_line(r), "2,50,0.01,0.1,0.5,1.25,,,,,,31,21,1e-12,12.346");

  const fs::path out = temp_file("rows.csv");
  write_sweep_csv(out, {r, r});
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_FALSE(fs::exists(out.string() + ".partial"));
  fs::remove(out);
}

TEST(Csv, RoundTripsDoubles) {
  SweepRow r;
  r.alpha = 0.1 + 0.2;
  const std::string line = csv_line(r);
  EXPECT_EQ(std::stod(line.substr(0, line.find(','))), 0.1 + 0.2);
}

#ifdef XKERR_HAVE_CLI

namespace {

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "xkerr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

}  // namespace

TEST(Cli, ComputePrintsJson) {
  const auto cfg = temp_file("compute.json", R"({"alpha": 1, "beta": 5, "theta": 0.2, "loss": 0.1})");
  std::string text;
  EXPECT_EQ(run_cli({"compute", "--config", cfg.string()}, &text), 0);
  EXPECT_NE(text.find("\"ln_value\""), std::string::npos);
  EXPECT_NE(text.find("\"w_value\""), std::string::npos);
  fs::remove(cfg);
}

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"bogus"}), 2);
  EXPECT_EQ(run_cli({"sweep", "--preset", "fig9"}), 2);
  EXPECT_EQ(run_cli({"sweep"}), 2);
  EXPECT_EQ(run_cli({"compute", "--config", "/nonexistent/xkerr.json"}), 2);
  const auto cfg = temp_file("bad.json", R"({"alpha": 1, "beta": 5, "loss": 1.5})");
  EXPECT_EQ(run_cli({"compute", "--config", cfg.string()}), 2);
  fs::remove(cfg);
  EXPECT_EQ(run_cli({"--help"}), 0);
}

TEST(Cli, SweepWritesCsv) {
  const auto cfg = temp_file("sweep.json", kSmallSweep);
  const auto out = temp_file("sweep.csv");
  EXPECT_EQ(run_cli({"sweep", "--config", cfg.string(), "--out", out.string(), "--workers", "2"}), 0);
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  fs::remove(cfg);
  fs::remove(out);
}

TEST(Cli, PresetsListing) {
  std::string text;
  EXPECT_EQ(run_cli({"presets"}, &text), 0);
  EXPECT_NE(text.find("fig3b"), std::string::npos);
}

#endif

#ifdef XKERR_HAVE_CLI
TEST(Cli, ValidateAndSignFlipMutation) {
  const auto report = temp_file("validate.json");
  std::string text;
  EXPECT_EQ(run_cli({"validate", "--json", report.string()}, &text), 0) << text;
  EXPECT_NE(slurp(report).find("\"passed\": true"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", "--inject-sign-flip"}, &text), 1);
  EXPECT_NE(text.find("FAILED at: variance_cancellation"), std::string::npos) << text;
  fs::remove(report);
}
#endif
