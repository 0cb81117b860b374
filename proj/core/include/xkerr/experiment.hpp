// Run configurations, parameter sweeps and figure presets.
//
// Config schema (JSON object):
//
//   alpha, beta          number, required
//   theta | beta_theta   number; beta_theta sets theta = beta_theta / beta
//   loss | loss1, loss2  number in [0, 1), default 0
//   tasks                array of "ln" / "witness", default both
//   sigma                truncation width, default 7
//   epsilon              frame rank threshold, default 1e-12
//   prepare_phases       bool, default true
//   grid                 sweeps only: up to two of alpha, beta, theta,
//                        beta_theta, loss, loss1, loss2, each an array or
//                        {"start", "stop", "num"}; the first key is the
//                        outer loop
//
// A sweep file may instead hold {"common": {...}, "series": [{...}, ...]};
// each series is merged over "common". Presets use the same form.
#pragma once

#include "xkerr/state.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xkerr {

/// Malformed or invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double loss1 = 0.0;
  double loss2 = 0.0;
  bool ln = true;
  bool witness = true;
  double sigma = kDefaultSigma;
  double epsilon = kDefaultFrameEpsilon;
  bool prepare_phases = true;

  SystemParams system() const;
};

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSeries {
  RunConfig base;
  std::optional<double> beta_theta;  // fixed beta*theta, applied after the grid
  std::vector<GridAxis> axes;        // at most two
};

struct SweepSpec {
  std::string name;
  std::vector<SweepSeries> series;
};

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double loss = 0.0;  // loss1 when the two modes differ
  double beta_theta = 0.0;
  std::optional<double> ln_value;
  std::optional<double> w_value;
  std::optional<double> var_u;
  std::optional<double> var_v;
  std::optional<double> x1_mean;
  std::optional<double> x2_mean;
  std::optional<int> frame_rank;
  std::optional<int> n1_cutoff;
  std::optional<double> trace_error;
  double wall_time_ms = 0.0;
};

RunConfig parse_run_config(std::string_view json_text);
SweepSpec parse_sweep_config(std::string_view json_text, std::string name = "config");

/// Reads a file and parses it; I/O failures are ConfigErrors.
std::string read_config_file(const std::filesystem::path& path);

std::vector<std::string> preset_names();
SweepSpec load_preset(std::string_view name);
std::string preset_version();

/// Grid points in emission order (series by series, first axis outermost).
std::vector<RunConfig> expand_sweep(const SweepSpec& spec);

SweepRow run_point(const RunConfig& config);

/// Evaluates every point with up to `workers` threads; rows keep the
/// expand_sweep order regardless of worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers);

/// Worker count from XKERR_WORKERS, else hardware concurrency (at least 1).
int default_worker_count();

inline constexpr std::string_view kSweepCsvHeader =
    "alpha,beta,theta,loss,beta_theta,ln_value,w_value,var_u,var_v,x1_mean,x2_mean,frame_rank,"
    "n1_cutoff,trace_error,wall_time_ms";

std::string csv_line(const SweepRow& row);
std::string row_json(const SweepRow& row);

/// Writes header + rows to `path` through a temporary file renamed on
/// success.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace xkerr
