#include "cli.hpp"

#include "xkerr/experiment.hpp"
#include "xkerr/validation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace xkerr::cli {
namespace {

int compute(const std::string& config_path, std::ostream& out) {
  const auto config = parse_run_config(read_config_file(config_path));
  out << row_json(run_point(config)) << '\n';
  return kSuccess;
}

int sweep(const std::string& preset, const std::string& config_path, std::string out_path,
          int workers, std::ostream& out) {
  SweepSpec spec;
  if (!preset.empty()) {
    spec = load_preset(preset);
    if (out_path.empty()) out_path = preset + ".csv";
  } else {
    spec = parse_sweep_config(read_config_file(config_path), config_path);
    if (out_path.empty()) throw ConfigError("sweep --config requires --out FILE.csv");
  }
  const auto rows = run_sweep(spec, workers > 0 ? workers : default_worker_count());
  write_sweep_csv(out_path, rows);
  out << "wrote " << rows.size() << " rows to " << out_path << '\n';
  return kSuccess;
}

int validate(const std::string& json_path, bool inject_sign_flip, std::ostream& out) {
  ValidationOptions opts;
  opts.inject_sign_flip = inject_sign_flip;
  const auto report = run_validation(opts);
  for (const auto& c : report.checks) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  value=" << c.value
        << " tol=" << c.tolerance;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
  }
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw ConfigError("cannot open '" + json_path + "' for writing");
    f << report.to_json() << '\n';
  }
  if (const auto* fail = report.first_failure()) {
    out << "validation FAILED at: " << fail->name << '\n';
    return kFailure;
  }
  out << "validation passed (" << report.checks.size() << " checks)\n";
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"xkerr: cross-Kerr micro-macro entanglement under photon loss"};
  app.require_subcommand(1);

  std::string config_path;
  auto* compute_cmd = app.add_subcommand("compute", "Evaluate one parameter point, print JSON");
  compute_cmd->add_option("--config", config_path, "JSON config file")->required();

  std::string preset, sweep_config, out_path;
  int workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid sweep and write CSV");
  auto* preset_opt = sweep_cmd->add_option("--preset", preset, "Figure preset")
                         ->check(CLI::IsMember(preset_names()));
  auto* sweep_cfg_opt = sweep_cmd->add_option("--config", sweep_config, "JSON sweep config");
  preset_opt->excludes(sweep_cfg_opt);
  sweep_cmd->add_option("--out", out_path, "Output CSV (default <preset>.csv for presets)");
  sweep_cmd->add_option("--workers", workers, "Worker threads (default: XKERR_WORKERS or cores)")
      ->check(CLI::PositiveNumber);

  std::string json_path;
  bool inject = false;
  auto* validate_cmd = app.add_subcommand("validate", "Run the self-validation suite");
  validate_cmd->add_option("--json", json_path, "Write a machine-readable report");
  validate_cmd->add_flag("--inject-sign-flip", inject, "Mutation hook: flip the number-term sign in U")
      ->group("");

  auto* presets_cmd = app.add_subcommand("presets", "List figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*compute_cmd) return compute(config_path, out);
    if (*sweep_cmd) {
      if (preset.empty() && sweep_config.empty()) {
        err << "error: sweep needs --preset or --config\n";
        return kUsage;
      }
      return sweep(preset, sweep_config, out_path, workers, out);
    }
    if (*validate_cmd) return validate(json_path, inject, out);
    if (*presets_cmd) {
      out << "preset file version " << preset_version() << '\n';
      for (const auto& n : preset_names()) out << n << '\n';
      return kSuccess;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace xkerr::cli
