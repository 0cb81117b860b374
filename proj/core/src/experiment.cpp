#include "xkerr/experiment.hpp"

#include "xkerr/entanglement.hpp"
#include "xkerr/witness.hpp"

#include "presets_data.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace xkerr {
namespace {

using json = nlohmann::ordered_json;

const char* const kAxisNames[] = {"alpha", "beta", "theta", "beta_theta", "loss", "loss1", "loss2"};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "config: JSON syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(os.str());
  }
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config: field '" + path + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("config: field '" + path + key + "' must be finite");
  return d;
}

bool is_axis_name(std::string_view name) {
  for (const char* n : kAxisNames)
    if (name == n) return true;
  return false;
}

std::vector<double> axis_values(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("config: field '" + path + "' must contain only numbers");
      out.push_back(e.get<double>());
    }
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items()) {
      if (k != "start" && k != "stop" && k != "num") {
        throw ConfigError("config: unknown key '" + path + "." + k + "' (expected start, stop, num)");
      }
    }
    if (!v.contains("start") || !v.contains("stop") || !v.contains("num")) {
      throw ConfigError("config: field '" + path + "' needs start, stop and num");
    }
    const double start = number_field(v, "start", path + ".");
    const double stop = number_field(v, "stop", path + ".");
    if (!v.at("num").is_number_integer() || v.at("num").get<long>() < 1) {
      throw ConfigError("config: field '" + path + ".num' must be a positive integer");
    }
    const long num = v.at("num").get<long>();
    for (long i = 0; i < num; ++i) {
      out.push_back(num == 1 ? start : start + (stop - start) * static_cast<double>(i) / (num - 1));
    }
  } else {
    throw ConfigError("config: field '" + path + "' must be an array or {start, stop, num}");
  }
  if (out.empty()) throw ConfigError("config: field '" + path + "' is empty");
  return out;
}

struct ParsedSeries {
  SweepSeries series;
  bool has_theta = false;
};

// Applies one config object on top of `s`. `allow_grid` is false for
// single-point configs.
void apply_object(const json& obj, ParsedSeries& s, bool allow_grid) {
  if (!obj.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig& c = s.series.base;
  for (const auto& [key, value] : obj.items()) {
    if (key == "alpha") {
      c.alpha = number_field(obj, key, "");
    } else if (key == "beta") {
      c.beta = number_field(obj, key, "");
    } else if (key == "theta") {
      c.theta = number_field(obj, key, "");
      s.has_theta = true;
      s.series.beta_theta.reset();
    } else if (key == "beta_theta") {
      s.series.beta_theta = number_field(obj, key, "");
      s.has_theta = false;
    } else if (key == "loss") {
      c.loss1 = c.loss2 = number_field(obj, key, "");
    } else if (key == "loss1") {
      c.loss1 = number_field(obj, key, "");
    } else if (key == "loss2") {
      c.loss2 = number_field(obj, key, "");
    } else if (key == "sigma") {
      c.sigma = number_field(obj, key, "");
    } else if (key == "epsilon") {
      c.epsilon = number_field(obj, key, "");
    } else if (key == "prepare_phases") {
      if (!value.is_boolean()) throw ConfigError("config: field 'prepare_phases' must be a boolean");
      c.prepare_phases = value.get<bool>();
    } else if (key == "tasks") {
      if (!value.is_array() || value.empty()) {
        throw ConfigError("config: field 'tasks' must be a non-empty array");
      }
      c.ln = c.witness = false;
      for (const auto& t : value) {
        const std::string name = t.is_string() ? t.get<std::string>() : std::string{};
        if (name == "ln") {
          c.ln = true;
        } else if (name == "witness") {
          c.witness = true;
        } else {
          throw ConfigError("config: field 'tasks' accepts only \"ln\" and \"witness\"");
        }
      }
    } else if (key == "grid") {
      if (!allow_grid) throw ConfigError("config: 'grid' is only valid for sweeps");
      if (!value.is_object()) throw ConfigError("config: field 'grid' must be an object");
      s.series.axes.clear();
      for (const auto& [axis, vals] : value.items()) {
        if (!is_axis_name(axis)) throw ConfigError("config: unknown grid parameter 'grid." + axis + "'");
        s.series.axes.push_back({axis, axis_values(vals, "grid." + axis)});
      }
      if (s.series.axes.size() > 2) throw ConfigError("config: 'grid' sweeps at most two parameters");
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
}

void validate_config(const RunConfig& c) {
  if (!(c.alpha >= 0.0) || !(c.beta >= 0.0)) throw ConfigError("config: alpha and beta must be >= 0");
  for (double l : {c.loss1, c.loss2}) {
    if (!(l >= 0.0 && l < 1.0)) throw ConfigError("config: loss must lie in [0, 1)");
  }
  if (!(c.sigma >= 3.0)) throw ConfigError("config: sigma must be >= 3");
  if (!(c.epsilon > 0.0)) throw ConfigError("config: epsilon must be > 0");
}

void check_required(const json& merged) {
  for (const char* key : {"alpha", "beta"}) {
    const bool in_grid = merged.contains("grid") && merged.at("grid").is_object() &&
                         merged.at("grid").contains(key);
    if (!merged.contains(key) && !in_grid) {
      throw ConfigError(std::string("config: missing required field '") + key + "'");
    }
  }
}

SweepSpec parse_sweep_object(const json& root, std::string name) {
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  SweepSpec spec;
  spec.name = std::move(name);

  std::vector<json> objects;
  if (root.contains("series")) {
    for (const auto& [k, _] : root.items()) {
      if (k != "series" && k != "common" && k != "description") {
        throw ConfigError("config: unknown field '" + k + "' next to 'series'");
      }
    }
    const json common = root.value("common", json::object());
    if (!common.is_object()) throw ConfigError("config: field 'common' must be an object");
    if (!root.at("series").is_array() || root.at("series").empty()) {
      throw ConfigError("config: field 'series' must be a non-empty array");
    }
    for (const auto& s : root.at("series")) {
      if (!s.is_object()) throw ConfigError("config: every entry of 'series' must be an object");
      json merged = common;
      for (const auto& [k, v] : s.items()) merged[k] = v;
      objects.push_back(std::move(merged));
    }
  } else {
    objects.push_back(root);
  }

  for (const auto& obj : objects) {
    check_required(obj);
    ParsedSeries ps;
    apply_object(obj, ps, true);
    bool grid_theta = false, grid_bt = false;
    for (const auto& axis : ps.series.axes) {
      grid_theta |= axis.name == "theta";
      grid_bt |= axis.name == "beta_theta";
    }
    if (grid_theta && grid_bt) throw ConfigError("config: grid cannot sweep both theta and beta_theta");
    // A swept theta wins over a fixed beta_theta inherited from "common".
    if (grid_theta) ps.series.beta_theta.reset();
    validate_config(ps.series.base);
    spec.series.push_back(std::move(ps.series));
  }
  return spec;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string format_optional(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_integral_v<T>) {
    return std::to_string(*v);
  } else {
    return format_double(*v);
  }
}

const json& preset_root() {
  static const json root = json::parse(detail::kPresetJson);
  return root;
}

}  // namespace

SystemParams RunConfig::system() const {
  return SystemParams::asymmetric(alpha, beta, theta, loss1, loss2);
}

RunConfig parse_run_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  check_required(root);
  ParsedSeries ps;
  apply_object(root, ps, false);
  if (ps.series.beta_theta) {
    if (ps.series.base.beta == 0.0) throw ConfigError("config: beta_theta requires beta > 0");
    ps.series.base.theta = *ps.series.beta_theta / ps.series.base.beta;
  }
  validate_config(ps.series.base);
  return ps.series.base;
}

SweepSpec parse_sweep_config(std::string_view json_text, std::string name) {
  return parse_sweep_object(parse_json(json_text), std::move(name));
}

std::string read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, _] : preset_root().at("presets").items()) names.push_back(k);
  return names;
}

std::string preset_version() { return preset_root().at("version").get<std::string>(); }

SweepSpec load_preset(std::string_view name) {
  const auto& presets = preset_root().at("presets");
  const std::string key(name);
  if (!presets.contains(key)) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + key + "' (available: " + known + ")");
  }
  return parse_sweep_object(presets.at(key), key);
}

std::vector<RunConfig> expand_sweep(const SweepSpec& spec) {
  std::vector<RunConfig> points;
  for (const auto& series : spec.series) {
    std::size_t total = 1;
    for (const auto& axis : series.axes) total *= axis.values.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      RunConfig c = series.base;
      std::optional<double> bt = series.beta_theta;
      // Mixed radix, last axis fastest.
      std::size_t rest = flat;
      for (std::size_t a = series.axes.size(); a-- > 0;) {
        const auto& axis = series.axes[a];
        const double v = axis.values[rest % axis.values.size()];
        rest /= axis.values.size();
        if (axis.name == "alpha") c.alpha = v;
        else if (axis.name == "beta") c.beta = v;
        else if (axis.name == "theta") c.theta = v;
        else if (axis.name == "beta_theta") bt = v;
        else if (axis.name == "loss") c.loss1 = c.loss2 = v;
        else if (axis.name == "loss1") c.loss1 = v;
        else if (axis.name == "loss2") c.loss2 = v;
      }
      if (bt) {
        if (c.beta == 0.0) throw ConfigError("config: beta_theta requires beta > 0");
        c.theta = *bt / c.beta;
      }
      validate_config(c);
      points.push_back(c);
    }
  }
  return points;
}

SweepRow run_point(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SystemParams p = config.system();
  if (config.prepare_phases) p = prepare_witness_inputs(p);

  SweepRow row;
  row.alpha = config.alpha;
  row.beta = config.beta;
  row.theta = config.theta;
  row.loss = config.loss1;
  row.beta_theta = config.beta * config.theta;

  if (config.ln) {
    const auto rho = build_state(p, config.sigma, config.epsilon);
    row.ln_value = log_negativity(rho).ln_value;
    row.frame_rank = static_cast<int>(rho.frame_rank);
    row.n1_cutoff = rho.plan.n1_cutoff;
    row.trace_error = rho.trace_error;
  }
  if (config.witness) {
    const auto rep = witness_w(heisenberg_moments(p), p);
    row.w_value = rep.w_value;
    row.var_u = rep.var_u;
    row.var_v = rep.var_v;
    row.x1_mean = rep.moments.x1;
    row.x2_mean = rep.moments.x2;
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int default_worker_count() {
  if (const char* env = std::getenv("XKERR_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
  const auto points = expand_sweep(spec);
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        rows[i] = run_point(points[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = points.size();
        return;
      }
    }
  };

  const int n = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string csv_line(const SweepRow& r) {
  std::string s;
  s += format_double(r.alpha) + ',' + format_double(r.beta) + ',' + format_double(r.theta) + ',' +
       format_double(r.loss) + ',' + format_double(r.beta_theta) + ',';
  s += format_optional(r.ln_value) + ',' + format_optional(r.w_value) + ',' +
       format_optional(r.var_u) + ',' + format_optional(r.var_v) + ',' +
       format_optional(r.x1_mean) + ',' + format_optional(r.x2_mean) + ',';
  s += format_optional(r.frame_rank) + ',' + format_optional(r.n1_cutoff) + ',' +
       format_optional(r.trace_error) + ',';
  s += format_double(std::round(r.wall_time_ms * 1000.0) / 1000.0);
  return s;
}

std::string row_json(const SweepRow& r) {
  json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["theta"] = r.theta;
  j["loss"] = r.loss;
  j["beta_theta"] = r.beta_theta;
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
  };
  put("ln_value", r.ln_value);
  put("w_value", r.w_value);
  put("var_u", r.var_u);
  put("var_v", r.var_v);
  put("x1_mean", r.x1_mean);
  put("x2_mean", r.x2_mean);
  put("frame_rank", r.frame_rank);
  put("n1_cutoff", r.n1_cutoff);
  put("trace_error", r.trace_error);
  j["wall_time_ms"] = std::round(r.wall_time_ms * 1000.0) / 1000.0;
  return j.dump(2);
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file '" + tmp.string() + "'");
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw NumericalError("failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace xkerr
