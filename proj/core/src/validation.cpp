#include "xkerr/validation.hpp"

#include "xkerr/bruteforce.hpp"
#include "xkerr/entanglement.hpp"
#include "xkerr/experiment.hpp"
#include "xkerr/witness.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace xkerr {
namespace {

std::string point_label(const OraclePoint& pt) {
  std::ostringstream os;
  os << "alpha=" << pt.alpha << " beta=" << pt.beta << " theta=" << pt.theta << " loss=" << pt.loss;
  return os.str();
}

CheckResult make_check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

}  // namespace

bool ValidationReport::passed() const { return first_failure() == nullptr; }

const CheckResult* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  if (const auto* f = first_failure()) j["first_failure"] = f->name;
  return j.dump(2);
}

std::vector<OraclePoint> oracle_grid() {
  std::vector<OraclePoint> grid;
  for (double a : {0.5, 1.2})
    for (double b : {0.8, 1.5})
      for (double th : {0.1, 0.7, 1.3})
        for (double l : {0.0, 0.3}) grid.push_back({a, b, th, l});
  return grid;
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  const Index d = options.oracle_cutoff;

  for (const auto& pt : oracle_grid()) {
    const auto p = prepare_witness_inputs(SystemParams::symmetric(pt.alpha, pt.beta, pt.theta, pt.loss));
    const bool lossy = pt.loss > 0.0;
    const auto rho = build_state(p);
    const auto full = brute_force_state(p, d, d);

    const double ln_err = std::abs(log_negativity(rho).ln_value - brute_force_ln(full));
    report.checks.push_back(
        make_check("oracle_ln " + point_label(pt), ln_err, lossy ? 1e-4 : 1e-6));

    const auto m_rho = moments_from_rho(rho);
    const auto m_heis = heisenberg_moments(p);
    const auto m_full = brute_force_moments(full);
    const double err = std::max({max_relative_difference(m_rho, m_heis),
                                 max_relative_difference(m_full, m_heis),
                                 max_relative_difference(m_rho, m_full)});
    report.checks.push_back(
        make_check("moment_paths " + point_label(pt), err, lossy ? 1e-6 : 1e-8));
  }

  {
    const auto p = SystemParams::symmetric(1.2, 1.5, 0.7, 0.3);
    const auto kraus = brute_force_state(p, d, d, LossRoute::kKraus);
    const auto split = brute_force_state(p, d, d, LossRoute::kBeamSplitter);
    report.checks.push_back(make_check("channel_equivalence kraus vs beam splitter",
                                       trace_distance(kraus.rho.matrix(), split.rho.matrix()), 1e-10));
  }

  {
    const auto rep = separable_bound_check(options.separable_samples, options.seed);
    CheckResult c;
    c.name = "separable_bound samples=" + std::to_string(rep.samples);
    c.value = rep.violations;
    c.tolerance = 0;
    c.passed = rep.passed();
    c.detail = rep.passed() ? "min margin " + std::to_string(rep.min_margin) : rep.first_violation;
    report.checks.push_back(c);
  }

  {
    // Shipped signs must be the variance-minimizing ones.
    WitnessOptions wopt;
    if (options.inject_sign_flip) wopt.u_sign = -1.0;
    for (double loss : {0.0, 0.1}) {
      const auto p = prepare_witness_inputs(SystemParams::symmetric(2.0, 50.0, 0.01, loss));
      const auto rep = witness_w(heisenberg_moments(p), p, wopt);
      CheckResult c;
      c.name = "variance_cancellation alpha=2 beta=50 theta=0.01 loss=" + std::to_string(loss);
      c.passed = rep.sign_convention_ok;
      c.value = (rep.var_u - rep.var_u_opposite_sign) + (rep.var_v - rep.var_v_opposite_sign);
      c.tolerance = 0.0;
      std::ostringstream os;
      os << "var_u=" << rep.var_u << " (opposite " << rep.var_u_opposite_sign << ") var_v=" << rep.var_v
         << " (opposite " << rep.var_v_opposite_sign << ")";
      c.detail = os.str();
      report.checks.push_back(c);
    }
  }

  {
    const double alpha = 2.0;
    const auto p = SystemParams::symmetric(alpha, 40.0, 0.1, 0.0);
    const double ln = log_negativity(build_state(p)).ln_value;
    const double sat = lossless_saturation_ln(alpha);
    report.checks.push_back(make_check("saturation alpha=2 beta*theta=4",
                                       std::abs(ln - sat) / sat, 0.02,
                                       "LN " + std::to_string(ln) + " vs " + std::to_string(sat)));
  }

  for (const auto& name : preset_names()) {
    for (auto cfg : expand_sweep(load_preset(name))) {
      if (cfg.theta != 0.0) continue;
      cfg.ln = cfg.witness = true;
      const auto row = run_point(cfg);
      std::ostringstream os;
      os << name << " alpha=" << cfg.alpha << " beta=" << cfg.beta << " loss=" << cfg.loss1;
      const double worst = std::max(std::abs(*row.ln_value), std::abs(*row.w_value));
      report.checks.push_back(make_check("theta_zero_row " + os.str(), worst, 1e-9));
    }
  }
  return report;
}

}  // namespace xkerr
