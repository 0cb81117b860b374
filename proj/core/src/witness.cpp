#include "xkerr/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace xkerr {
namespace {

constexpr cplx kI{0.0, 1.0};

std::array<double, 12> as_array(const MomentSet& m) {
  return {m.x1, m.p1, m.x2, m.p2, m.n1, m.n2, m.p1_sq, m.p2_sq, m.n1_sq, m.n2_sq, m.p1_n2, m.p2_n1};
}

}  // namespace

double max_relative_difference(const MomentSet& a, const MomentSet& b) {
  const auto va = as_array(a);
  const auto vb = as_array(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    worst = std::max(worst, std::abs(va[i] - vb[i]) / std::max(1.0, std::abs(vb[i])));
  }
  return worst;
}

SystemParams prepare_witness_inputs(SystemParams p) {
  p.alpha_phase = p.beta * p.beta * p.theta;
  p.beta_phase = p.alpha * p.alpha * p.theta;
  return p;
}

MomentSet heisenberg_moments(const SystemParams& p) {
  const double t1 = p.loss1.t;
  const double t2 = p.loss2.t;
  const double a_sq = p.alpha * p.alpha;
  const double b_sq = p.beta * p.beta;
  const cplx a0 = p.alpha * std::exp(kI * p.alpha_phase);
  const cplx b0 = p.beta * std::exp(kI * p.beta_phase);
  const cplx kerr = std::exp(-kI * p.theta);

  // Lossless: <a1^k> = a0^k <b0|e^{-ik theta n2}|b0>, <a1 n2> picks up n2 under
  // the same Poisson average. Loss scales each a / a^dagger by t.
  const cplx a1 = t1 * a0 * exp_phase_minus_one(b_sq, -p.theta);
  const cplx a1_sq = t1 * t1 * a0 * a0 * exp_phase_minus_one(b_sq, -2.0 * p.theta);
  const cplx a1_n2 = t1 * t2 * t2 * a0 * b_sq * kerr * exp_phase_minus_one(b_sq, -p.theta);
  const cplx a2 = t2 * b0 * exp_phase_minus_one(a_sq, -p.theta);
  const cplx a2_sq = t2 * t2 * b0 * b0 * exp_phase_minus_one(a_sq, -2.0 * p.theta);
  const cplx a2_n1 = t2 * t1 * t1 * b0 * a_sq * kerr * exp_phase_minus_one(a_sq, -p.theta);

  MomentSet m;
  m.x1 = a1.real();
  m.p1 = a1.imag();
  m.x2 = a2.real();
  m.p2 = a2.imag();
  m.n1 = t1 * t1 * a_sq;
  m.n2 = t2 * t2 * b_sq;
  m.n1_sq = std::pow(t1, 4) * a_sq * a_sq + m.n1;
  m.n2_sq = std::pow(t2, 4) * b_sq * b_sq + m.n2;
  // p^2 = (1 + 2 a^dagger a - a^2 - a^dagger^2) / 4
  m.p1_sq = 0.25 * (1.0 + 2.0 * m.n1 - 2.0 * a1_sq.real());
  m.p2_sq = 0.25 * (1.0 + 2.0 * m.n2 - 2.0 * a2_sq.real());
  // <p1 n2> = Im <a1 n2> since n2 is Hermitian and commutes with a1.
  m.p1_n2 = a1_n2.imag();
  m.p2_n1 = a2_n1.imag();
  return m;
}

MomentSet moments_from_rho(const TwoModeDensityMatrix& rho) {
  if (!rho.frame) throw std::invalid_argument("moments_from_rho: density matrix carries no frame");
  const Index d1 = rho.n1_dim;
  const Index d2 = rho.frame_rank;
  const CMatrix& m = rho.matrix.matrix();

  double edge = 0.0;
  for (Index k = std::max<Index>(0, d1 - 3); k < d1; ++k) {
    edge += m.block(k * d2, k * d2, d2, d2).trace().real();
  }
  if (edge > 1e-6) {
    std::ostringstream os;
    os << "moments_from_rho: mode-1 population " << edge << " within 3 states of the cutoff "
       << d1 - 1 << "; increase the truncation sigma";
    throw NumericalError(os.str());
  }

  const CMatrix none;
  const CMatrix x2 = rho.frame->operator_matrix(CoherentOp::kX);
  const CMatrix p2 = rho.frame->operator_matrix(CoherentOp::kP);
  const CMatrix n2 = rho.frame->operator_matrix(CoherentOp::kN);
  const CMatrix p2_sq = rho.frame->operator_matrix(CoherentOp::kP2);
  const CMatrix n2_sq = rho.frame->operator_matrix(CoherentOp::kN2);
  const CMatrix n1 = fock::number(d1);

  auto ev = [&](const CMatrix& a, const CMatrix& b) {
    return bipartite_expectation(m, d1, d2, a, b).real();
  };

  MomentSet out;
  out.x1 = ev(fock::x(d1), none);
  out.p1 = ev(fock::p(d1), none);
  out.n1 = ev(n1, none);
  out.p1_sq = ev(fock::p_squared(d1), none);
  out.n1_sq = ev(fock::number_squared(d1), none);
  out.x2 = ev(none, x2);
  out.p2 = ev(none, p2);
  out.n2 = ev(none, n2);
  out.p2_sq = ev(none, p2_sq);
  out.n2_sq = ev(none, n2_sq);
  out.p1_n2 = ev(fock::p(d1), n2);
  out.p2_n1 = ev(n1, p2);
  return out;
}

WitnessReport witness_w(const MomentSet& mo, const SystemParams& p, const WitnessOptions& options) {
  const double t1 = p.loss1.t;
  const double t2 = p.loss2.t;
  const double cu = options.u_sign * t1 * std::abs(p.alpha) * p.theta;
  const double cv = t2 * std::abs(p.beta) * p.theta;

  const double var_p1 = mo.p1_sq - mo.p1 * mo.p1;
  const double var_p2 = mo.p2_sq - mo.p2 * mo.p2;
  const double var_n1 = mo.n1_sq - mo.n1 * mo.n1;
  const double var_n2 = mo.n2_sq - mo.n2 * mo.n2;
  const double cov_p1_n2 = mo.p1_n2 - mo.p1 * mo.n2;
  const double cov_p2_n1 = mo.p2_n1 - mo.p2 * mo.n1;

  WitnessReport rep;
  rep.moments = mo;
  rep.params = p;
  rep.var_u = var_p1 + cu * cu * var_n2 + 2.0 * cu * cov_p1_n2;
  rep.var_v = var_p2 + cv * cv * var_n1 + 2.0 * cv * cov_p2_n1;
  rep.var_u_opposite_sign = var_p1 + cu * cu * var_n2 - 2.0 * cu * cov_p1_n2;
  rep.var_v_opposite_sign = var_p2 + cv * cv * var_n1 - 2.0 * cv * cov_p2_n1;
  rep.numerator = t2 * std::abs(p.beta * p.theta * mo.x1) + t1 * std::abs(p.alpha * p.theta * mo.x2);

  const double denom = rep.var_u + rep.var_v;
  if (!(denom > 0.1)) {
    std::ostringstream os;
    os << "witness_w: Var(U) + Var(V) = " << denom << " is below the physical floor";
    throw NumericalError(os.str());
  }
  rep.w_value = rep.numerator / denom;
  rep.entangled = rep.w_value > 1.0;
  rep.sign_convention_ok = rep.var_u <= rep.var_u_opposite_sign + 1e-12 &&
                           rep.var_v <= rep.var_v_opposite_sign + 1e-12;

  const double cu0 = options.u_sign * std::abs(p.alpha) * p.theta;
  const double cv0 = std::abs(p.beta) * p.theta;
  const double denom0 = var_p1 + cu0 * cu0 * var_n2 + 2.0 * cu0 * cov_p1_n2 + var_p2 +
                        cv0 * cv0 * var_n1 + 2.0 * cv0 * cov_p2_n1;
  const double num0 = std::abs(p.beta * p.theta * mo.x1) + std::abs(p.alpha * p.theta * mo.x2);
  rep.w_unscaled = denom0 > 0.0 ? num0 / denom0 : 0.0;
  return rep;
}

BoundTerms separable_bound_terms(std::span<const ProductComponent> mixture, const SystemParams& p) {
  const double cu = p.loss1.t * std::abs(p.alpha) * p.theta;
  const double cv = p.loss2.t * std::abs(p.beta) * p.theta;

  double total = 0.0;
  for (const auto& c : mixture) total += c.weight;
  if (!(total > 0.0)) throw std::invalid_argument("separable_bound_terms: weights must sum to > 0");

  // Component means of U, V (constant offsets drop out of variances).
  double mean_u = 0.0, mean_v = 0.0, mean_x1 = 0.0, mean_x2 = 0.0;
  for (const auto& c : mixture) {
    const double w = c.weight / total;
    mean_u += w * (c.a.imag() + cu * std::norm(c.b));
    mean_v += w * (c.b.imag() + cv * std::norm(c.a));
    mean_x1 += w * c.a.real();
    mean_x2 += w * c.b.real();
  }
  // Law of total variance; within a product coherent component
  // Var(p) = 1/4, Var(n) = |amplitude|^2 and p1, n2 are uncorrelated.
  double var_u = 0.0, var_v = 0.0;
  for (const auto& c : mixture) {
    const double w = c.weight / total;
    const double du = c.a.imag() + cu * std::norm(c.b) - mean_u;
    const double dv = c.b.imag() + cv * std::norm(c.a) - mean_v;
    var_u += w * (quadrature::kVacuumVariance + cu * cu * std::norm(c.b) + du * du);
    var_v += w * (quadrature::kVacuumVariance + cv * cv * std::norm(c.a) + dv * dv);
  }
  return {var_u + var_v, cv * std::abs(mean_x1) + cu * std::abs(mean_x2)};
}

SeparableBoundReport separable_bound_check(int samples, std::uint64_t rng_seed) {
  if (samples < 1) throw std::invalid_argument("separable_bound_check: samples must be >= 1");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::acos(-1.0);

  SeparableBoundReport rep;
  rep.samples = samples;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::vector<ProductComponent> mix;

  for (int s = 0; s < samples; ++s) {
    const auto p = SystemParams::asymmetric(5.0 * unit(rng), 60.0 * unit(rng), 0.1 * unit(rng),
                                            0.9 * unit(rng), 0.9 * unit(rng));
    const double cu = p.loss1.t * p.alpha * p.theta;
    const double cv = p.loss2.t * p.beta * p.theta;
    const int kind = s % 4;
    const int count = kind == 0 ? 1 : 1 + static_cast<int>(4 * unit(rng));

    mix.clear();
    for (int c = 0; c < count; ++c) {
      ProductComponent comp;
      comp.weight = unit(rng) + 1e-3;
      if (kind == 3 && cu > 1e-3 && cv > 1e-3) {
        // Near the equality point |a| = 1/(2 cv), |b| = 1/(2 cu) on the real axis.
        comp.a = (1.0 + 0.05 * (unit(rng) - 0.5)) / (2.0 * cv);
        comp.b = (1.0 + 0.05 * (unit(rng) - 0.5)) / (2.0 * cu);
      } else {
        comp.a = std::polar(6.0 * unit(rng), two_pi * unit(rng));
        comp.b = std::polar(70.0 * unit(rng), two_pi * unit(rng));
      }
      mix.push_back(comp);
    }

    const auto terms = separable_bound_terms(mix, p);
    const double margin = terms.lhs - terms.rhs;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -kSeparableBoundSlack) {
      if (rep.violations == 0) {
        std::ostringstream os;
        os.precision(17);
        os << "sample " << s << ": alpha=" << p.alpha << " beta=" << p.beta << " theta=" << p.theta
           << " loss1=" << p.loss1.loss << " loss2=" << p.loss2.loss << " components=" << count
           << " lhs=" << terms.lhs << " rhs=" << terms.rhs;
        rep.first_violation = os.str();
      }
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace xkerr
