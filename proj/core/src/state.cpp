#include "xkerr/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace xkerr {
namespace {

constexpr cplx kI{0.0, 1.0};

int grow_until_tail(double mean, int cutoff) {
  while (poisson_upper_tail(mean, cutoff) > kTailTarget) ++cutoff;
  return cutoff;
}

// c_m e^{i m alpha_phase} for m = 0..n1_cutoff, with c_m the transmitted
// Poisson amplitude sqrt(Poisson(t1^2 alpha^2; m)).
CVector mode1_amplitudes(const SystemParams& p, const TruncationPlan& plan) {
  const double mean = p.loss1.t * p.loss1.t * p.alpha * p.alpha;
  CVector c(plan.n1_dim());
  for (int m = 0; m <= plan.n1_cutoff; ++m) {
    c(m) = poisson_amplitude(mean, m) * std::exp(kI * (p.alpha_phase * m));
  }
  return c;
}

// Poisson weights of the photons lost from mode 1, k = 0..k_cutoff.
RVector lost_photon_weights(const SystemParams& p, const TruncationPlan& plan) {
  const double mean = p.loss1.r * p.loss1.r * p.alpha * p.alpha;
  RVector q(plan.k_cutoff + 1);
  for (int k = 0; k <= plan.k_cutoff; ++k) q(k) = std::exp(log_poisson(mean, k));
  return q;
}

// F(m, m') for the mode-2 loss branches.
CMatrix loss_branch_overlaps(const SystemParams& p, const TruncationPlan& plan) {
  const double s = p.loss2.r * p.loss2.r * p.beta * p.beta;
  const Index n = plan.n1_dim();
  CMatrix f(n, n);
  for (Index m = 0; m < n; ++m) {
    for (Index mp = 0; mp < n; ++mp) {
      f(m, mp) = m == mp ? cplx(1.0) : exp_phase_minus_one(s, static_cast<double>(mp - m) * p.theta);
    }
  }
  return f;
}

void require_family(const TruncationPlan& plan, const CoherentFrame& frame) {
  if (frame.size() < plan.family_size()) {
    throw NumericalError("frame has " + std::to_string(frame.size()) +
                         " amplitudes but the truncation plan needs " +
                         std::to_string(plan.family_size()) +
                         "; rebuild the frame from a plan at least as large");
  }
}

TwoModeDensityMatrix finish(CMatrix rho, const SystemParams& p, const TruncationPlan& plan,
                            std::shared_ptr<const CoherentFrame> frame) {
  // Exact Hermiticity; rounding in the GEMM is not symmetric.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double trace = rho.trace().real();
  if (!(trace > 0.0)) throw NumericalError("assembled density matrix has non-positive trace");
  rho /= trace;

  TwoModeDensityMatrix out;
  out.n1_dim = plan.n1_dim();
  out.frame_rank = frame->rank();
  out.matrix = HermitianMatrix::trusted(std::move(rho));
  out.params = p;
  out.plan = plan;
  out.frame = std::move(frame);
  out.trace_error = std::abs(1.0 - trace);
  return out;
}

}  // namespace

SystemParams SystemParams::symmetric(double alpha, double beta, double theta, double loss) {
  return asymmetric(alpha, beta, theta, loss, loss);
}

SystemParams SystemParams::asymmetric(double alpha, double beta, double theta, double loss1,
                                      double loss2) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("alpha and beta must be finite and non-negative");
  }
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  SystemParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.theta = theta;
  p.loss1 = LossParams::from_loss(loss1);
  p.loss2 = LossParams::from_loss(loss2);
  return p;
}

TruncationPlan plan_truncation(const SystemParams& p, double sigma) {
  if (!(sigma >= 3.0)) throw std::invalid_argument("plan_truncation: sigma must be >= 3");
  TruncationPlan plan;
  plan.sigma = sigma;

  const double a2 = p.alpha * p.alpha;
  const double kept_mean = p.loss1.t * p.loss1.t * a2;
  const double lost_mean = p.loss1.r * p.loss1.r * a2;

  plan.n1_cutoff = std::max(4, static_cast<int>(std::ceil(a2 + sigma * std::sqrt(a2 + 1.0))));
  plan.n1_cutoff = grow_until_tail(kept_mean, plan.n1_cutoff);

  // Without loss on mode 1 no photons are lost, so the k-sum is the single
  // term k = 0.
  if (p.loss1.lossless()) {
    plan.k_cutoff = 0;
  } else {
    plan.k_cutoff =
        static_cast<int>(std::ceil(lost_mean + sigma * std::sqrt(lost_mean + 1.0)));
    plan.k_cutoff = grow_until_tail(lost_mean, plan.k_cutoff);
  }

  plan.tail_mass = poisson_upper_tail(kept_mean, plan.n1_cutoff) +
                   poisson_upper_tail(lost_mean, plan.k_cutoff);
  return plan;
}

CMatrix CoherentFrame::operator_matrix(CoherentOp op) const {
  const Index n = size();
  CMatrix family(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index jp = 0; jp < n; ++jp) {
      family(j, jp) = coherent_matrix_element(amplitudes[j], amplitudes[jp], op);
    }
  }
  const CMatrix dual = factor.dual();
  return dual.adjoint() * family * dual;
}

CoherentFrame build_frame(const SystemParams& p, const TruncationPlan& plan, double epsilon) {
  const Index n = plan.family_size();
  const double radius = p.loss2.t * p.beta;
  CoherentFrame frame;
  frame.amplitudes.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    frame.amplitudes.push_back(radius * std::exp(kI * (p.beta_phase - p.theta * static_cast<double>(j))));
  }

  // Equal-magnitude family: <g_j|g_j'> = exp(|g|^2 (e^{i(j-j')theta} - 1)),
  // independent of the common phase.
  const double s = radius * radius;
  CMatrix gram(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index jp = 0; jp < n; ++jp) {
      gram(j, jp) = j == jp ? cplx(1.0) : exp_phase_minus_one(s, static_cast<double>(j - jp) * p.theta);
    }
  }
  frame.gram = HermitianMatrix(std::move(gram));
  frame.factor = loewdin_factor(frame.gram, epsilon);
  return frame;
}

TwoModeDensityMatrix assemble_pure_state(const SystemParams& p, const TruncationPlan& plan,
                                         std::shared_ptr<const CoherentFrame> frame) {
  if (!p.lossless()) throw std::invalid_argument("assemble_pure_state requires zero loss");
  require_family(plan, *frame);
  const Index rank = frame->rank();
  const CVector c = mode1_amplitudes(p, plan);
  const CMatrix& a = frame->factor.columns;

  CVector psi(plan.n1_dim() * rank);
  for (Index m = 0; m < plan.n1_dim(); ++m) psi.segment(m * rank, rank) = c(m) * a.col(m);
  return finish(psi * psi.adjoint(), p, plan, std::move(frame));
}

TwoModeDensityMatrix assemble_lossy_rho(const SystemParams& p, const TruncationPlan& plan,
                                        std::shared_ptr<const CoherentFrame> frame) {
  require_family(plan, *frame);
  const Index rank = frame->rank();
  const Index n1 = plan.n1_dim();
  const Index nk = plan.k_cutoff + 1;
  const CVector c = mode1_amplitudes(p, plan);
  const RVector q = lost_photon_weights(p, plan);
  const CMatrix f = loss_branch_overlaps(p, plan);
  const CMatrix& a = frame->factor.columns;

  // Y[(m,r), k] = c_m sqrt(q_k) A[r][m+k]; Y Y^dagger performs the k-sum.
  CMatrix y(n1 * rank, nk);
  for (Index m = 0; m < n1; ++m) {
    for (Index k = 0; k < nk; ++k) {
      y.block(m * rank, k, rank, 1) = (c(m) * std::sqrt(q(k))) * a.col(m + k);
    }
  }
  CMatrix rho = y * y.adjoint();
  for (Index m = 0; m < n1; ++m) {
    for (Index mp = 0; mp < n1; ++mp) {
      if (m != mp) rho.block(m * rank, mp * rank, rank, rank) *= f(m, mp);
    }
  }
  return finish(std::move(rho), p, plan, std::move(frame));
}

TwoModeDensityMatrix assemble_lossy_rho_direct(const SystemParams& p, const TruncationPlan& plan,
                                               std::shared_ptr<const CoherentFrame> frame) {
  require_family(plan, *frame);
  const Index rank = frame->rank();
  const Index n1 = plan.n1_dim();
  const Index nk = plan.k_cutoff + 1;
  const CVector c = mode1_amplitudes(p, plan);
  const RVector q = lost_photon_weights(p, plan);
  const CMatrix f = loss_branch_overlaps(p, plan);
  const CMatrix& a = frame->factor.columns;

  CMatrix rho = CMatrix::Zero(n1 * rank, n1 * rank);
  for (Index m = 0; m < n1; ++m) {
    for (Index mp = 0; mp < n1; ++mp) {
      const cplx pref = c(m) * std::conj(c(mp)) * f(m, mp);
      for (Index r = 0; r < rank; ++r) {
        for (Index rp = 0; rp < rank; ++rp) {
          cplx acc{0.0, 0.0};
          for (Index k = 0; k < nk; ++k) acc += q(k) * a(r, m + k) * std::conj(a(rp, mp + k));
          rho(m * rank + r, mp * rank + rp) = pref * acc;
        }
      }
    }
  }
  return finish(std::move(rho), p, plan, std::move(frame));
}

TwoModeDensityMatrix build_state(const SystemParams& p, double sigma, double epsilon) {
  const auto plan = plan_truncation(p, sigma);
  auto frame = std::make_shared<const CoherentFrame>(build_frame(p, plan, epsilon));
  if (p.lossless()) return assemble_pure_state(p, plan, std::move(frame));
  return assemble_lossy_rho(p, plan, std::move(frame));
}

}  // namespace xkerr
