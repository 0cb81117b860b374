// Reduced two-mode density matrix of the cross-Kerr state after photon loss.
//
// Mode 1 (the weak beam) is kept in the Fock basis |0>..|N1>. Mode 2 (the
// macroscopic beam) is never Fock-expanded: it lives in the span of the
// coherent family |t2 beta e^{i beta_phase} e^{-i j theta}>, j = 0..N1+K,
// orthonormalized through an eigen-truncated Gram factor. Loss on both modes
// is traced out in closed form:
//
//   rho[(m,r),(m',r')] = sum_k q_k c_m conj(c_m') F(m,m') A[r][m+k] conj(A[r'][m'+k])
//
// with c_m the transmitted Poisson amplitudes of mode 1 (including the initial
// phase e^{i m alpha_phase}), q_k the Poisson weights of the photons lost from
// mode 1, F(m,m') = exp(r2^2 beta^2 (e^{i(m'-m)theta} - 1)) the overlap of the
// mode-2 loss branches, and A the frame factor.
#pragma once

#include "xkerr/linalg.hpp"
#include "xkerr/optics.hpp"

#include <memory>
#include <vector>

namespace xkerr {

struct SystemParams {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  LossParams loss1;
  LossParams loss2;
  double alpha_phase = 0.0;
  double beta_phase = 0.0;

  static SystemParams symmetric(double alpha, double beta, double theta, double loss);
  static SystemParams asymmetric(double alpha, double beta, double theta, double loss1, double loss2);
  bool lossless() const { return loss1.lossless() && loss2.lossless(); }
};

inline constexpr double kDefaultSigma = 7.0;
/// Discarded Poisson mass allowed per truncated sum (mode 1 and lost photons).
inline constexpr double kTailTarget = 5e-11;

struct TruncationPlan {
  int n1_cutoff = 0;  // mode-1 Fock states 0..n1_cutoff
  int k_cutoff = 0;   // photons lost from mode 1, 0..k_cutoff
  double sigma = kDefaultSigma;
  double tail_mass = 0.0;

  int n1_dim() const { return n1_cutoff + 1; }
  int family_size() const { return n1_cutoff + k_cutoff + 1; }
};

TruncationPlan plan_truncation(const SystemParams& p, double sigma = kDefaultSigma);

struct CoherentFrame {
  std::vector<Amplitude> amplitudes;
  HermitianMatrix gram;
  FrameFactor factor;

  Index rank() const { return factor.rank; }
  Index size() const { return static_cast<Index>(amplitudes.size()); }
  /// Frame-basis matrix <e_r|op|e_r'> of a mode-2 operator.
  CMatrix operator_matrix(CoherentOp op) const;
};

CoherentFrame build_frame(const SystemParams& p, const TruncationPlan& plan,
                          double epsilon = kDefaultFrameEpsilon);

struct TwoModeDensityMatrix {
  Index n1_dim = 0;
  Index frame_rank = 0;
  HermitianMatrix matrix;  // index m * frame_rank + r
  SystemParams params;
  TruncationPlan plan;
  std::shared_ptr<const CoherentFrame> frame;
  double trace_error = 0.0;  // |1 - trace| before renormalization

  Index dim() const { return matrix.dim(); }
};

/// |psi><psi| for the lossless state. Throws std::invalid_argument with loss.
TwoModeDensityMatrix assemble_pure_state(const SystemParams& p, const TruncationPlan& plan,
                                         std::shared_ptr<const CoherentFrame> frame);

/// Lossy reduced state; stacks the k-sum into one GEMM followed by a
/// block-wise Hadamard product with c_m conj(c_m') F(m,m').
TwoModeDensityMatrix assemble_lossy_rho(const SystemParams& p, const TruncationPlan& plan,
                                        std::shared_ptr<const CoherentFrame> frame);

/// Same result as assemble_lossy_rho by the explicit four-index contraction.
/// O(N1^2 R^2 K); reference path for tests and benchmarks.
TwoModeDensityMatrix assemble_lossy_rho_direct(const SystemParams& p, const TruncationPlan& plan,
                                               std::shared_ptr<const CoherentFrame> frame);

/// Plan, frame and assembly in one call (pure path when lossless).
TwoModeDensityMatrix build_state(const SystemParams& p, double sigma = kDefaultSigma,
                                 double epsilon = kDefaultFrameEpsilon);

}  // namespace xkerr
