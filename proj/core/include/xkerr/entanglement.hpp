#pragma once

#include "xkerr/linalg.hpp"
#include "xkerr/state.hpp"

namespace xkerr {

struct LNResult {
  double ln_value = 0.0;      // log2 of the trace norm, clamped at 0
  double raw_ln = 0.0;        // unclamped
  double trace_norm = 1.0;    // ||rho^{T_1}||_1
  double min_eigenvalue = 0.0;
  Index n1_dim = 0;
  Index frame_rank = 0;
};

/// Values of log2||rho^T||_1 in (-1e-9, 0) are eigensolver noise on separable
/// states and are reported as 0.
inline constexpr double kLnClampTolerance = 1e-9;

/// Transpose over the Fock-indexed mode: block (m, m') <- block (m', m).
HermitianMatrix partial_transpose_mode1(const TwoModeDensityMatrix& rho);

LNResult log_negativity(const TwoModeDensityMatrix& rho);

/// Logarithmic negativity of a generic d1 x d2 bipartite density matrix,
/// transposing the first factor.
LNResult log_negativity(const HermitianMatrix& rho, Index d1, Index d2);

/// log2((sum_n sqrt(p_n))^2) for Poisson(alpha^2) weights p_n: the LN of a pure
/// state whose Schmidt coefficients are those weights, reached when the
/// macroscopic branches become orthogonal.
double lossless_saturation_ln(double alpha);

}  // namespace xkerr
