#include "xkerr/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xkerr {

HermitianMatrix partial_transpose_mode1(const TwoModeDensityMatrix& rho) {
  return HermitianMatrix::trusted(partial_transpose_first(rho.matrix.matrix(), rho.n1_dim, rho.frame_rank));
}

LNResult log_negativity(const HermitianMatrix& rho, Index d1, Index d2) {
  const auto pt = HermitianMatrix::trusted(partial_transpose_first(rho.matrix(), d1, d2));
  const auto eig = hermitian_eigen(pt, false);
  LNResult out;
  out.n1_dim = d1;
  out.frame_rank = d2;
  out.trace_norm = eig.eigenvalues.cwiseAbs().sum();
  out.min_eigenvalue = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  out.raw_ln = std::log2(out.trace_norm);
  if (out.raw_ln < -kLnClampTolerance) {
    throw NumericalError("log_negativity: trace norm below 1 (" + std::to_string(out.trace_norm) +
                         "); input is not a normalized density matrix");
  }
  out.ln_value = std::max(out.raw_ln, 0.0);
  return out;
}

LNResult log_negativity(const TwoModeDensityMatrix& rho) {
  return log_negativity(rho.matrix, rho.n1_dim, rho.frame_rank);
}

double lossless_saturation_ln(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("lossless_saturation_ln: alpha must be >= 0");
  const double mean = alpha * alpha;
  if (mean == 0.0) return 0.0;
  double sum = 0.0;
  double mass = 0.0;
  for (int n = 0;; ++n) {
    const double pn = std::exp(log_poisson(mean, n));
    sum += std::sqrt(pn);
    mass += pn;
    // sqrt(p_n) decays slower than p_n; stop once both are negligible.
    if (n > mean && 1.0 - mass <= 1e-14 && std::sqrt(pn) <= 1e-17 * sum) break;
  }
  return 2.0 * std::log2(sum);
}

}  // namespace xkerr
