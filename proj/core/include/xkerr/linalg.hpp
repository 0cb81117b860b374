// Dense complex linear algebra used throughout xkerr: Hermitian eigenproblems,
// trace norms, rank-revealing factorization of Gram matrices and a couple of
// bipartite (tensor-product) helpers.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace xkerr {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a numerical precondition fails (non-Hermitian input, non-PSD
/// Gram matrix, truncation too small, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kDefaultFrameEpsilon = 1e-12;

/// Square complex matrix that is Hermitian within an absolute tolerance.
/// Construction validates and rejects with the worst-violating entry.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(CMatrix entries, double tolerance = kHermitianTolerance);

  /// Skips validation; for callers that build the matrix Hermitian by
  /// construction (e.g. mirrored triangles).
  static HermitianMatrix trusted(CMatrix entries);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  cplx operator()(Index i, Index j) const { return entries_(i, j); }
  double trace() const { return entries_.trace().real(); }

 private:
  CMatrix entries_;
};

/// Largest |m(i,j) - conj(m(j,i))| and where it occurs.
struct HermiticityDefect {
  double magnitude = 0.0;
  Index row = 0;
  Index col = 0;
};
HermiticityDefect hermiticity_defect(const CMatrix& m);

struct EigenDecomposition {
  RVector eigenvalues;  // ascending
  CMatrix eigenvectors;  // columns; empty when only eigenvalues were requested
};

EigenDecomposition hermitian_eigen(const HermitianMatrix& m, bool compute_vectors = true);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianMatrix& m);

/// Eigen-truncated factor of a PSD Gram matrix G: columns = sqrt(L) U^dagger over
/// the kept eigenpairs so that columns^dagger * columns ~ G.
struct FrameFactor {
  Index rank = 0;
  CMatrix columns;            // rank x family_size
  RVector kept_eigenvalues;   // descending, length rank
  CMatrix kept_vectors;       // family_size x rank
  double dropped_mass = 0.0;  // sum of discarded (clamped) eigenvalues

  Index family_size() const { return columns.cols(); }

  /// Pseudo-inverse U L^{-1/2} (family_size x rank); maps frame coordinates
  /// back to coefficients over the family.
  CMatrix dual() const;
};

FrameFactor loewdin_factor(const HermitianMatrix& gram, double epsilon = kDefaultFrameEpsilon);

// Bipartite helpers on a d1*d2 product basis, index (i, j) -> i*d2 + j.

/// Transpose of the first tensor factor: (i,j),(i',j') <- (i',j),(i,j').
CMatrix partial_transpose_first(const CMatrix& m, Index d1, Index d2);

/// Tr(rho (A (x) B)); an empty A or B stands for the identity.
cplx bipartite_expectation(const CMatrix& rho, Index d1, Index d2, const CMatrix& a,
                           const CMatrix& b);

/// Reduced state of the first / second factor.
CMatrix partial_trace_second(const CMatrix& m, Index d1, Index d2);
CMatrix partial_trace_first(const CMatrix& m, Index d1, Index d2);

}  // namespace xkerr
