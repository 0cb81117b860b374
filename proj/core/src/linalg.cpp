#include "xkerr/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xkerr {

HermiticityDefect hermiticity_defect(const CMatrix& m) {
  HermiticityDefect worst;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst.magnitude) worst = {d, i, j};
    }
  }
  return worst;
}

HermitianMatrix::HermitianMatrix(CMatrix entries, double tolerance) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw NumericalError("HermitianMatrix: matrix is not square (" +
                         std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()) +
                         ")");
  }
  const auto defect = hermiticity_defect(entries_);
  if (defect.magnitude > tolerance) {
    std::ostringstream os;
    os << "HermitianMatrix: entry (" << defect.row << "," << defect.col
       << ") differs from the conjugate of its mirror by " << defect.magnitude
       << " (tolerance " << tolerance << ")";
    throw NumericalError(os.str());
  }
}

HermitianMatrix HermitianMatrix::trusted(CMatrix entries) {
  HermitianMatrix h;
  h.entries_ = std::move(entries);
  return h;
}

EigenDecomposition hermitian_eigen(const HermitianMatrix& m, bool compute_vectors) {
  if (m.dim() == 0) return {};
  // Reads the lower triangle only; Hermiticity was checked on construction.
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(
      m.matrix(), compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigen: eigensolver failed to converge (dim " +
                         std::to_string(m.dim()) + ")");
  }
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  if (compute_vectors) out.eigenvectors = solver.eigenvectors();
  return out;
}

double trace_norm(const HermitianMatrix& m) {
  return hermitian_eigen(m, false).eigenvalues.cwiseAbs().sum();
}

CMatrix FrameFactor::dual() const {
  CMatrix d = kept_vectors;
  for (Index r = 0; r < rank; ++r) d.col(r) /= std::sqrt(kept_eigenvalues(r));
  return d;
}

FrameFactor loewdin_factor(const HermitianMatrix& gram, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("loewdin_factor: epsilon must be > 0");
  const Index n = gram.dim();
  FrameFactor f;
  if (n == 0) return f;

  const auto eig = hermitian_eigen(gram, true);
  const double lambda_max = eig.eigenvalues(n - 1);
  if (!(lambda_max > 0.0)) throw NumericalError("loewdin_factor: Gram matrix has no positive eigenvalue");
  if (eig.eigenvalues(0) < -1e-8 * lambda_max) {
    std::ostringstream os;
    os << "loewdin_factor: Gram matrix is not positive semidefinite (eigenvalue "
       << eig.eigenvalues(0) << ", largest " << lambda_max << ")";
    throw NumericalError(os.str());
  }

  const double cut = epsilon * lambda_max;
  Index kept = 0;
  for (Index i = 0; i < n; ++i) {
    if (eig.eigenvalues(i) >= cut) {
      ++kept;
    } else {
      f.dropped_mass += std::max(eig.eigenvalues(i), 0.0);
    }
  }

  f.rank = kept;
  f.kept_eigenvalues.resize(kept);
  f.kept_vectors.resize(n, kept);
  // Largest eigenvalue first.
  for (Index r = 0; r < kept; ++r) {
    const Index src = n - 1 - r;
    f.kept_eigenvalues(r) = eig.eigenvalues(src);
    f.kept_vectors.col(r) = eig.eigenvectors.col(src);
  }
  f.columns = f.kept_vectors.adjoint();
  for (Index r = 0; r < kept; ++r) f.columns.row(r) *= std::sqrt(f.kept_eigenvalues(r));
  return f;
}

CMatrix partial_transpose_first(const CMatrix& m, Index d1, Index d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2) {
    throw std::invalid_argument("partial_transpose_first: dimension mismatch");
  }
  CMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < d1; ++i) {
    for (Index ip = 0; ip < d1; ++ip) {
      out.block(i * d2, ip * d2, d2, d2) = m.block(ip * d2, i * d2, d2, d2);
    }
  }
  return out;
}

cplx bipartite_expectation(const CMatrix& rho, Index d1, Index d2, const CMatrix& a,
                           const CMatrix& b) {
  if (rho.rows() != d1 * d2 || rho.cols() != d1 * d2) {
    throw std::invalid_argument("bipartite_expectation: dimension mismatch");
  }
  const bool a_identity = a.size() == 0;
  const bool b_identity = b.size() == 0;
  cplx total{0.0, 0.0};
  for (Index i = 0; i < d1; ++i) {
    for (Index ip = 0; ip < d1; ++ip) {
      // Tr(rho (A x B)) = sum_{i,i'} A(i',i) * Tr(block(i,i') B)
      const cplx a_elem = a_identity ? cplx(i == ip ? 1.0 : 0.0) : a(ip, i);
      if (a_elem == cplx(0.0)) continue;
      const auto blk = rho.block(i * d2, ip * d2, d2, d2);
      const cplx tr = b_identity ? blk.trace() : blk.cwiseProduct(b.transpose()).sum();
      total += a_elem * tr;
    }
  }
  return total;
}

CMatrix partial_trace_second(const CMatrix& m, Index d1, Index d2) {
  CMatrix out(d1, d1);
  for (Index i = 0; i < d1; ++i)
    for (Index ip = 0; ip < d1; ++ip) out(i, ip) = m.block(i * d2, ip * d2, d2, d2).trace();
  return out;
}

CMatrix partial_trace_first(const CMatrix& m, Index d1, Index d2) {
  CMatrix out = CMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

}  // namespace xkerr
