#include "xkerr/bruteforce.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xkerr {
namespace {

constexpr cplx kI{0.0, 1.0};

void require_cutoff(double amp, Index d, const char* name) {
  if (amp * amp + 8.0 * amp + 10.0 > static_cast<double>(d)) {
    std::ostringstream os;
    os << "brute_force_state: cutoff " << d << " too small for " << name << " = " << amp
       << " (need " << name << "^2 + 8 " << name << " + 10)";
    throw std::invalid_argument(os.str());
  }
}

// Columns B|n, 0> of the beam splitter, as a (dim*dim) x dim matrix.
CMatrix vacuum_ancilla_columns(const LossParams& loss, Index dim) {
  const CMatrix b = beam_splitter_unitary(loss.t, dim);
  CMatrix cols(dim * dim, dim);
  for (Index n = 0; n < dim; ++n) cols.col(n) = b.col(n * dim);
  return cols;
}

}  // namespace

CMatrix beam_splitter_unitary(double t, Index dim) {
  const double phi = std::atan2(std::sqrt(std::max(0.0, 1.0 - t * t)), t);
  CMatrix u = CMatrix::Identity(dim * dim, dim * dim);
  for (Index total = 0; total < dim; ++total) {
    // Basis |total - q, q>, q = 0..total. H = i (a^dagger b - a b^dagger).
    const Index size = total + 1;
    CMatrix h = CMatrix::Zero(size, size);
    for (Index q = 1; q <= total; ++q) {
      // <total-q+1, q-1| a^dagger b |total-q, q> = sqrt(total-q+1) sqrt(q)
      const double elem = std::sqrt(static_cast<double>(total - q + 1) * static_cast<double>(q));
      h(q - 1, q) = kI * elem;
      h(q, q - 1) = -kI * elem;
    }
    const auto eig = hermitian_eigen(HermitianMatrix(h));
    CVector phases(size);
    for (Index i = 0; i < size; ++i) phases(i) = std::exp(-kI * (phi * eig.eigenvalues(i)));
    const CMatrix block = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
    for (Index q = 0; q < size; ++q) {
      for (Index qp = 0; qp < size; ++qp) {
        u((total - q) * dim + q, (total - qp) * dim + qp) = block(q, qp);
      }
    }
  }
  return u;
}

CMatrix apply_loss_kraus(const CMatrix& rho, const LossParams& loss) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : loss_channel_kraus(loss, rho.rows())) out += k * rho * k.adjoint();
  return out;
}

CMatrix apply_loss_beam_splitter(const CMatrix& rho, const LossParams& loss) {
  const Index dim = rho.rows();
  const CMatrix cols = vacuum_ancilla_columns(loss, dim);
  return partial_trace_second(cols * rho * cols.adjoint(), dim, dim);
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * trace_norm(HermitianMatrix::trusted(a - b));
}

FullFockState brute_force_state(const SystemParams& p, Index d1, Index d2, LossRoute route) {
  require_cutoff(p.alpha, d1, "alpha");
  require_cutoff(p.beta, d2, "beta");

  const CVector v1 = fock::coherent_state(std::polar(p.alpha, p.alpha_phase), d1);
  const CVector v2 = fock::coherent_state(std::polar(p.beta, p.beta_phase), d2);
  const double kept = v1.squaredNorm() * v2.squaredNorm();

  FullFockState out;
  out.d1 = d1;
  out.d2 = d2;
  out.params = p;
  out.leakage = 1.0 - kept;
  if (out.leakage > kMaxLeakage) {
    throw NumericalError("brute_force_state: leakage " + std::to_string(out.leakage) +
                         " exceeds the accepted threshold");
  }

  // psi as a d1 x d2 matrix, Psi(n1, n2).
  CMatrix psi = (v1 * v2.transpose()) / std::sqrt(kept);
  const CVector kerr = kerr_unitary_diagonal(p.theta, d1, d2);
  for (Index n1 = 0; n1 < d1; ++n1)
    for (Index n2 = 0; n2 < d2; ++n2) psi(n1, n2) *= kerr(n1 * d2 + n2);

  // Each column of phi is one branch of the purification; rho = phi phi^dagger.
  CMatrix phi;
  if (route == LossRoute::kKraus) {
    const auto k1 = loss_channel_kraus(p.loss1, d1);
    const auto k2 = loss_channel_kraus(p.loss2, d2);
    phi.resize(d1 * d2, static_cast<Index>(k1.size() * k2.size()));
    Index col = 0;
    for (const auto& a : k1) {
      for (const auto& b : k2) {
        const CMatrix branch = a * psi * b.transpose();
        for (Index n1 = 0; n1 < d1; ++n1) phi.block(n1 * d2, col, d2, 1) = branch.row(n1).transpose();
        ++col;
      }
    }
  } else {
    const CMatrix c1 = vacuum_ancilla_columns(p.loss1, d1);  // (n1', k3) <- n1
    const CMatrix c2 = vacuum_ancilla_columns(p.loss2, d2);  // (n2', k4) <- n2
    // T[(n1',k3), (n2',k4)] = sum c1[(n1',k3), n1] Psi(n1, n2) c2[(n2',k4), n2]
    const CMatrix t = c1 * psi * c2.transpose();
    phi.resize(d1 * d2, d1 * d2);
    for (Index k3 = 0; k3 < d1; ++k3) {
      for (Index k4 = 0; k4 < d2; ++k4) {
        const Index col = k3 * d2 + k4;
        for (Index n1 = 0; n1 < d1; ++n1) {
          for (Index n2 = 0; n2 < d2; ++n2) phi(n1 * d2 + n2, col) = t(n1 * d1 + k3, n2 * d2 + k4);
        }
      }
    }
  }

  CMatrix rho = phi * phi.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  out.rho = HermitianMatrix::trusted(std::move(rho));
  return out;
}

double brute_force_ln(const FullFockState& state) {
  return log_negativity(state.rho, state.d1, state.d2).ln_value;
}

MomentSet brute_force_moments(const FullFockState& state) {
  const Index d1 = state.d1;
  const Index d2 = state.d2;
  const CMatrix& rho = state.rho.matrix();
  const CMatrix none;
  auto ev = [&](const CMatrix& a, const CMatrix& b) {
    return bipartite_expectation(rho, d1, d2, a, b).real();
  };
  MomentSet m;
  m.x1 = ev(fock::x(d1), none);
  m.p1 = ev(fock::p(d1), none);
  m.n1 = ev(fock::number(d1), none);
  m.p1_sq = ev(fock::p_squared(d1), none);
  m.n1_sq = ev(fock::number_squared(d1), none);
  m.x2 = ev(none, fock::x(d2));
  m.p2 = ev(none, fock::p(d2));
  m.n2 = ev(none, fock::number(d2));
  m.p2_sq = ev(none, fock::p_squared(d2));
  m.n2_sq = ev(none, fock::number_squared(d2));
  m.p1_n2 = ev(fock::p(d1), fock::number(d2));
  m.p2_n1 = ev(fock::number(d1), fock::p(d2));
  return m;
}

CMatrix embed_in_fock(const TwoModeDensityMatrix& rho, Index d1, Index d2) {
  const auto& frame = *rho.frame;
  CMatrix family(d2, frame.size());
  for (Index j = 0; j < frame.size(); ++j) family.col(j) = fock::coherent_state(frame.amplitudes[j], d2);
  const CMatrix e = family * frame.factor.dual();  // d2 x R

  const Index n1 = std::min(rho.n1_dim, d1);
  const Index r = rho.frame_rank;
  CMatrix w = CMatrix::Zero(d1 * d2, rho.n1_dim * r);
  for (Index m = 0; m < n1; ++m) w.block(m * d2, m * r, d2, r) = e;
  return w * rho.matrix.matrix() * w.adjoint();
}

}  // namespace xkerr
