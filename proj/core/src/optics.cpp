#include "xkerr/optics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace xkerr {
namespace {

constexpr cplx kI{0.0, 1.0};

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double log_poisson(double mean, int n) {
  if (n < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

double poisson_amplitude(double alpha_sq, int n) {
  if (alpha_sq < 0.0 || n < 0) throw std::invalid_argument("poisson_amplitude: negative argument");
  return std::exp(0.5 * log_poisson(alpha_sq, n));
}

double poisson_upper_tail(double mean, int cutoff) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = std::max(cutoff + 1, 0);; ++n) {
    const double term = std::exp(log_poisson(mean, n));
    tail += term;
    // Past the mode the terms fall off at least geometrically.
    if (n > mean && term <= 1e-18 * tail) break;
    if (n > mean && term == 0.0) break;
  }
  return tail;
}

cplx coherent_overlap(Amplitude g1, Amplitude g2) {
  const double dist_sq = std::norm(g1 - g2);
  const double phase = (std::conj(g1) * g2).imag();
  return std::exp(cplx(-0.5 * dist_sq, phase));
}

cplx exp_phase_minus_one(double s, double phi) {
  // e^{i phi} - 1 = -2 sin^2(phi/2) + i sin(phi)
  const double h = std::sin(0.5 * phi);
  return std::exp(cplx(-2.0 * s * h * h, s * std::sin(phi)));
}

CoherentOp parse_coherent_op(std::string_view label) {
  if (label == "a") return CoherentOp::kA;
  if (label == "adag") return CoherentOp::kAdag;
  if (label == "n") return CoherentOp::kN;
  if (label == "n2") return CoherentOp::kN2;
  if (label == "a2") return CoherentOp::kA2;
  if (label == "adag2") return CoherentOp::kAdag2;
  if (label == "adag_a") return CoherentOp::kAdagA;
  if (label == "x") return CoherentOp::kX;
  if (label == "p") return CoherentOp::kP;
  if (label == "x2") return CoherentOp::kX2;
  if (label == "p2") return CoherentOp::kP2;
  if (label == "xp_sym") return CoherentOp::kXPSym;
  throw std::invalid_argument("unsupported coherent operator label '" + std::string(label) + "'");
}

cplx coherent_matrix_element(Amplitude g1, Amplitude g2, CoherentOp op) {
  const cplx s = coherent_overlap(g1, g2);
  const cplx bra = std::conj(g1);  // a^dagger acting left
  const cplx ket = g2;             // a acting right
  const cplx n = bra * ket;
  switch (op) {
    case CoherentOp::kA:
      return ket * s;
    case CoherentOp::kAdag:
      return bra * s;
    case CoherentOp::kN:
    case CoherentOp::kAdagA:
      return n * s;
    case CoherentOp::kN2:
      return (n + n * n) * s;
    case CoherentOp::kA2:
      return ket * ket * s;
    case CoherentOp::kAdag2:
      return bra * bra * s;
    case CoherentOp::kX:
      return 0.5 * (ket + bra) * s;
    case CoherentOp::kP:
      return (ket - bra) / (2.0 * kI) * s;
    case CoherentOp::kX2:
      return 0.25 * (ket * ket + bra * bra + 2.0 * n + 1.0) * s;
    case CoherentOp::kP2:
      return -0.25 * (ket * ket + bra * bra - 2.0 * n - 1.0) * s;
    case CoherentOp::kXPSym:
      return (ket * ket - bra * bra) / (4.0 * kI) * s;
  }
  throw std::invalid_argument("coherent_matrix_element: unknown operator");
}

namespace fock {

CMatrix annihilation(Index dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix creation(Index dim) { return annihilation(dim).adjoint(); }

CMatrix number(Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Index n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

CMatrix number_squared(Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Index n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n) * static_cast<double>(n);
  return m;
}

CMatrix x(Index dim) {
  const CMatrix a = annihilation(dim);
  return 0.5 * (a + a.adjoint());
}

CMatrix p(Index dim) {
  const CMatrix a = annihilation(dim);
  return (a - a.adjoint()) / (2.0 * kI);
}

namespace {
// a^2 with exact entries <n-2|a^2|n> = sqrt(n(n-1)).
CMatrix a_squared(Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Index n = 2; n < dim; ++n) m(n - 2, n) = std::sqrt(static_cast<double>(n) * (n - 1));
  return m;
}
}  // namespace

CMatrix x_squared(Index dim) {
  const CMatrix a2 = a_squared(dim);
  CMatrix m = 0.25 * (a2 + a2.adjoint());
  for (Index n = 0; n < dim; ++n) m(n, n) += 0.25 * (2.0 * n + 1.0);
  return m;
}

CMatrix p_squared(Index dim) {
  const CMatrix a2 = a_squared(dim);
  CMatrix m = -0.25 * (a2 + a2.adjoint());
  for (Index n = 0; n < dim; ++n) m(n, n) += 0.25 * (2.0 * n + 1.0);
  return m;
}

CMatrix identity(Index dim) { return CMatrix::Identity(dim, dim); }

CVector coherent_state(Amplitude g, Index dim) {
  CVector v(dim);
  const double mag = std::abs(g);
  const double arg = std::arg(g);
  for (Index n = 0; n < dim; ++n) {
    v(n) = poisson_amplitude(mag * mag, static_cast<int>(n)) *
           std::exp(kI * (arg * static_cast<double>(n)));
  }
  return v;
}

}  // namespace fock

CVector kerr_unitary_diagonal(double theta, Index d1, Index d2) {
  CVector diag(d1 * d2);
  for (Index n1 = 0; n1 < d1; ++n1) {
    for (Index n2 = 0; n2 < d2; ++n2) {
      const double phase = -theta * static_cast<double>(n1) * static_cast<double>(n2);
      diag(n1 * d2 + n2) = cplx(std::cos(phase), std::sin(phase));
    }
  }
  return diag;
}

LossParams LossParams::from_loss(double loss) {
  if (!(loss >= 0.0 && loss < 1.0)) {
    throw std::invalid_argument("loss must lie in [0, 1), got " + std::to_string(loss));
  }
  LossParams p;
  p.loss = loss;
  p.t = std::sqrt(1.0 - loss);
  p.r = std::sqrt(loss);
  return p;
}

int kraus_truncation_index(const LossParams& loss, double mean_photons) {
  if (loss.lossless()) return 0;
  const double mean = loss.loss * std::max(mean_photons, 0.0);
  double cumulative = 0.0;
  for (int j = 0;; ++j) {
    cumulative += std::exp(log_poisson(mean, j));
    if (cumulative >= 1.0 - 1e-12) return j;
    if (j > 100000) throw NumericalError("kraus_truncation_index: no convergence");
  }
}

std::vector<CMatrix> loss_channel_kraus(const LossParams& loss, Index cutoff) {
  if (cutoff < 1) throw std::invalid_argument("loss_channel_kraus: cutoff must be >= 1");
  if (loss.lossless()) return {CMatrix::Identity(cutoff, cutoff)};
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(cutoff));
  const double log_t = std::log(loss.t);
  const double log_r = std::log(loss.r);
  for (Index j = 0; j < cutoff; ++j) {
    CMatrix k = CMatrix::Zero(cutoff, cutoff);
    for (Index n = j; n < cutoff; ++n) {
      const int ni = static_cast<int>(n);
      const int ji = static_cast<int>(j);
      k(n - j, n) = std::exp(0.5 * log_binomial(ni, ji) + (ni - ji) * log_t + ji * log_r);
    }
    ops.push_back(std::move(k));
  }
  return ops;
}

std::vector<CMatrix> loss_channel_kraus(const LossParams& loss, Index cutoff, double mean_photons) {
  auto ops = loss_channel_kraus(loss, cutoff);
  const auto keep = static_cast<std::size_t>(kraus_truncation_index(loss, mean_photons)) + 1;
  if (keep < ops.size()) ops.resize(keep);
  return ops;
}

}  // namespace xkerr
