// Closed-form single-mode quantum optics: Poisson amplitudes, coherent-state
// overlaps and matrix elements, truncated Fock-basis operators, the cross-Kerr
// phase and the pure-loss channel.
//
// Quadrature convention (used everywhere in xkerr):
//
//   x = (a + a^dagger) / 2,   p = (a - a^dagger) / (2i)
//
// so <g|x|g> = Re g, <g|p|g> = Im g, the vacuum variance of either quadrature
// is 1/4 and [n, p] = i x. With this choice the separable-state bound of the
// number-phase witness holds with unit coefficients.
#pragma once

#include "xkerr/linalg.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace xkerr {

using Amplitude = std::complex<double>;

namespace quadrature {
inline constexpr double kVacuumVariance = 0.25;
}

/// sqrt(e^{-a} a^n / n!) evaluated in log space; a = |alpha|^2.
double poisson_amplitude(double alpha_sq, int n);

/// log of the Poisson pmf e^{-mean} mean^n / n!; -inf when mean == 0 and n > 0.
double log_poisson(double mean, int n);

/// Sum of the Poisson pmf over n > cutoff, accumulated directly (no 1 - cdf).
double poisson_upper_tail(double mean, int cutoff);

/// <g1|g2> = exp(-|g1|^2/2 - |g2|^2/2 + conj(g1) g2), evaluated as
/// exp(-|g1 - g2|^2 / 2 + i Im(conj(g1) g2)) to avoid cancellation at large
/// amplitudes.
cplx coherent_overlap(Amplitude g1, Amplitude g2);

/// exp(s (e^{i phi} - 1)) for real s, accurate for small phi. Equals
/// <g|g e^{i phi}> with s = |g|^2, and the characteristic function of
/// Poisson(s) at phi.
cplx exp_phase_minus_one(double s, double phi);

enum class CoherentOp { kA, kAdag, kN, kN2, kA2, kAdag2, kAdagA, kX, kP, kX2, kP2, kXPSym };

/// Parses "a", "adag", "n", "n2", "a2", "adag2", "adag_a", "x", "p", "x2",
/// "p2", "xp_sym"; throws std::invalid_argument otherwise.
CoherentOp parse_coherent_op(std::string_view label);

/// <g1|op|g2> by normal ordering.
cplx coherent_matrix_element(Amplitude g1, Amplitude g2, CoherentOp op);

/// Fock-basis operator matrices on |0>..|dim-1>. Every matrix element is the
/// exact one of the untruncated operator, so x2 and p2 are not products of
/// truncated x, p.
namespace fock {
CMatrix annihilation(Index dim);
CMatrix creation(Index dim);
CMatrix number(Index dim);
CMatrix number_squared(Index dim);
CMatrix x(Index dim);
CMatrix p(Index dim);
CMatrix x_squared(Index dim);
CMatrix p_squared(Index dim);
CMatrix identity(Index dim);
/// Coherent state |g> truncated to dim entries (not renormalized).
CVector coherent_state(Amplitude g, Index dim);
}  // namespace fock

/// Diagonal of exp(-i theta n1 n2) on the product Fock basis, index n1*d2 + n2.
CVector kerr_unitary_diagonal(double theta, Index d1, Index d2);

/// Pure-loss parameters: loss l = r^2, transmissivity t^2 = 1 - l.
struct LossParams {
  double loss = 0.0;
  double t = 1.0;
  double r = 0.0;

  /// Validates l in [0, 1).
  static LossParams from_loss(double loss);
  bool lossless() const { return loss == 0.0; }
};

/// Smallest j with cumulative Poisson(l * mean_photons) mass >= 1 - 1e-12.
int kraus_truncation_index(const LossParams& loss, double mean_photons);

/// Kraus operators K_j = sum_n sqrt(C(n,j)) t^{n-j} r^j |n-j><n|, j = 0..cutoff-1
/// (complete on the cutoff-dimensional space).
std::vector<CMatrix> loss_channel_kraus(const LossParams& loss, Index cutoff);

/// As above, truncated at kraus_truncation_index(loss, mean_photons).
std::vector<CMatrix> loss_channel_kraus(const LossParams& loss, Index cutoff, double mean_photons);

}  // namespace xkerr
