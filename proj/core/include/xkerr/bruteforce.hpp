// Ground truth at small amplitudes: both modes in a truncated Fock basis,
// the Kerr phase applied exactly, loss applied by explicit channels. Slow and
// obvious on purpose; every fast path is checked against it.
#pragma once

#include "xkerr/entanglement.hpp"
#include "xkerr/state.hpp"
#include "xkerr/witness.hpp"

namespace xkerr {

struct FullFockState {
  Index d1 = 0;
  Index d2 = 0;
  HermitianMatrix rho;  // index n1 * d2 + n2
  double leakage = 0.0;  // input norm lost to the cutoffs, before renormalization
  SystemParams params;
};

enum class LossRoute {
  kKraus,        // loss_channel_kraus on each mode
  kBeamSplitter  // beam-splitter unitary with a vacuum ancilla, ancilla traced out
};

inline constexpr double kMaxLeakage = 1e-10;

/// Requires alpha^2 + 8 alpha + 10 <= d1 and beta^2 + 8 beta + 10 <= d2.
FullFockState brute_force_state(const SystemParams& p, Index d1, Index d2,
                                LossRoute route = LossRoute::kKraus);

double brute_force_ln(const FullFockState& state);

MomentSet brute_force_moments(const FullFockState& state);

/// exp(phi (a^dagger b - a b^dagger)) with cos(phi) = t on the two-mode space
/// |n, m>, index n * dim + m. Built block by block in total photon number
/// N < dim (each block is a spin-N/2 representation of SU(2)); identity on
/// the remaining, truncated blocks.
CMatrix beam_splitter_unitary(double t, Index dim);

/// Single-mode pure-loss channel through Kraus operators (all dim of them).
CMatrix apply_loss_kraus(const CMatrix& rho, const LossParams& loss);

/// Single-mode pure-loss channel through beam_splitter_unitary and a vacuum
/// ancilla.
CMatrix apply_loss_beam_splitter(const CMatrix& rho, const LossParams& loss);

/// (1/2) ||a - b||_1 for Hermitian a, b.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Maps a frame-basis density matrix into the d1 x d2 Fock basis by expanding
/// every frame vector in Fock states. Mode-1 levels beyond d1 are dropped.
CMatrix embed_in_fock(const TwoModeDensityMatrix& rho, Index d1, Index d2);

}  // namespace xkerr
