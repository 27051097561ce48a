#pragma once

#include "qpde/oracle/handle.hpp"
#include "qpde/qsvt/qsp.hpp"

namespace qpde {

/// Appends e^{i phi (2P - 1)}, P projecting onto |0...0> of `flags`.
void append_projector_phase(Circuit& c, const std::vector<int>& flags, double phi);

/// Appends the reflection 1 - 2P about the all-zero flag state.
void append_flag_reflection(Circuit& c, const std::vector<int>& flags);

/// Alternating-phase QSVT sequence on the handle's unitary: the flagged block
/// becomes the complex QSP response R(A/alpha) of the phase sequence. With
/// `re_extract` an extra flag qubit symmetrizes the phase signs, leaving the
/// real part Re R. Output alpha = 1; epsilon left to the caller.
BlockEncodingHandle qsvt_poly(const BlockEncodingHandle& h, const PhaseSequence& ps,
                              bool re_extract);

/// Polynomial eigenvalue transformation: encodes P(A/alpha) for Hermitian A
/// with alpha_out = 1. P is a definite-parity real Chebyshev series with
/// sup |P| <= 1/2 on [-1, 1].
BlockEncodingHandle pet_transform(const BlockEncodingHandle& h, const ChebSeries& poly,
                                  double tol = 1e-12);

/// (2, a+2, epsilon)-block-encoding of e^{iHt} for the Hermitian H the handle
/// encodes (signed t gives e^{-iHt}). Jacobi-Anger split into cos/sin QSVT
/// branches, combined by LCU, then one oblivious-amplitude-amplification step.
/// If qsvt_calls is non-null it receives the truncation degree g.
BlockEncodingHandle hamiltonian_simulation(const BlockEncodingHandle& h, double t,
                                           double epsilon, int* qsvt_calls = nullptr);

} // namespace qpde
