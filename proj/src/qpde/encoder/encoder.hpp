#pragma once

#include "qpde/fd/discretize.hpp"
#include "qpde/oracle/handle.hpp"
#include "qpde/schro/schro.hpp"

namespace qpde {

/// Block-encoding of diag(f) * D for a purely banded (circulant) profile:
/// uniform superposition over the band index, amplitude load of the band
/// values, banded index shift, coefficient oracle on the shifted index, then
/// the adjoint shift and unpreparation. alpha = kappa * N_D * alpha_f.
BlockEncodingHandle encode_term_periodic(const BandedProfile& profile,
                                         const PiecewisePolynomial& f, int n,
                                         double tol = 1e-9);

/// Same for a profile with deviating boundary rows: the banded branch kills
/// the boundary rows through a row flag, and the boundary entries are revived
/// by a per-element branch with controlled rotations; the two branches are
/// combined by LCU.
BlockEncodingHandle encode_term_robin(const BandedProfile& profile,
                                      const PiecewisePolynomial& f, int n,
                                      double tol = 1e-9);

/// Encoding of (diag(f) * D)^dagger.
BlockEncodingHandle encode_term_adjoint(const BandedProfile& profile,
                                        const PiecewisePolynomial& f, int n,
                                        double tol = 1e-9);

/// Encoding of sqrt(2^n) * diag(v + v') where `smooth` is the volumetric
/// source (may be null) and `spikes` lists the boundary-localized corrections
/// as (index, value) pairs. Returns a zero encoding when both parts vanish.
BlockEncodingHandle encode_B(const PiecewisePolynomial* smooth,
                             const std::vector<std::pair<long long, cplx>>& spikes,
                             int n, double tol = 1e-9);

/// Hermitian part (which = 1) or anti-Hermitian-over-i part (which = 2) of the
/// homogenized generator S = [[A, B], [0, 0]], assembled from the A encoding,
/// its adjoint and the optional B encoding on one extra homogenization qubit.
/// Set b_real = false when B has complex entries (doubles the B branches).
BlockEncodingHandle encode_S(const BlockEncodingHandle& hA,
                             const BlockEncodingHandle* hB, int which,
                             bool b_real = true);

struct EncodedHamiltonian {
    BlockEncodingHandle handle;
    double alpha_total = 0.0;
    std::vector<Register> layout;
};

/// Full Schroedingerised Hamiltonian H = S1 (x) diag(x_xi) + S2 (x) 1 with the
/// xi index fastest. The xi coordinate is decomposed exactly over single-qubit
/// Z operators, so its branch contributes no encoding error.
EncodedHamiltonian encode_H_1d(const DiscretizedSystem& sys,
                               const PiecewisePolynomial* source,
                               HomogenizeMode mode, int n_xi, double L_xi,
                               double tol = 1e-9);

/// Multi-dimensional Hamiltonian on d grids of n qubits each (dimension 0 is
/// the fastest index). Each term is a separable coefficient times a tensor
/// product of per-dimension derivative encodings; an optional clock register
/// (slowest index) adds the periodic momentum term p_s. Boundary data must be
/// homogeneous and homogenization uses the identity companion.
EncodedHamiltonian encode_H_multid(const PdeProblemMultiD& problem,
                                   const std::vector<std::vector<StencilSpec>>& stencils,
                                   int n, int n_xi, double L_xi, int n_clock = 0,
                                   double ds = 0.0, double tol = 1e-9);

/// Diagonal block-encoding of a separable coefficient on d grids of n qubits
/// (dimension 0 fastest). Separable summands become tensor products of
/// single-dimension diagonal oracles; a nonempty outer polynomial is applied
/// on top through an eigenvalue transform. Identically-one coefficients give
/// back the identity encoding.
BlockEncodingHandle encode_separable_coefficient(const SeparableFunctionSpec& spec,
                                                 int d, int n, double tol = 1e-9);

/// JSON record {one_qubit, cnot, pure_ancillas, alpha, epsilon} with gate
/// counts taken after multi-control expansion.
std::string resource_report(const BlockEncodingHandle& h);

} // namespace qpde
