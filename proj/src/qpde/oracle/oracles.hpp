#pragma once

#include "qpde/model/piecewise.hpp"
#include "qpde/oracle/handle.hpp"

namespace qpde {

/// Banded sparse access: |0^{n-l} s>|i> -> |r_s + i mod 2^n>|i> for the given
/// column offsets r_s (one per diagonal, s < offsets.size() <= 2^l). Layout:
/// qubits [0, n) shift/output register holding s on input, [n, 2n) the row
/// index, one pure ancilla on top for the adder carry.
Circuit banded_sparse_access(const std::vector<long long>& offsets, int n, int l);

/// |0>|s> -> (D_s/N_D)|0>|s> + sqrt(1 - |D_s/N_D|^2)|1>|s>. The s register is
/// [0, l), the branch flag is qubit l.
Circuit sparse_amplitude_oracle(const std::vector<cplx>& values, double N_D, int l);

/// |i>|0> -> |i>|[K1 <= i <= K2]>. Index register [0, n), flag qubit n,
/// restored scratch above.
Circuit indicator(long long K1, long long K2, int n);

/// H_W^(kappa): |0...0> -> (1/sqrt(kappa)) sum_{s < kappa} |s>. Plain
/// Hadamards when kappa fills the register.
void uniform_prep(Circuit& c, const std::vector<int>& reg, long long kappa);

/// diag(e^{i phi_s}) over the register (phis has 2^|reg| entries).
void diagonal_phases(Circuit& c, const std::vector<int>& reg,
                     const std::vector<double>& phis);

/// Block-encodes diag(f(x_j)) on the uniform grid x_j = a + j(b-a)/(2^n - 1).
/// Internally rescales the domain, loads the coordinate into a one-qubit
/// signal rotation and applies per-segment, per-parity QSP branches under an
/// indicator-selected LCU.
BlockEncodingHandle piecewise_poly_oracle(const PiecewisePolynomial& f, int n,
                                          double tol = 1e-8);

} // namespace qpde
