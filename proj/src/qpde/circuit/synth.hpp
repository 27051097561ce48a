#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qpde/circuit/circuit.hpp"

namespace qpde {

/// Multiplexed rotation: applies Ry(theta_s) or Rz(theta_s) on `target` where
/// s is the value of `controls` (controls[0] is the least significant bit).
/// Uses the recursive demultiplexing scheme: exactly 2^l rotations and 2^l
/// CNOTs for l >= 1 controls.
void multiplexed_ry(Circuit& c, const std::vector<int>& controls, int target,
                    const std::vector<double>& angles);
void multiplexed_rz(Circuit& c, const std::vector<int>& controls, int target,
                    const std::vector<double>& angles);

/// State preparation on |0...0>: maps it to sum_k sqrt(w_k) |k> for the given
/// nonnegative weights (normalized internally). qubits[0] is the least
/// significant bit of k.
void amplitude_prep(Circuit& c, const std::vector<int>& qubits,
                    const std::vector<double>& weights);

/// In-place modular addition target += addend (mod 2^n) with one borrowed
/// ancilla in |0>, via the Cuccaro ripple-carry adder. The addend register is
/// preserved. Element 0 of each register is the least significant bit.
void cuccaro_add(Circuit& c, const std::vector<int>& target,
                 const std::vector<int>& addend, int ancilla);

/// Classical-constant comparator: flips `flag` iff the value of `reg` is >= K.
/// Borrows `scratch` ancillas (all in |0>, restored); needs at most reg.size()
/// of them. K up to 2^n inclusive (K = 2^n never fires, K = 0 always fires).
void compare_ge_const(Circuit& c, const std::vector<int>& reg, long long K, int flag,
                      const std::vector<int>& scratch);

/// Flips `flag` iff K1 <= value(reg) <= K2. Same scratch contract as
/// compare_ge_const but needs up to 2*reg.size() + 2 scratch qubits.
void indicator_range(Circuit& c, const std::vector<int>& reg, long long K1, long long K2,
                     int flag, const std::vector<int>& scratch);

/// Permutation of computational basis states on `reg`: |s> -> |pi(s)> for each
/// pair (s, pi(s)) in `assign`; unlisted states may move arbitrarily (they are
/// permuted among themselves). Images must be distinct.
void basis_permutation(Circuit& c, const std::vector<int>& reg,
                       const std::vector<std::pair<long long, long long>>& assign);

/// Exact synthesis of an arbitrary d x d unitary (d = 2^reg.size()) into
/// multi-controlled gates via a two-level (Givens) decomposition. Meant for
/// small blocks only (d <= 64).
void circuit_from_unitary(Circuit& c, const std::vector<int>& reg,
                          const Eigen::MatrixXcd& u, double tol = 1e-10);

} // namespace qpde
