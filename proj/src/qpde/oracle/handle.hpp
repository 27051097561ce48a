#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qpde/circuit/circuit.hpp"

namespace qpde {

/// An (alpha, |flags|, epsilon)-block-encoding. The circuit's qubits are
/// partitioned into `data`, `flags` (must return |0> for the encoded action)
/// and `pure` (borrowed scratch, restored by construction). Qubit lists are
/// least significant bit first.
struct BlockEncodingHandle {
    Circuit circuit;
    double alpha = 1.0;
    double epsilon = 0.0;
    long long dim = 0;
    std::vector<int> data;
    std::vector<int> flags;
    std::vector<int> pure;

    void validate() const; // partition + parameter sanity, throws on violation
};

/// Dense matrix the handle encodes, times alpha (simulator extraction; the
/// non-data qubits are the postselected-to-zero block).
Eigen::MatrixXcd extract_encoded(const BlockEncodingHandle& h);

/// alpha = 1 encoding of the identity on n qubits.
BlockEncodingHandle identity_encoding(int n);

/// Encodes the zero matrix on n qubits (alpha = 1): a single flag qubit is
/// flipped so the postselected block vanishes identically.
BlockEncodingHandle zero_encoding(int n);

/// Exact (alpha, 1, 0)-encoding of an arbitrary square matrix with
/// ||A|| <= alpha, via the unitary dilation of A/alpha synthesized gate by
/// gate. Dense cost: intended for small dimensions (tests, references).
BlockEncodingHandle dense_encoding(const Eigen::MatrixXcd& A, double alpha);

/// Encodes sum_k w_k A_k with alpha_out = sum_k |w_k| alpha_k. Branch circuits
/// share the data register, a pooled flag register and a pooled scratch
/// register; the select register joins the flag list.
BlockEncodingHandle lcu_combine(const std::vector<BlockEncodingHandle>& handles,
                                const std::vector<cplx>& weights);

/// Encodes A1 (x) A2 with alpha = alpha1 * alpha2. h2's data register is the
/// low factor of the Kronecker index.
BlockEncodingHandle tensor(const BlockEncodingHandle& h1, const BlockEncodingHandle& h2);

/// Encodes the matrix product A1 * A2 (h2's circuit runs first) on a shared
/// data register, alpha = alpha1 * alpha2.
BlockEncodingHandle product(const BlockEncodingHandle& h1, const BlockEncodingHandle& h2);

std::string serialize_handle(const BlockEncodingHandle& h);
BlockEncodingHandle deserialize_handle(const std::string& text);

} // namespace qpde
