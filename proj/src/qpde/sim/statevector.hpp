#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qpde/circuit/circuit.hpp"

namespace qpde {

/// Dense state vector. Qubit 0 is the least significant bit of the amplitude
/// index, so a register listed low-to-high reads off directly as an integer.
struct StateVector {
    int n = 0;
    Eigen::VectorXcd amp;

    static StateVector zero_state(int n);
    static StateVector basis(int n, long long index);
    double norm() const { return amp.norm(); }
};

constexpr int kMaxSimQubits = 28;

void apply(const Circuit& c, StateVector& psi);

/// Applies the circuit to each computational basis state of the listed data
/// qubits (all other qubits |0>) and reads back the block where every
/// non-data qubit returns to |0>. data[0] is the least significant bit.
Eigen::MatrixXcd extract_block(const Circuit& c, const std::vector<int>& data);

struct PostselectResult {
    double probability = 0.0;
    StateVector state; // same qubit count, selected qubits pinned
};

/// Projects the listed qubits onto the bits of `outcome` and renormalizes.
/// Throws if the outcome probability is below `min_prob`.
PostselectResult postselect(const StateVector& psi, const std::vector<int>& qubits,
                            long long outcome, double min_prob = 1e-14);

/// Probability of measuring all listed qubits as the bits of `outcome`.
double outcome_probability(const StateVector& psi, const std::vector<int>& qubits,
                           long long outcome);

/// Reduced amplitudes over `keep` (keep[0] least significant) with all other
/// qubits postselected to |0>; not renormalized.
Eigen::VectorXcd slice_amplitudes(const StateVector& psi, const std::vector<int>& keep);

/// QFT convention: |k> -> (1/sqrt(M)) sum_m exp(+2 pi i k m / M) |m> over the
/// listed register (reg[0] least significant). inverse_qft applies the adjoint.
void qft(StateVector& psi, const std::vector<int>& reg);
void inverse_qft(StateVector& psi, const std::vector<int>& reg);

/// Gate-level inverse QFT on the register, for circuit-path runs.
void append_inverse_qft(Circuit& c, const std::vector<int>& reg);

struct Metrics {
    double mse = 0.0;
    double fidelity = 0.0;
};

/// Compares an estimate against a reference after rescaling the estimate to
/// the reference norm and aligning the global phase.
Metrics compare_states(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& reference);

void save_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns);
std::vector<std::vector<double>> load_csv(const std::string& path, int skip_header_lines = 1);

} // namespace qpde
