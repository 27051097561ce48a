#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "qpde/common.hpp"

namespace qpde {

// 2x2 unitary, row-major: {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
Mat2 mat2_dag(const Mat2& m);
bool mat2_is_unitary(const Mat2& m, double tol = 1e-12);

Mat2 gate_x();
Mat2 gate_h();
Mat2 gate_t();
Mat2 gate_tdg();
Mat2 gate_rx(double theta); // e^{-i theta X / 2}
Mat2 gate_ry(double theta);
Mat2 gate_rz(double theta);
Mat2 gate_phase(double phi);        // diag(1, e^{i phi})
Mat2 gate_global_phase(double phi); // diag(e^{i phi}, e^{i phi})

struct OneQubitGate {
    int target;
    Mat2 u;
};

struct CNotGate {
    int control, target;
};

struct MCGate {
    std::vector<int> controls;
    std::vector<int> polarity; // 1 = fire on |1>, 0 = fire on |0>
    int target;
    Mat2 u;
};

using GateOp = std::variant<OneQubitGate, CNotGate, MCGate>;

enum class Role { Data, SparseIndex, FunctionAncilla, Flag, Xi, Clock, PureAncilla };

struct Register {
    std::string name;
    Role role;
    std::vector<int> qubits;
};

struct Circuit {
    int nq = 0;
    std::vector<Register> registers;
    std::vector<GateOp> ops;

    int add_qubits(int count, const std::string& name, Role role);
    void add_register(const std::string& name, Role role, std::vector<int> qubits);

    void g1(int target, const Mat2& u);
    void x(int t) { g1(t, gate_x()); }
    void h(int t) { g1(t, gate_h()); }
    void rx(int t, double a) { g1(t, gate_rx(a)); }
    void ry(int t, double a) { g1(t, gate_ry(a)); }
    void rz(int t, double a) { g1(t, gate_rz(a)); }
    void phase(int t, double p) { g1(t, gate_phase(p)); }
    void gphase(int t, double p) { g1(t, gate_global_phase(p)); }
    void cx(int c, int t);
    void mc(const std::vector<int>& controls, const std::vector<int>& polarity, int target,
            const Mat2& u);

    /// Append `other`, relabeling its qubit q to map[q]; every appended gate
    /// additionally receives the given (control, polarity) pairs.
    void append_mapped(const Circuit& other, const std::vector<int>& map,
                       const std::vector<std::pair<int, int>>& extra_controls = {});
    void append(const Circuit& other) ;
};

struct ResourceCount {
    long long one_qubit = 0;
    long long cnot = 0;
    long long pure_ancillas = 0;
};

Circuit adjoint(const Circuit& c);

/// Promote every gate by the given control layer; controls must be fresh qubits
/// beyond c.nq (new_nq >= c.nq + controls).
Circuit controlled(const Circuit& c, const std::vector<std::pair<int, int>>& controls,
                   int new_nq);

/// Rewrite to the {one-qubit, CNOT} basis. Multi-controls use the Toffoli-tree
/// with k-1 compute/uncompute ancillas, appended as a pure-ancilla register.
/// If max_extra_ancillas >= 0, throws when more would be needed.
Circuit expand_multicontrol(const Circuit& c, int max_extra_ancillas = -1);

ResourceCount count_resources(const Circuit& c, bool expand);

std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& text);

/// Number of qubits in pure-ancilla registers.
int pure_ancilla_count(const Circuit& c);

} // namespace qpde
