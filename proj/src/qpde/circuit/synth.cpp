#include "qpde/circuit/synth.hpp"

#include <algorithm>
#include <cmath>

namespace qpde {

namespace {

int parity64(long long x) { return __builtin_parityll((unsigned long long)x); }

void multiplexed_rot(Circuit& c, const std::vector<int>& controls, int target,
                     const std::vector<double>& angles, bool is_z) {
    int l = (int)controls.size();
    long long K = 1LL << l;
    if ((long long)angles.size() != K)
        throw Error("circuit-ir", "multiplexed rotation needs 2^l angles");
    if (l == 0) {
        c.g1(target, is_z ? gate_rz(angles[0]) : gate_ry(angles[0]));
        return;
    }
    // Gray-code walk: hatted angles satisfy sum_k (-1)^{<gray(k), s>} hat_k = theta_s.
    std::vector<double> hat(K, 0.0);
    for (long long k = 0; k < K; ++k) {
        long long g = k ^ (k >> 1);
        double acc = 0.0;
        for (long long s = 0; s < K; ++s)
            acc += (parity64(g & s) ? -1.0 : 1.0) * angles[s];
        hat[k] = acc / double(K);
    }
    for (long long k = 0; k < K; ++k) {
        c.g1(target, is_z ? gate_rz(hat[k]) : gate_ry(hat[k]));
        int bit = (k == K - 1) ? (l - 1) : __builtin_ctzll((unsigned long long)(k + 1));
        c.cx(controls[bit], target);
    }
}

} // namespace

void multiplexed_ry(Circuit& c, const std::vector<int>& controls, int target,
                    const std::vector<double>& angles) {
    multiplexed_rot(c, controls, target, angles, false);
}

void multiplexed_rz(Circuit& c, const std::vector<int>& controls, int target,
                    const std::vector<double>& angles) {
    multiplexed_rot(c, controls, target, angles, true);
}

void amplitude_prep(Circuit& c, const std::vector<int>& qubits,
                    const std::vector<double>& weights) {
    int n = (int)qubits.size();
    long long K = 1LL << n;
    if ((long long)weights.size() != K)
        throw Error("circuit-ir", "amplitude_prep needs 2^n weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error("circuit-ir", "amplitude_prep weight < 0");
        total += w;
    }
    if (total <= 0.0) throw Error("circuit-ir", "amplitude_prep all weights zero");

    for (int j = n - 1; j >= 0; --j) {
        int top = n - 1 - j; // control bits above position j
        std::vector<int> controls(qubits.begin() + j + 1, qubits.end());
        std::vector<double> angles(1LL << top, 0.0);
        for (long long s = 0; s < (1LL << top); ++s) {
            double w0 = 0.0, w1 = 0.0;
            for (long long low = 0; low < (1LL << j); ++low) {
                w0 += weights[(s << (j + 1)) | low];
                w1 += weights[(s << (j + 1)) | (1LL << j) | low];
            }
            angles[s] = 2.0 * std::atan2(std::sqrt(w1), std::sqrt(w0));
        }
        multiplexed_ry(c, controls, qubits[j], angles);
    }
}

namespace {

void maj(Circuit& c, int carry, int b, int a) {
    c.cx(a, b);
    c.cx(a, carry);
    c.mc({b, carry}, {1, 1}, a, gate_x());
}

void uma(Circuit& c, int carry, int b, int a) {
    c.mc({b, carry}, {1, 1}, a, gate_x());
    c.cx(a, carry);
    c.cx(carry, b);
}

} // namespace

void cuccaro_add(Circuit& c, const std::vector<int>& target,
                 const std::vector<int>& addend, int ancilla) {
    int n = (int)target.size();
    if ((int)addend.size() != n) throw Error("circuit-ir", "adder register size mismatch");
    if (n == 0) return;
    // Carries ripple along the addend wires; the sum lands in `target`.
    maj(c, ancilla, target[0], addend[0]);
    for (int i = 1; i < n; ++i) maj(c, addend[i - 1], target[i], addend[i]);
    for (int i = n - 1; i >= 1; --i) uma(c, addend[i - 1], target[i], addend[i]);
    uma(c, ancilla, target[0], addend[0]);
}

namespace {

// Comparator chain state: the running predicate [reg low bits >= K low bits] is
// either the constant true or wire ^ neg.
struct GeChain {
    bool constant = true; // predicate == 1, no wire yet
    int wire = -1;
    int neg = 0;
    int used = 0; // scratch qubits consumed
    std::vector<MCGate> steps;
};

GeChain build_ge(Circuit& c, const std::vector<int>& reg, long long K,
                 const std::vector<int>& scratch) {
    int n = (int)reg.size();
    if (K < 0 || K > (1LL << n)) throw Error("circuit-ir", "comparator constant out of range");
    GeChain ch;
    for (int j = 0; j < n; ++j) {
        int kj = (int)((K >> j) & 1);
        if (ch.constant) {
            if (kj == 0) continue; // true OR r_j stays true
            ch.constant = false;
            ch.wire = reg[j];
            ch.neg = 0;
            continue;
        }
        if (ch.used >= (int)scratch.size())
            throw Error("circuit-ir", "comparator out of scratch ancillas");
        int a = scratch[ch.used++];
        MCGate g;
        g.target = a;
        g.u = gate_x();
        if (kj == 1) {
            // new = r_j AND g
            g.controls = {reg[j], ch.wire};
            g.polarity = {1, ch.neg ? 0 : 1};
            ch.neg = 0;
        } else {
            // new = r_j OR g, stored complemented: a = (!r_j) AND (!g)
            g.controls = {reg[j], ch.wire};
            g.polarity = {0, ch.neg ? 1 : 0};
            ch.neg = 1;
        }
        c.ops.push_back(g);
        ch.steps.push_back(g);
        ch.wire = a;
    }
    return ch;
}

void unbuild_ge(Circuit& c, const GeChain& ch) {
    for (auto it = ch.steps.rbegin(); it != ch.steps.rend(); ++it) c.ops.push_back(*it);
}

} // namespace

void compare_ge_const(Circuit& c, const std::vector<int>& reg, long long K, int flag,
                      const std::vector<int>& scratch) {
    int n = (int)reg.size();
    if (K <= 0) {
        c.x(flag);
        return;
    }
    if (K >= (1LL << n) + 1) return;
    if (K == (1LL << n)) return; // n-bit value can never reach 2^n
    GeChain ch = build_ge(c, reg, K, scratch);
    c.cx(ch.wire, flag);
    if (ch.neg) c.x(flag);
    unbuild_ge(c, ch);
}

void indicator_range(Circuit& c, const std::vector<int>& reg, long long K1, long long K2,
                     int flag, const std::vector<int>& scratch) {
    int n = (int)reg.size();
    long long top = (1LL << n) - 1;
    if (K1 > K2 || K1 < 0 || K2 > top)
        throw Error("circuit-ir", "indicator bounds out of range");
    bool lo_trivial = (K1 == 0);
    bool hi_trivial = (K2 == top);
    if (lo_trivial && hi_trivial) {
        c.x(flag);
        return;
    }
    if (hi_trivial) {
        compare_ge_const(c, reg, K1, flag, scratch);
        return;
    }
    if (lo_trivial) {
        // flag ^= NOT [v >= K2+1]
        GeChain ch = build_ge(c, reg, K2 + 1, scratch);
        c.cx(ch.wire, flag);
        if (!ch.neg) c.x(flag);
        unbuild_ge(c, ch);
        return;
    }
    GeChain c1 = build_ge(c, reg, K1, scratch);
    std::vector<int> rest(scratch.begin() + c1.used, scratch.end());
    GeChain c2 = build_ge(c, reg, K2 + 1, rest);
    if (c1.constant || c2.constant)
        throw Error("circuit-ir", "indicator internal: unexpected constant chain");
    c.mc({c1.wire, c2.wire}, {c1.neg ? 0 : 1, c2.neg ? 1 : 0}, flag, gate_x());
    unbuild_ge(c, c2);
    unbuild_ge(c, c1);
}

namespace {

// Conjugation wires for a gate on the basis-state pair (lo, hi): CNOTs fan the
// pivot bit into the other differing bits, collapsing the pair to a single
// qubit flip; `pattern` gives the control polarities afterward.
struct PairFrame {
    int pivot;
    std::vector<int> fan; // bit positions receiving a CNOT from the pivot
    long long pattern;    // value of the non-pivot bits after the fan-out
};

PairFrame pair_frame(long long lo, long long hi, int n) {
    long long diff = lo ^ hi;
    int pivot = 63 - __builtin_clzll((unsigned long long)diff);
    PairFrame f;
    f.pivot = pivot;
    for (int d = 0; d < n; ++d)
        if (d != pivot && ((diff >> d) & 1)) f.fan.push_back(d);
    long long lo_img = ((lo >> pivot) & 1) ? (lo ^ (diff & ~(1LL << pivot))) : lo;
    f.pattern = lo_img;
    return f;
}

void emit_two_level(Circuit& c, const std::vector<int>& reg, long long lo, long long hi,
                    const Mat2& v) {
    int n = (int)reg.size();
    PairFrame f = pair_frame(lo, hi, n);
    Mat2 u = v;
    if ((lo >> f.pivot) & 1) {
        // `lo` carries the pivot bit; swap basis roles so pivot=0 maps to lo.
        u = {v[3], v[2], v[1], v[0]};
    }
    for (int d : f.fan) c.cx(reg[f.pivot], reg[d]);
    std::vector<int> ctrls, pols;
    for (int d = 0; d < n; ++d) {
        if (d == f.pivot) continue;
        ctrls.push_back(reg[d]);
        pols.push_back((int)((f.pattern >> d) & 1));
    }
    c.mc(ctrls, pols, reg[f.pivot], u);
    for (int d : f.fan) c.cx(reg[f.pivot], reg[d]);
}

} // namespace

void basis_permutation(Circuit& c, const std::vector<int>& reg,
                       const std::vector<std::pair<long long, long long>>& assign) {
    int n = (int)reg.size();
    long long d = 1LL << n;
    std::vector<long long> cur(d);
    for (long long i = 0; i < d; ++i) cur[i] = i;
    std::vector<long long> inv = cur;
    for (auto [s, target] : assign) {
        if (s < 0 || s >= d || target < 0 || target >= d)
            throw Error("circuit-ir", "permutation index out of range");
        long long img = cur[s];
        if (img == target) continue;
        long long other = inv[target]; // state currently mapping to `target`
        // Append the transposition (img, target); it fixes earlier assignments.
        emit_two_level(c, reg, std::min(img, target), std::max(img, target), gate_x());
        std::swap(cur[s], cur[other]);
        inv[img] = other;
        inv[target] = s;
    }
}

void circuit_from_unitary(Circuit& c, const std::vector<int>& reg,
                          const Eigen::MatrixXcd& u, double tol) {
    int n = (int)reg.size();
    long long d = 1LL << n;
    if (u.rows() != d || u.cols() != d)
        throw Error("circuit-ir", "circuit_from_unitary dimension mismatch");
    if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        throw Error("circuit-ir", "circuit_from_unitary input not unitary");

    Eigen::MatrixXcd M = u;
    // Left-multiply Givens rotations to reach a diagonal: G_K ... G_1 U = D.
    std::vector<std::tuple<long long, long long, Mat2>> givens;
    for (long long col = 0; col < d; ++col) {
        for (long long row = col + 1; row < d; ++row) {
            cplx b = M(row, col);
            if (std::abs(b) < 1e-14) continue;
            cplx a = M(col, col);
            double nn = std::sqrt(std::norm(a) + std::norm(b));
            Mat2 g = {std::conj(a) / nn, std::conj(b) / nn, -b / nn, a / nn};
            for (long long j = col; j < d; ++j) {
                cplx mc = M(col, j), mr = M(row, j);
                M(col, j) = g[0] * mc + g[1] * mr;
                M(row, j) = g[2] * mc + g[3] * mr;
            }
            givens.emplace_back(col, row, g);
        }
    }
    // Circuit order: diagonal first, then adjoints of the Givens steps in
    // reverse, so the product reproduces u.
    for (long long k = 0; k < d; ++k) {
        double phi = std::arg(M(k, k));
        if (std::abs(M(k, k) - 1.0) < 1e-13) continue;
        std::vector<int> ctrls, pols;
        for (int b = 1; b < n; ++b) {
            ctrls.push_back(reg[b]);
            pols.push_back((int)((k >> b) & 1));
        }
        Mat2 ph = (k & 1) ? Mat2{1.0, 0.0, 0.0, std::polar(1.0, phi)}
                          : Mat2{std::polar(1.0, phi), 0.0, 0.0, 1.0};
        c.mc(ctrls, pols, reg[0], ph);
    }
    for (auto it = givens.rbegin(); it != givens.rend(); ++it) {
        auto [lo, hi, g] = *it;
        emit_two_level(c, reg, lo, hi, mat2_dag(g));
    }
}

} // namespace qpde
