#include "qpde/sim/statevector.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qpde {

StateVector StateVector::zero_state(int n) { return basis(n, 0); }

StateVector StateVector::basis(int n, long long index) {
    if (n < 0 || n > kMaxSimQubits)
        throw Error("simulator", "qubit count out of range");
    StateVector s;
    s.n = n;
    s.amp = Eigen::VectorXcd::Zero(1LL << n);
    if (index < 0 || index >= (1LL << n))
        throw Error("simulator", "basis index out of range");
    s.amp(index) = 1.0;
    return s;
}

namespace {

void apply_1q(StateVector& psi, int t, const Mat2& u) {
    long long bit = 1LL << t;
    long long dim = psi.amp.size();
    for (long long i = 0; i < dim; ++i) {
        if (i & bit) continue;
        cplx a0 = psi.amp(i), a1 = psi.amp(i | bit);
        psi.amp(i) = u[0] * a0 + u[1] * a1;
        psi.amp(i | bit) = u[2] * a0 + u[3] * a1;
    }
}

void apply_cx(StateVector& psi, int c, int t) {
    long long cb = 1LL << c, tb = 1LL << t;
    long long dim = psi.amp.size();
    // enumerate only the indices with the control set: walk the submasks of
    // the free qubits
    long long fm = (dim - 1) & ~(cb | tb);
    long long s = 0;
    do {
        long long i = s | cb;
        std::swap(psi.amp(i), psi.amp(i | tb));
        s = (s - fm) & fm;
    } while (s);
}

void apply_mc(StateVector& psi, const MCGate& g) {
    long long cmask = 0, cpat = 0;
    for (size_t j = 0; j < g.controls.size(); ++j) {
        cmask |= 1LL << g.controls[j];
        if (g.polarity[j]) cpat |= 1LL << g.controls[j];
    }
    long long tb = 1LL << g.target;
    long long dim = psi.amp.size();
    long long fm = (dim - 1) & ~(cmask | tb);
    long long s = 0;
    do {
        long long i = s | cpat;
        cplx a0 = psi.amp(i), a1 = psi.amp(i | tb);
        psi.amp(i) = g.u[0] * a0 + g.u[1] * a1;
        psi.amp(i | tb) = g.u[2] * a0 + g.u[3] * a1;
        s = (s - fm) & fm;
    } while (s);
}

} // namespace

void apply(const Circuit& c, StateVector& psi) {
    if (c.nq != psi.n) throw Error("simulator", "circuit/state qubit count mismatch");
    for (const GateOp& op : c.ops) {
        if (const auto* g = std::get_if<OneQubitGate>(&op))
            apply_1q(psi, g->target, g->u);
        else if (const auto* g2 = std::get_if<CNotGate>(&op))
            apply_cx(psi, g2->control, g2->target);
        else
            apply_mc(psi, std::get<MCGate>(op));
    }
}

Eigen::MatrixXcd extract_block(const Circuit& c, const std::vector<int>& data) {
    int nd = (int)data.size();
    if (nd > 12) throw Error("simulator", "extract_block dimension too large");
    if (c.nq > kMaxSimQubits) throw Error("simulator", "circuit too wide to simulate");
    long long dim = 1LL << nd;
    Eigen::MatrixXcd M(dim, dim);
    for (long long j = 0; j < dim; ++j) {
        long long idx = 0;
        for (int b = 0; b < nd; ++b)
            if ((j >> b) & 1) idx |= 1LL << data[b];
        StateVector psi = StateVector::basis(c.nq, idx);
        apply(c, psi);
        Eigen::VectorXcd col = slice_amplitudes(psi, data);
        M.col(j) = col;
    }
    return M;
}

double outcome_probability(const StateVector& psi, const std::vector<int>& qubits,
                           long long outcome) {
    long long mask = 0, pat = 0;
    for (size_t j = 0; j < qubits.size(); ++j) {
        mask |= 1LL << qubits[j];
        if ((outcome >> j) & 1) pat |= 1LL << qubits[j];
    }
    double p = 0.0;
    for (long long i = 0; i < psi.amp.size(); ++i)
        if ((i & mask) == pat) p += std::norm(psi.amp(i));
    return p;
}

PostselectResult postselect(const StateVector& psi, const std::vector<int>& qubits,
                            long long outcome, double min_prob) {
    long long mask = 0, pat = 0;
    for (size_t j = 0; j < qubits.size(); ++j) {
        mask |= 1LL << qubits[j];
        if ((outcome >> j) & 1) pat |= 1LL << qubits[j];
    }
    PostselectResult r;
    r.state.n = psi.n;
    r.state.amp = Eigen::VectorXcd::Zero(psi.amp.size());
    for (long long i = 0; i < psi.amp.size(); ++i)
        if ((i & mask) == pat) r.state.amp(i) = psi.amp(i);
    double p = r.state.amp.squaredNorm();
    r.probability = p;
    if (p < min_prob) throw Error("simulator", "postselection probability vanishes");
    r.state.amp /= std::sqrt(p);
    return r;
}

Eigen::VectorXcd slice_amplitudes(const StateVector& psi, const std::vector<int>& keep) {
    long long dim = 1LL << keep.size();
    Eigen::VectorXcd out(dim);
    for (long long k = 0; k < dim; ++k) {
        long long idx = 0;
        for (size_t b = 0; b < keep.size(); ++b)
            if ((k >> b) & 1) idx |= 1LL << keep[b];
        out(k) = psi.amp(idx);
    }
    return out;
}

namespace {

void dft_register(StateVector& psi, const std::vector<int>& reg, int sign) {
    int k = (int)reg.size();
    long long M = 1LL << k;
    long long regmask = 0;
    for (int q : reg) regmask |= 1LL << q;
    std::vector<cplx> tw(M);
    for (long long m = 0; m < M; ++m)
        tw[m] = std::polar(1.0 / std::sqrt((double)M), sign * 2.0 * pi * (double)m / (double)M);

    std::vector<long long> offsets(M);
    for (long long v = 0; v < M; ++v) {
        long long idx = 0;
        for (int b = 0; b < k; ++b)
            if ((v >> b) & 1) idx |= 1LL << reg[b];
        offsets[v] = idx;
    }
    std::vector<cplx> fiber(M), out(M);
    long long dim = psi.amp.size();
    for (long long base = 0; base < dim; ++base) {
        if (base & regmask) continue;
        for (long long v = 0; v < M; ++v) fiber[v] = psi.amp(base | offsets[v]);
        for (long long m = 0; m < M; ++m) {
            cplx acc = 0.0;
            for (long long v = 0; v < M; ++v) acc += tw[(m * v) % M] * fiber[v];
            out[m] = acc;
        }
        for (long long m = 0; m < M; ++m) psi.amp(base | offsets[m]) = out[m];
    }
}

} // namespace

void qft(StateVector& psi, const std::vector<int>& reg) { dft_register(psi, reg, +1); }
void inverse_qft(StateVector& psi, const std::vector<int>& reg) { dft_register(psi, reg, -1); }

void append_inverse_qft(Circuit& c, const std::vector<int>& reg) {
    int k = (int)reg.size();
    // Adjoint of the textbook QFT: reversed gate order with negated phases.
    for (int i = 0; i < k / 2; ++i) {
        // swap via three CNOTs
        c.cx(reg[i], reg[k - 1 - i]);
        c.cx(reg[k - 1 - i], reg[i]);
        c.cx(reg[i], reg[k - 1 - i]);
    }
    for (int j = 0; j < k; ++j) {
        for (int m = j - 1; m >= 0; --m)
            c.mc({reg[m]}, {1}, reg[j], gate_phase(-pi / (double)(1LL << (j - m))));
        c.h(reg[j]);
    }
}

Metrics compare_states(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& reference) {
    if (estimate.size() != reference.size())
        throw Error("simulator", "compare_states size mismatch");
    double ne = estimate.norm(), nr = reference.norm();
    if (ne <= 0.0 || nr <= 0.0) throw Error("simulator", "compare_states zero vector");
    cplx ov = estimate.dot(reference); // conj(estimate) . reference
    Metrics m;
    m.fidelity = std::norm(ov) / (ne * ne * nr * nr);
    cplx phase = (std::abs(ov) > 0.0) ? ov / std::abs(ov) : cplx(1.0);
    Eigen::VectorXcd aligned = estimate * phase * (nr / ne);
    m.mse = (aligned - reference).squaredNorm() / (double)reference.size();
    return m;
}

void save_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns) {
    std::ofstream f(path);
    if (!f) throw Error("io", "cannot open '" + path + "' for writing");
    for (size_t i = 0; i < header.size(); ++i)
        f << header[i] << (i + 1 < header.size() ? "," : "\n");
    size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& col : columns)
        if (col.size() != rows) throw Error("io", "csv column length mismatch");
    f.precision(17);
    for (size_t r = 0; r < rows; ++r)
        for (size_t i = 0; i < columns.size(); ++i)
            f << columns[i][r] << (i + 1 < columns.size() ? "," : "\n");
}

std::vector<std::vector<double>> load_csv(const std::string& path, int skip_header_lines) {
    std::ifstream f(path);
    if (!f) throw Error("io", "cannot open '" + path + "'");
    std::vector<std::vector<double>> cols;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        if (lineno++ < skip_header_lines) continue;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        size_t i = 0;
        while (std::getline(ls, tok, ',')) {
            if (cols.size() <= i) cols.emplace_back();
            cols[i].push_back(std::stod(tok));
            ++i;
        }
    }
    return cols;
}

} // namespace qpde
