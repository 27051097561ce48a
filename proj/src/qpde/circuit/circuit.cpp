#include "qpde/circuit/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qpde {

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat2_dag(const Mat2& m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

bool mat2_is_unitary(const Mat2& m, double tol) {
    Mat2 p = mat2_mul(mat2_dag(m), m);
    return std::abs(p[0] - 1.0) < tol && std::abs(p[1]) < tol && std::abs(p[2]) < tol &&
           std::abs(p[3] - 1.0) < tol;
}

Mat2 gate_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 gate_h() {
    double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}
Mat2 gate_t() { return {1.0, 0.0, 0.0, std::polar(1.0, pi / 4.0)}; }
Mat2 gate_tdg() { return {1.0, 0.0, 0.0, std::polar(1.0, -pi / 4.0)}; }

Mat2 gate_rx(double a) {
    double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
    return {cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0)};
}
Mat2 gate_ry(double a) {
    double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
    return {cplx(c, 0.0), cplx(-s, 0.0), cplx(s, 0.0), cplx(c, 0.0)};
}
Mat2 gate_rz(double a) {
    return {std::polar(1.0, -a / 2.0), 0.0, 0.0, std::polar(1.0, a / 2.0)};
}
Mat2 gate_phase(double p) { return {1.0, 0.0, 0.0, std::polar(1.0, p)}; }
Mat2 gate_global_phase(double p) {
    return {std::polar(1.0, p), 0.0, 0.0, std::polar(1.0, p)};
}

int Circuit::add_qubits(int count, const std::string& name, Role role) {
    int base = nq;
    std::vector<int> qs(count);
    for (int i = 0; i < count; ++i) qs[i] = base + i;
    nq += count;
    registers.push_back({name, role, std::move(qs)});
    return base;
}

void Circuit::add_register(const std::string& name, Role role, std::vector<int> qubits) {
    for (int q : qubits)
        if (q < 0 || q >= nq) throw Error("circuit-ir", "register qubit out of range");
    registers.push_back({name, role, std::move(qubits)});
}

static void check_q(int q, int nq) {
    if (q < 0 || q >= nq) throw Error("circuit-ir", "qubit index out of range");
}

void Circuit::g1(int target, const Mat2& u) {
    check_q(target, nq);
    if (!mat2_is_unitary(u, 1e-10)) throw Error("circuit-ir", "non-unitary 1q gate");
    ops.push_back(OneQubitGate{target, u});
}

void Circuit::cx(int c, int t) {
    check_q(c, nq);
    check_q(t, nq);
    if (c == t) throw Error("circuit-ir", "cx control equals target");
    ops.push_back(CNotGate{c, t});
}

void Circuit::mc(const std::vector<int>& controls, const std::vector<int>& polarity,
                 int target, const Mat2& u) {
    if (controls.size() != polarity.size())
        throw Error("circuit-ir", "mc controls/polarity size mismatch");
    if (controls.empty()) {
        g1(target, u);
        return;
    }
    check_q(target, nq);
    for (size_t i = 0; i < controls.size(); ++i) {
        check_q(controls[i], nq);
        if (controls[i] == target) throw Error("circuit-ir", "mc control equals target");
        for (size_t j = i + 1; j < controls.size(); ++j)
            if (controls[i] == controls[j])
                throw Error("circuit-ir", "mc duplicate control");
        if (polarity[i] != 0 && polarity[i] != 1)
            throw Error("circuit-ir", "mc polarity must be 0 or 1");
    }
    if (!mat2_is_unitary(u, 1e-10)) throw Error("circuit-ir", "non-unitary mc gate");
    ops.push_back(MCGate{controls, polarity, target, u});
}

void Circuit::append_mapped(const Circuit& other, const std::vector<int>& map,
                            const std::vector<std::pair<int, int>>& extra_controls) {
    if ((int)map.size() != other.nq)
        throw Error("circuit-ir", "append_mapped map size mismatch");
    for (const GateOp& op : other.ops) {
        if (const auto* g = std::get_if<OneQubitGate>(&op)) {
            if (extra_controls.empty()) {
                g1(map[g->target], g->u);
            } else {
                std::vector<int> cs, ps;
                for (auto [c, p] : extra_controls) cs.push_back(c), ps.push_back(p);
                mc(cs, ps, map[g->target], g->u);
            }
        } else if (const auto* g2 = std::get_if<CNotGate>(&op)) {
            if (extra_controls.empty()) {
                cx(map[g2->control], map[g2->target]);
            } else {
                std::vector<int> cs, ps;
                for (auto [c, p] : extra_controls) cs.push_back(c), ps.push_back(p);
                cs.push_back(map[g2->control]);
                ps.push_back(1);
                mc(cs, ps, map[g2->target], gate_x());
            }
        } else {
            const auto& g3 = std::get<MCGate>(op);
            std::vector<int> cs, ps;
            for (auto [c, p] : extra_controls) cs.push_back(c), ps.push_back(p);
            for (size_t i = 0; i < g3.controls.size(); ++i) {
                cs.push_back(map[g3.controls[i]]);
                ps.push_back(g3.polarity[i]);
            }
            mc(cs, ps, map[g3.target], g3.u);
        }
    }
}

void Circuit::append(const Circuit& other) {
    std::vector<int> ident(other.nq);
    for (int i = 0; i < other.nq; ++i) ident[i] = i;
    append_mapped(other, ident);
}

Circuit adjoint(const Circuit& c) {
    Circuit out;
    out.nq = c.nq;
    out.registers = c.registers;
    out.ops.reserve(c.ops.size());
    for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
        if (const auto* g = std::get_if<OneQubitGate>(&*it))
            out.ops.push_back(OneQubitGate{g->target, mat2_dag(g->u)});
        else if (const auto* g2 = std::get_if<CNotGate>(&*it))
            out.ops.push_back(*g2);
        else {
            const auto& g3 = std::get<MCGate>(*it);
            out.ops.push_back(MCGate{g3.controls, g3.polarity, g3.target, mat2_dag(g3.u)});
        }
    }
    return out;
}

Circuit controlled(const Circuit& c, const std::vector<std::pair<int, int>>& controls,
                   int new_nq) {
    if (new_nq < c.nq) throw Error("circuit-ir", "controlled: new_nq too small");
    Circuit out;
    out.nq = new_nq;
    out.registers = c.registers;
    std::vector<int> ident(c.nq);
    for (int i = 0; i < c.nq; ++i) ident[i] = i;
    out.append_mapped(c, ident, controls);
    return out;
}

namespace {

// Controlled single-qubit gate via the ABC decomposition:
// U = e^{ia} Rz(b) Ry(g) Rz(d); CU = [C; CX; B; CX; A; phase(a) on control],
// with A = Rz(b) Ry(g/2), B = Ry(-g/2) Rz(-(d+b)/2), C = Rz((d-b)/2).
void emit_c1u(Circuit& out, int ctrl, int pol, int target, const Mat2& u) {
    auto is_ident = [](const Mat2& m) {
        return std::abs(m[0] - 1.0) < 1e-14 && std::abs(m[1]) < 1e-14 &&
               std::abs(m[2]) < 1e-14 && std::abs(m[3] - 1.0) < 1e-14;
    };
    bool is_x = std::abs(u[0]) < 1e-14 && std::abs(u[1] - 1.0) < 1e-14 &&
                std::abs(u[2] - 1.0) < 1e-14 && std::abs(u[3]) < 1e-14;
    if (pol == 0) out.x(ctrl);
    if (is_x) {
        out.cx(ctrl, target);
    } else {
        cplx det = u[0] * u[3] - u[1] * u[2];
        double a = std::arg(det) / 2.0;
        cplx ph = std::polar(1.0, -a);
        cplx v00 = ph * u[0], v10 = ph * u[2];
        double g = 2.0 * std::atan2(std::abs(v10), std::abs(v00));
        double bpd = 0.0, bmd = 0.0; // b+d, b-d
        if (std::abs(v00) > 1e-14) bpd = -2.0 * std::arg(v00);
        if (std::abs(v10) > 1e-14) bmd = 2.0 * std::arg(v10);
        double b = (bpd + bmd) / 2.0, d = (bpd - bmd) / 2.0;

        Mat2 A = mat2_mul(gate_rz(b), gate_ry(g / 2.0));
        Mat2 B = mat2_mul(gate_ry(-g / 2.0), gate_rz(-(d + b) / 2.0));
        Mat2 C = gate_rz((d - b) / 2.0);
        if (!is_ident(C)) out.g1(target, C);
        out.cx(ctrl, target);
        if (!is_ident(B)) out.g1(target, B);
        out.cx(ctrl, target);
        if (!is_ident(A)) out.g1(target, A);
        if (std::abs(a) > 1e-15) out.phase(ctrl, a);
    }
    if (pol == 0) out.x(ctrl);
}

// Toffoli on positive controls a, b: 8 one-qubit gates and 6 CNOTs.
void emit_toffoli(Circuit& out, int a, int b, int pa, int pb, int t) {
    if (pa == 0) out.x(a);
    if (pb == 0) out.x(b);
    out.h(t);
    out.cx(b, t);
    out.g1(t, gate_tdg());
    out.cx(a, t);
    out.g1(t, gate_t());
    out.cx(b, t);
    out.g1(t, gate_tdg());
    out.cx(a, t);
    out.g1(b, gate_t());
    out.g1(t, mat2_mul(gate_h(), gate_t()));
    out.cx(a, b);
    out.g1(b, gate_tdg());
    out.cx(a, b);
    out.g1(a, gate_t());
    if (pb == 0) out.x(b);
    if (pa == 0) out.x(a);
}

void expand_mc(Circuit& out, const MCGate& g, const std::vector<int>& anc) {
    size_t k = g.controls.size();
    if (k == 1) {
        emit_c1u(out, g.controls[0], g.polarity[0], g.target, g.u);
        return;
    }
    bool is_x = std::abs(g.u[0]) < 1e-14 && std::abs(g.u[1] - 1.0) < 1e-14 &&
                std::abs(g.u[2] - 1.0) < 1e-14 && std::abs(g.u[3]) < 1e-14;
    if (k == 2 && is_x) {
        emit_toffoli(out, g.controls[0], g.controls[1], g.polarity[0], g.polarity[1],
                     g.target);
        return;
    }
    if ((int)anc.size() < (int)k - 1)
        throw Error("circuit-ir", "insufficient pure ancillas for multi-control expansion");
    // Compute the AND-chain into ancillas, apply the base gate, uncompute.
    std::vector<std::tuple<int, int, int, int, int>> chain;
    emit_toffoli(out, g.controls[0], g.controls[1], g.polarity[0], g.polarity[1], anc[0]);
    chain.emplace_back(g.controls[0], g.controls[1], g.polarity[0], g.polarity[1], anc[0]);
    for (size_t j = 2; j < k; ++j) {
        emit_toffoli(out, anc[j - 2], g.controls[j], 1, g.polarity[j], anc[j - 1]);
        chain.emplace_back(anc[j - 2], g.controls[j], 1, g.polarity[j], anc[j - 1]);
    }
    emit_c1u(out, anc[k - 2], 1, g.target, g.u);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        auto [a, b, pa, pb, t] = *it;
        emit_toffoli(out, a, b, pa, pb, t);
    }
}

} // namespace

Circuit expand_multicontrol(const Circuit& c, int max_extra_ancillas) {
    int need = 0;
    for (const GateOp& op : c.ops) {
        const auto* g = std::get_if<MCGate>(&op);
        if (!g) continue;
        size_t k = g->controls.size();
        bool is_x = std::abs(g->u[0]) < 1e-14 && std::abs(g->u[1] - 1.0) < 1e-14 &&
                    std::abs(g->u[2] - 1.0) < 1e-14 && std::abs(g->u[3]) < 1e-14;
        if (k <= 1 || (k == 2 && is_x)) continue; // handled without ancillas
        need = std::max(need, (int)k - 1);
    }
    if (max_extra_ancillas >= 0 && need > max_extra_ancillas)
        throw Error("circuit-ir", "insufficient pure ancillas for multi-control expansion");

    Circuit out;
    out.nq = c.nq;
    out.registers = c.registers;
    std::vector<int> anc;
    if (need > 0) {
        int base = out.add_qubits(need, "mcx-expand", Role::PureAncilla);
        for (int i = 0; i < need; ++i) anc.push_back(base + i);
    }
    for (const GateOp& op : c.ops) {
        if (const auto* g = std::get_if<OneQubitGate>(&op))
            out.ops.push_back(*g);
        else if (const auto* g2 = std::get_if<CNotGate>(&op))
            out.ops.push_back(*g2);
        else
            expand_mc(out, std::get<MCGate>(op), anc);
    }
    return out;
}

int pure_ancilla_count(const Circuit& c) {
    int n = 0;
    for (const Register& r : c.registers)
        if (r.role == Role::PureAncilla) n += (int)r.qubits.size();
    return n;
}

ResourceCount count_resources(const Circuit& c, bool expand) {
    const Circuit* use = &c;
    Circuit expanded;
    if (expand) {
        expanded = expand_multicontrol(c);
        use = &expanded;
    }
    ResourceCount rc;
    rc.pure_ancillas = pure_ancilla_count(*use);
    for (const GateOp& op : use->ops) {
        if (std::holds_alternative<CNotGate>(op))
            ++rc.cnot;
        else
            ++rc.one_qubit; // an unexpanded multi-control counts as one gate
    }
    return rc;
}

namespace {

std::string fmt_c(cplx z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", z.real(), z.imag());
    return buf;
}

cplx parse_c(const std::string& tok) {
    double re = 0.0, im = 0.0;
    if (std::sscanf(tok.c_str(), "%lf,%lf", &re, &im) != 2)
        throw Error("circuit-ir", "bad complex token '" + tok + "'");
    return {re, im};
}

const char* role_name(Role r) {
    switch (r) {
        case Role::Data: return "data";
        case Role::SparseIndex: return "sparse-index";
        case Role::FunctionAncilla: return "function-ancilla";
        case Role::Flag: return "flag";
        case Role::Xi: return "xi";
        case Role::Clock: return "clock";
        case Role::PureAncilla: return "pure-ancilla";
    }
    return "?";
}

Role role_of(const std::string& s) {
    if (s == "data") return Role::Data;
    if (s == "sparse-index") return Role::SparseIndex;
    if (s == "function-ancilla") return Role::FunctionAncilla;
    if (s == "flag") return Role::Flag;
    if (s == "xi") return Role::Xi;
    if (s == "clock") return Role::Clock;
    if (s == "pure-ancilla") return Role::PureAncilla;
    throw Error("circuit-ir", "unknown register role '" + s + "'");
}

} // namespace

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.nq << "\n";
    for (const Register& r : c.registers) {
        os << "reg " << r.name << " " << role_name(r.role);
        for (int q : r.qubits) os << " " << q;
        os << "\n";
    }
    for (const GateOp& op : c.ops) {
        if (const auto* g = std::get_if<OneQubitGate>(&op)) {
            os << "G " << g->target;
            for (const cplx& z : g->u) os << " " << fmt_c(z);
            os << "\n";
        } else if (const auto* g2 = std::get_if<CNotGate>(&op)) {
            os << "CX " << g2->control << " " << g2->target << "\n";
        } else {
            const auto& g3 = std::get<MCGate>(op);
            os << "MC ";
            for (int p : g3.polarity) os << p;
            for (int q : g3.controls) os << " " << q;
            os << " " << g3.target;
            for (const cplx& z : g3.u) os << " " << fmt_c(z);
            os << "\n";
        }
    }
    return os.str();
}

Circuit deserialize(const std::string& text) {
    Circuit c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "qubits") {
            ls >> c.nq;
        } else if (kind == "reg") {
            Register r;
            std::string role;
            ls >> r.name >> role;
            r.role = role_of(role);
            int q;
            while (ls >> q) r.qubits.push_back(q);
            c.registers.push_back(std::move(r));
        } else if (kind == "G") {
            int t;
            ls >> t;
            Mat2 u;
            std::string tok;
            for (int i = 0; i < 4; ++i) {
                if (!(ls >> tok)) throw Error("circuit-ir", "truncated G line");
                u[i] = parse_c(tok);
            }
            c.g1(t, u);
        } else if (kind == "CX") {
            int a, t;
            ls >> a >> t;
            c.cx(a, t);
        } else if (kind == "MC") {
            std::string pat;
            ls >> pat;
            std::vector<int> ctrls((int)pat.size()), pols((int)pat.size());
            for (size_t i = 0; i < pat.size(); ++i) {
                pols[i] = pat[i] - '0';
                if (!(ls >> ctrls[i])) throw Error("circuit-ir", "truncated MC line");
            }
            int t;
            ls >> t;
            Mat2 u;
            std::string tok;
            for (int i = 0; i < 4; ++i) {
                if (!(ls >> tok)) throw Error("circuit-ir", "truncated MC line");
                u[i] = parse_c(tok);
            }
            c.mc(ctrls, pols, t, u);
        } else {
            throw Error("circuit-ir", "unknown line kind '" + kind + "'");
        }
    }
    return c;
}

} // namespace qpde
