#include "qpde/qsvt/qsvt.hpp"

#include <cmath>

namespace qpde {

namespace {

void mc_zero_phase(Circuit& c, const std::vector<int>& flags, double phi,
                   const std::vector<std::pair<int, int>>& extra) {
    // phase e^{i phi} on the all-flags-zero subspace, optionally further
    // conditioned on `extra` (qubit, polarity) pairs
    Mat2 u{std::polar(1.0, phi), 0.0, 0.0, 1.0};
    std::vector<int> ctrl;
    std::vector<int> pol;
    for (size_t i = 1; i < flags.size(); ++i) {
        ctrl.push_back(flags[i]);
        pol.push_back(0);
    }
    for (auto& e : extra) {
        ctrl.push_back(e.first);
        pol.push_back(e.second);
    }
    if (ctrl.empty())
        c.g1(flags[0], u);
    else
        c.mc(ctrl, pol, flags[0], u);
}

} // namespace

void append_projector_phase(Circuit& c, const std::vector<int>& flags, double phi) {
    if (flags.empty()) {
        c.gphase(0, phi);
        return;
    }
    c.gphase(flags[0], -phi);
    mc_zero_phase(c, flags, 2.0 * phi, {});
}

void append_flag_reflection(Circuit& c, const std::vector<int>& flags) {
    if (flags.empty()) {
        c.gphase(0, pi);
        return;
    }
    mc_zero_phase(c, flags, pi, {});
}

BlockEncodingHandle qsvt_poly(const BlockEncodingHandle& h, const PhaseSequence& ps,
                              bool re_extract) {
    h.validate();
    int d = (int)ps.phases.size() - 1;
    BlockEncodingHandle out;
    out.circuit.nq = h.circuit.nq;
    out.circuit.registers = h.circuit.registers;
    int sel = -1;
    if (re_extract) sel = out.circuit.add_qubits(1, "re-select", Role::Flag);

    Circuit udg = adjoint(h.circuit);
    auto phase_op = [&](double phi) {
        if (!re_extract) {
            append_projector_phase(out.circuit, h.flags, phi);
            return;
        }
        if (h.flags.empty()) {
            out.circuit.g1(sel, Mat2{std::polar(1.0, phi), 0.0, 0.0, std::polar(1.0, -phi)});
            return;
        }
        out.circuit.g1(sel, Mat2{std::polar(1.0, -phi), 0.0, 0.0, std::polar(1.0, phi)});
        mc_zero_phase(out.circuit, h.flags, 2.0 * phi, {{sel, 0}});
        mc_zero_phase(out.circuit, h.flags, -2.0 * phi, {{sel, 1}});
    };

    if (re_extract) out.circuit.h(sel);
    phase_op(ps.phases[d]);
    for (int k = d; k >= 1; --k) {
        out.circuit.append(k % 2 ? h.circuit : udg);
        phase_op(ps.phases[k - 1]);
    }
    if (re_extract) out.circuit.h(sel);

    out.alpha = 1.0;
    out.dim = h.dim;
    out.data = h.data;
    out.flags = h.flags;
    if (re_extract) out.flags.push_back(sel);
    out.pure = h.pure;
    return out;
}

BlockEncodingHandle pet_transform(const BlockEncodingHandle& h, const ChebSeries& poly,
                                  double tol) {
    int parity;
    if (poly.has_parity(0, 1e-12))
        parity = 0;
    else if (poly.has_parity(1, 1e-12))
        parity = 1;
    else
        throw Error("qsvt-engine", "transformation polynomial has mixed parity");
    if (poly.max_abs() > 0.5 + 1e-12)
        throw Error("qsvt-engine", "transformation polynomial exceeds the 1/2 bound");
    int d = poly.degree();
    while (d > parity && std::abs(poly.c[d]) < 1e-15) d -= 2;
    ChebSeries target;
    target.c.assign(poly.c.begin(), poly.c.begin() + d + 1);
    PhaseSequence ps =
        solve_qsp_phases_cached("pet", target, d, QspConvention::Reflection, tol);
    BlockEncodingHandle out = qsvt_poly(h, ps, true);
    out.epsilon = 4.0 * std::max(1, d) * std::sqrt(h.epsilon / h.alpha) + ps.residual;
    return out;
}

BlockEncodingHandle hamiltonian_simulation(const BlockEncodingHandle& h, double t,
                                           double epsilon, int* qsvt_calls) {
    h.validate();
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw Error("qsvt-engine", "simulation accuracy out of range");
    double at = std::max(h.alpha * std::abs(t), 1e-12);
    int g = truncation_degree(at, epsilon);
    if (qsvt_calls) *qsvt_calls = g;
    double tau = h.alpha * t;
    auto J = bessel_j_list(g + 1, tau);
    double beta = 2.0 * std::sin(pi / 18.0);

    int dc = (g % 2 == 0) ? g : g - 1;
    int ds = (g % 2 == 1) ? g : g - 1;
    ChebSeries cosv, sinv;
    cosv.c.assign(dc + 1, 0.0);
    cosv.c[0] = beta * J[0];
    for (int k = 2; k <= dc; k += 2)
        cosv.c[k] = 2.0 * beta * ((k / 2) % 2 ? -1.0 : 1.0) * J[k];
    sinv.c.assign(ds + 1, 0.0);
    for (int k = 1; k <= ds; k += 2)
        sinv.c[k] = 2.0 * beta * (((k - 1) / 2) % 2 ? -1.0 : 1.0) * J[k];

    PhaseSequence pc =
        solve_qsp_phases_cached("hsim-cos", cosv, dc, QspConvention::Reflection);
    PhaseSequence psn =
        solve_qsp_phases_cached("hsim-sin", sinv, ds, QspConvention::Reflection);

    BlockEncodingHandle hc = qsvt_poly(h, pc, true);
    BlockEncodingHandle hs = qsvt_poly(h, psn, true);
    BlockEncodingHandle W = lcu_combine({hc, hs}, {cplx(1.0, 0.0), cplx(0.0, 1.0)});

    // one oblivious amplitude amplification round: -W R W^dag R W lifts the
    // block amplitude sin(pi/18) e^{iHt} to sin(pi/6) e^{iHt} = e^{iHt}/2
    BlockEncodingHandle out = W;
    Circuit wdg = adjoint(W.circuit);
    append_flag_reflection(out.circuit, W.flags);
    out.circuit.append(wdg);
    append_flag_reflection(out.circuit, W.flags);
    out.circuit.append(W.circuit);
    out.circuit.gphase(0, pi);

    out.alpha = 2.0;
    out.epsilon = epsilon;
    return out;
}

} // namespace qpde
