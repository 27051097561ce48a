#include "qpde/encoder/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "qpde/circuit/synth.hpp"
#include "qpde/oracle/oracles.hpp"
#include "qpde/qsvt/qsvt.hpp"

namespace qpde {

namespace {

int ceil_log2(long long k) {
    int l = 0;
    while ((1LL << l) < k) ++l;
    return l;
}

// next power of two at or above v; keeps the rotation angles well conditioned
double pow2_up(double v) {
    if (!(v > 0.0)) throw Error("hamiltonian-encoder", "normalization of a zero band");
    return std::exp2(std::ceil(std::log2(v) - 1e-12));
}

bool constant_value(const PiecewisePolynomial& f, cplx& c) {
    bool first = true;
    for (const Segment& s : f.segments()) {
        cplx c0 = s.coef.empty() ? cplx(0.0) : s.coef[0];
        for (size_t k = 1; k < s.coef.size(); ++k)
            if (s.coef[k] != cplx(0.0)) return false;
        if (first) {
            c = c0;
            first = false;
        } else if (c0 != c) {
            return false;
        }
    }
    return !first;
}

BlockEncodingHandle adjoint_handle(const BlockEncodingHandle& h) {
    BlockEncodingHandle out = h;
    out.circuit = adjoint(h.circuit);
    return out;
}

// diag(c) = |c| e^{i arg c} * identity
BlockEncodingHandle scalar_diag(cplx c, int n) {
    if (c == cplx(0.0)) return zero_encoding(n);
    BlockEncodingHandle h = identity_encoding(n);
    double phi = std::arg(c);
    if (phi != 0.0) h.circuit.gphase(h.data[0], phi);
    h.alpha = std::abs(c);
    return h;
}

BlockEncodingHandle diag_function(const PiecewisePolynomial& f, int n, double tol) {
    cplx c;
    if (constant_value(f, c)) return scalar_diag(c, n);
    return piecewise_poly_oracle(f, n, tol);
}

std::vector<int> bits_of(long long v, int n) {
    std::vector<int> b(n);
    for (int q = 0; q < n; ++q) b[q] = int((v >> q) & 1);
    return b;
}

// The Fig.-2 style banded dataflow. `killed_rows` (optional) lists output rows
// routed away from this branch through an extra flag.
BlockEncodingHandle banded_core(const std::vector<BandedProfile::Bulk>& bulk,
                                const PiecewisePolynomial* f, int n,
                                const std::vector<long long>* killed_rows, double tol) {
    if (bulk.empty()) throw Error("hamiltonian-encoder", "profile has no bands");
    long long kappa = (long long)bulk.size();
    int l = ceil_log2(kappa);
    if (l > n) throw Error("hamiltonian-encoder", "band register exceeds the grid register");

    std::vector<cplx> values;
    std::vector<long long> offs, offs_t;
    double vmax = 0.0;
    for (const auto& bd : bulk) {
        values.push_back(bd.value);
        offs.push_back(bd.offset);
        offs_t.push_back(-(long long)bd.offset);
        vmax = std::max(vmax, std::abs(bd.value));
    }
    double ND = pow2_up(vmax);

    BlockEncodingHandle h;
    Circuit& c = h.circuit;
    int dbase = c.add_qubits(n, "data", Role::Data);
    int zbase = c.add_qubits(n, "shift", Role::SparseIndex);
    int flagD = c.add_qubits(1, "band-amp", Role::Flag);
    int kill = -1;
    if (killed_rows && !killed_rows->empty())
        kill = c.add_qubits(1, "row-kill", Role::Flag);
    int carry = c.add_qubits(1, "carry", Role::PureAncilla);

    std::vector<int> dreg, zreg, zlow, allctrl;
    for (int q = 0; q < n; ++q) dreg.push_back(dbase + q);
    for (int q = 0; q < n; ++q) zreg.push_back(zbase + q);
    for (int q = 0; q < l; ++q) zlow.push_back(zbase + q);

    Circuit prep;
    prep.add_qubits(l, "band", Role::SparseIndex);
    if (l > 0) {
        std::vector<int> preg(l);
        std::iota(preg.begin(), preg.end(), 0);
        uniform_prep(prep, preg, kappa);
        c.append_mapped(prep, zlow);
    }

    {
        Circuit amp = sparse_amplitude_oracle(values, ND, l);
        std::vector<int> map = zlow;
        map.push_back(flagD);
        c.append_mapped(amp, map);
    }

    std::vector<int> bmap = zreg;
    bmap.insert(bmap.end(), dreg.begin(), dreg.end());
    bmap.push_back(carry);
    c.append_mapped(banded_sparse_access(offs_t, n, l), bmap);

    for (int q = 0; q < n; ++q) {
        c.cx(dreg[q], zreg[q]);
        c.cx(zreg[q], dreg[q]);
        c.cx(dreg[q], zreg[q]);
    }

    if (kill >= 0)
        for (long long r : *killed_rows) c.mc(dreg, bits_of(r, n), kill, gate_x());

    double alpha_f = 1.0, eps_f = 0.0;
    std::vector<int> fflags, pure_pool{carry};
    if (f) {
        cplx fc;
        if (constant_value(*f, fc)) {
            if (fc == cplx(0.0))
                throw Error("hamiltonian-encoder", "term coefficient is identically zero");
            if (std::arg(fc) != 0.0) c.gphase(dbase, std::arg(fc));
            alpha_f = std::abs(fc);
        } else {
            BlockEncodingHandle hf = piecewise_poly_oracle(*f, n, tol);
            std::vector<int> map(hf.circuit.nq, -1);
            for (size_t p = 0; p < hf.data.size(); ++p) map[hf.data[p]] = dreg[p];
            if (!hf.flags.empty()) {
                int fb = c.add_qubits((int)hf.flags.size(), "coef", Role::FunctionAncilla);
                for (size_t p = 0; p < hf.flags.size(); ++p) {
                    map[hf.flags[p]] = fb + (int)p;
                    fflags.push_back(fb + (int)p);
                }
            }
            for (size_t p = 0; p < hf.pure.size(); ++p) {
                if (p >= pure_pool.size())
                    pure_pool.push_back(c.add_qubits(1, "scratch", Role::PureAncilla));
                map[hf.pure[p]] = pure_pool[p];
            }
            c.append_mapped(hf.circuit, map);
            alpha_f = hf.alpha;
            eps_f = hf.epsilon;
        }
    }

    c.append_mapped(adjoint(banded_sparse_access(offs, n, l)), bmap);
    if (l > 0) c.append_mapped(adjoint(prep), zlow);

    h.alpha = double(kappa) * ND * alpha_f;
    h.epsilon = double(kappa) * ND * eps_f;
    h.dim = 1LL << n;
    h.data = dreg;
    h.flags = zreg;
    h.flags.push_back(flagD);
    if (kill >= 0) h.flags.push_back(kill);
    h.flags.insert(h.flags.end(), fflags.begin(), fflags.end());
    h.pure = pure_pool;
    return h;
}

// sum_e w_e |row_e><col_e| over a short element list: select superposition,
// per-element revival of the matching column, amplitude rotation, bit flips
// mapping the column to the row.
BlockEncodingHandle element_encoding(
    const std::vector<std::tuple<long long, long long, cplx>>& elems, int n) {
    if (elems.empty()) throw Error("hamiltonian-encoder", "empty element list");
    long long m = (long long)elems.size();
    int lb = ceil_log2(m);
    std::vector<cplx> vals;
    double vmax = 0.0;
    for (const auto& e : elems) {
        vals.push_back(std::get<2>(e));
        vmax = std::max(vmax, std::abs(std::get<2>(e)));
    }
    double NE = pow2_up(vmax);

    BlockEncodingHandle h;
    Circuit& c = h.circuit;
    int dbase = c.add_qubits(n, "data", Role::Data);
    std::vector<int> sel;
    if (lb) {
        int sb = c.add_qubits(lb, "element", Role::SparseIndex);
        for (int q = 0; q < lb; ++q) sel.push_back(sb + q);
    }
    int kill = c.add_qubits(1, "element-kill", Role::Flag);
    int val = c.add_qubits(1, "element-amp", Role::Flag);
    std::vector<int> dreg;
    for (int q = 0; q < n; ++q) dreg.push_back(dbase + q);

    Circuit prep;
    prep.add_qubits(lb, "element", Role::SparseIndex);
    if (lb) {
        std::vector<int> preg(lb);
        std::iota(preg.begin(), preg.end(), 0);
        uniform_prep(prep, preg, m);
        c.append_mapped(prep, sel);
    }

    c.x(kill);
    for (long long e = 0; e < m; ++e) {
        std::vector<int> ctrl = sel, pol = bits_of(e, lb);
        ctrl.insert(ctrl.end(), dreg.begin(), dreg.end());
        auto cb = bits_of(std::get<1>(elems[e]), n);
        pol.insert(pol.end(), cb.begin(), cb.end());
        c.mc(ctrl, pol, kill, gate_x());
    }

    {
        Circuit amp = sparse_amplitude_oracle(vals, NE, lb);
        std::vector<int> map = sel;
        map.push_back(val);
        c.append_mapped(amp, map);
    }

    for (long long e = 0; e < m; ++e) {
        long long diff = std::get<0>(elems[e]) ^ std::get<1>(elems[e]);
        for (int q = 0; q < n; ++q) {
            if (!((diff >> q) & 1)) continue;
            if (lb)
                c.mc(sel, bits_of(e, lb), dreg[q], gate_x());
            else
                c.x(dreg[q]);
        }
    }
    if (lb) c.append_mapped(adjoint(prep), sel);

    h.alpha = double(m) * NE;
    h.dim = 1LL << n;
    h.data = dreg;
    h.flags = sel;
    h.flags.push_back(kill);
    h.flags.push_back(val);
    return h;
}

// appends one homogenization qubit on top of the handle's data register:
// kind 'L' applies the handle on homog = 0 and the phase e^{i phi} on 1;
// kind 'X'/'Y' applies the handle unconditionally followed by the Pauli.
BlockEncodingHandle with_homog(const BlockEncodingHandle& h, char kind, double phi) {
    BlockEncodingHandle out;
    out.circuit.nq = h.circuit.nq;
    out.circuit.registers = h.circuit.registers;
    int homog = out.circuit.add_qubits(1, "homog", Role::Data);
    std::vector<int> idmap(h.circuit.nq);
    std::iota(idmap.begin(), idmap.end(), 0);
    if (kind == 'L') {
        out.circuit.append_mapped(h.circuit, idmap, {{homog, 0}});
        out.circuit.phase(homog, phi);
    } else {
        out.circuit.append_mapped(h.circuit, idmap);
        if (kind == 'X')
            out.circuit.x(homog);
        else
            out.circuit.g1(homog, Mat2{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
    }
    out.alpha = h.alpha;
    out.epsilon = h.epsilon;
    out.dim = 2 * h.dim;
    out.data = h.data;
    out.data.push_back(homog);
    out.flags = h.flags;
    out.pure = h.pure;
    return out;
}

// exact (L, 1, 0)-encoding of diag(x_xi): one multiplexed Ry rotates a single
// flag by 2 arccos(x_k / L), so <k 0|U|k 0> = x_k / L with no select register.
BlockEncodingHandle xi_coordinate(const XiGrid& xi) {
    BlockEncodingHandle h;
    Circuit& c = h.circuit;
    int dbase = c.add_qubits(xi.n_xi, "xi", Role::Xi);
    int flag = c.add_qubits(1, "xi-amp", Role::Flag);
    std::vector<int> dreg;
    for (int q = 0; q < xi.n_xi; ++q) dreg.push_back(dbase + q);
    std::vector<double> angles;
    for (long long k = 0; k < xi.size(); ++k)
        angles.push_back(2.0 * std::acos(xi.point(k) / xi.L));
    multiplexed_ry(c, dreg, flag, angles);
    h.alpha = xi.L;
    h.dim = xi.size();
    h.data = dreg;
    h.flags = {flag};
    return h;
}

double grid_x(const PiecewisePolynomial& f, int n, long long i) {
    return f.a() + double(i) * (f.b() - f.a()) / double((1LL << n) - 1);
}

} // namespace

BlockEncodingHandle encode_term_periodic(const BandedProfile& profile,
                                         const PiecewisePolynomial& f, int n,
                                         double tol) {
    if (!profile.boundary_rows.empty())
        throw Error("hamiltonian-encoder", "periodic encoding given boundary rows");
    return banded_core(profile.bulk, &f, n, nullptr, tol);
}

BlockEncodingHandle encode_term_robin(const BandedProfile& profile,
                                      const PiecewisePolynomial& f, int n,
                                      double tol) {
    if (profile.boundary_rows.empty()) return banded_core(profile.bulk, &f, n, nullptr, tol);

    std::vector<long long> killed;
    std::vector<std::tuple<long long, long long, cplx>> elems;
    for (const auto& [row, entries] : profile.boundary_rows) {
        killed.push_back(row);
        cplx fr = f.evaluate(grid_x(f, n, row));
        for (const auto& [col, dval] : entries) {
            cplx w = fr * dval;
            if (w != cplx(0.0)) elems.push_back({row, col, w});
        }
    }
    BlockEncodingHandle bulk = banded_core(profile.bulk, &f, n, &killed, tol);
    if (elems.empty()) return bulk;
    return lcu_combine({bulk, element_encoding(elems, n)}, {1.0, 1.0});
}

BlockEncodingHandle encode_term_adjoint(const BandedProfile& profile,
                                        const PiecewisePolynomial& f, int n,
                                        double tol) {
    return adjoint_handle(encode_term_robin(profile, f, n, tol));
}

BlockEncodingHandle encode_B(const PiecewisePolynomial* smooth,
                             const std::vector<std::pair<long long, cplx>>& spikes,
                             int n, double tol) {
    double root = std::sqrt(double(1LL << n));
    std::vector<BlockEncodingHandle> hs;
    if (smooth && smooth->max_abs() > 0.0) hs.push_back(diag_function(*smooth, n, tol));
    if (!spikes.empty()) {
        std::vector<std::tuple<long long, long long, cplx>> elems;
        for (const auto& [i, w] : spikes) elems.push_back({i, i, w});
        hs.push_back(element_encoding(elems, n));
    }
    if (hs.empty()) return zero_encoding(n);
    return lcu_combine(hs, std::vector<cplx>(hs.size(), cplx(root)));
}

BlockEncodingHandle encode_S(const BlockEncodingHandle& hA,
                             const BlockEncodingHandle* hB, int which, bool b_real) {
    if (which != 1 && which != 2)
        throw Error("hamiltonian-encoder", "encode_S wants which = 1 or 2");
    BlockEncodingHandle hAd = adjoint_handle(hA);
    std::vector<BlockEncodingHandle> hs;
    std::vector<cplx> ws;
    const cplx ihalf(0.0, 0.5), iquart(0.0, 0.25);
    if (which == 1) {
        hs.push_back(with_homog(hA, 'L', pi / 2.0));
        ws.push_back(0.5);
        hs.push_back(with_homog(hAd, 'L', -pi / 2.0));
        ws.push_back(0.5);
    } else {
        hs.push_back(with_homog(hA, 'L', 0.0));
        ws.push_back(-ihalf);
        hs.push_back(with_homog(hAd, 'L', 0.0));
        ws.push_back(ihalf);
    }
    if (hB) {
        if (b_real) {
            hs.push_back(with_homog(*hB, which == 1 ? 'X' : 'Y', 0.0));
            ws.push_back(0.5);
        } else {
            BlockEncodingHandle hBd = adjoint_handle(*hB);
            hs.push_back(with_homog(*hB, 'X', 0.0));
            ws.push_back(which == 1 ? cplx(0.25) : -iquart);
            hs.push_back(with_homog(*hB, 'Y', 0.0));
            ws.push_back(which == 1 ? iquart : cplx(0.25));
            hs.push_back(with_homog(hBd, 'X', 0.0));
            ws.push_back(which == 1 ? cplx(0.25) : iquart);
            hs.push_back(with_homog(hBd, 'Y', 0.0));
            ws.push_back(which == 1 ? -iquart : cplx(0.25));
        }
    }
    return lcu_combine(hs, ws);
}

EncodedHamiltonian encode_H_1d(const DiscretizedSystem& sys,
                               const PiecewisePolynomial* source, HomogenizeMode mode,
                               int n_xi, double L_xi, double tol) {
    if (sys.terms.empty()) throw Error("hamiltonian-encoder", "system has no terms");
    int n = sys.n;
    long long N = 1LL << n;

    std::vector<BlockEncodingHandle> ths;
    for (const AssembledTerm& t : sys.terms)
        ths.push_back(encode_term_robin(t.profile, t.f, n, tol));
    BlockEncodingHandle hA =
        ths.size() == 1 ? ths[0] : lcu_combine(ths, std::vector<cplx>(ths.size(), cplx(1.0)));

    BlockEncodingHandle hB;
    bool have_b = false, b_real = true;
    if (mode == HomogenizeMode::Identity) {
        hB = identity_encoding(n);
        have_b = true;
    } else {
        double vscale = 0.0;
        for (long long i = 0; i < N; ++i) vscale = std::max(vscale, std::abs(sys.v(i)));
        std::vector<std::pair<long long, cplx>> spikes;
        for (long long i = 0; i < N; ++i) {
            cplx s = sys.v(i) - (source ? source->evaluate(sys.grid[i]) : cplx(0.0));
            if (std::abs(s) > 1e-12 * (1.0 + vscale)) spikes.push_back({i, s});
        }
        bool smooth_live = source && source->max_abs() > 0.0;
        if (smooth_live || !spikes.empty()) {
            hB = encode_B(smooth_live ? source : nullptr, spikes, n, tol);
            have_b = true;
            b_real = (!source || source->is_real());
            for (const auto& [i, w] : spikes)
                if (std::abs(w.imag()) > 1e-14 * (1.0 + vscale)) b_real = false;
        }
    }

    BlockEncodingHandle S1 = encode_S(hA, have_b ? &hB : nullptr, 1, b_real);
    BlockEncodingHandle S2 = encode_S(hA, have_b ? &hB : nullptr, 2, b_real);

    XiGrid xi{n_xi, L_xi};
    BlockEncodingHandle H1 = tensor(S1, xi_coordinate(xi));
    BlockEncodingHandle H2 = tensor(S2, identity_encoding(n_xi));

    EncodedHamiltonian out;
    out.handle = lcu_combine({H1, H2}, {1.0, 1.0});
    out.alpha_total = out.handle.alpha;
    out.layout = out.handle.circuit.registers;
    return out;
}

namespace {

// coefficient oracle for a separable sum, optionally composed with an outer
// polynomial through PET. Returns false when the coefficient is identically 1.
bool coefficient_handle(const SeparableFunctionSpec& spec, int d, int n, double tol,
                        BlockEncodingHandle& out) {
    if (spec.summands.empty())
        throw Error("hamiltonian-encoder", "coefficient has no summands");
    std::vector<BlockEncodingHandle> hs;
    bool all_real = true;
    for (const auto& summand : spec.summands) {
        if ((int)summand.size() != d)
            throw Error("hamiltonian-encoder", "summand dimension mismatch");
        cplx cprod(1.0);
        bool allconst = true;
        for (const auto& g : summand) {
            if (!g.is_real()) all_real = false;
            cplx c;
            if (constant_value(g, c))
                cprod *= c;
            else
                allconst = false;
        }
        if (allconst) {
            hs.push_back(scalar_diag(cprod, d * n));
            continue;
        }
        BlockEncodingHandle acc;
        bool started = false;
        for (int j = 0; j < d; ++j) {
            BlockEncodingHandle hj = diag_function(summand[j], n, tol);
            acc = started ? tensor(hj, acc) : std::move(hj);
            started = true;
        }
        hs.push_back(std::move(acc));
    }
    BlockEncodingHandle inner =
        hs.size() == 1 ? hs[0] : lcu_combine(hs, std::vector<cplx>(hs.size(), cplx(1.0)));

    bool outer_identity = spec.outer.empty() ||
                          (spec.outer.size() == 2 && spec.outer[0] == 0.0 &&
                           spec.outer[1] == 1.0);
    if (!outer_identity) {
        if (!all_real)
            throw Error("hamiltonian-encoder",
                        "outer composition needs a real separable coefficient");
        double aI = inner.alpha;
        int dP = (int)spec.outer.size() - 1;
        ChebSeries q = cheb_fit(
            [&](double x) {
                double acc = 0.0, p = 1.0;
                for (double ck : spec.outer) {
                    acc += ck * p;
                    p *= aI * x;
                }
                return acc;
            },
            std::max(1, dP));
        std::vector<BlockEncodingHandle> parts;
        std::vector<cplx> pw;
        for (int parity = 0; parity < 2; ++parity) {
            ChebSeries part;
            part.c.assign(q.c.size(), 0.0);
            for (size_t k = 0; k < q.c.size(); ++k)
                if ((int)k % 2 == parity) part.c[k] = q.c[k];
            while (part.c.size() > 1 && std::abs(part.c.back()) < 1e-14)
                part.c.pop_back();
            double m = part.max_abs();
            if (m < 1e-14) continue;
            ChebSeries target;
            target.c.resize(part.c.size());
            for (size_t k = 0; k < part.c.size(); ++k) target.c[k] = part.c[k] / (2.0 * m);
            parts.push_back(pet_transform(inner, target));
            pw.push_back(2.0 * m);
        }
        if (parts.empty()) throw Error("hamiltonian-encoder", "outer polynomial is zero");
        inner = parts.size() == 1 && std::abs(pw[0].real() - 1.0) < 1e-15 &&
                        pw[0].imag() == 0.0
                    ? parts[0]
                    : lcu_combine(parts, pw);
    }

    // identically-one coefficient: nothing to multiply in
    if (spec.summands.size() == 1 && outer_identity) {
        bool allconst = true;
        cplx cprod(1.0);
        for (const auto& g : spec.summands[0]) {
            cplx c;
            if (constant_value(g, c))
                cprod *= c;
            else
                allconst = false;
        }
        if (allconst && cprod == cplx(1.0)) return false;
    }
    out = std::move(inner);
    return true;
}

} // namespace

BlockEncodingHandle encode_separable_coefficient(const SeparableFunctionSpec& spec,
                                                 int d, int n, double tol) {
    BlockEncodingHandle h;
    if (!coefficient_handle(spec, d, n, tol, h)) return identity_encoding(d * n);
    return h;
}

EncodedHamiltonian encode_H_multid(const PdeProblemMultiD& problem,
                                   const std::vector<std::vector<StencilSpec>>& stencils,
                                   int n, int n_xi, double L_xi, int n_clock, double ds,
                                   double tol) {
    int d = problem.d;
    if (d < 1 || (int)problem.domains.size() != d || (int)problem.boundaries.size() != d)
        throw Error("hamiltonian-encoder", "inconsistent multi-dimensional problem");
    if (problem.terms.empty()) throw Error("hamiltonian-encoder", "problem has no terms");
    if (stencils.size() != problem.terms.size())
        throw Error("hamiltonian-encoder", "one stencil list per term required");

    std::vector<BlockEncodingHandle> aks;
    for (size_t k = 0; k < problem.terms.size(); ++k) {
        const PdeTermMultiD& term = problem.terms[k];
        if ((int)term.orders.size() != d)
            throw Error("hamiltonian-encoder", "term order list dimension mismatch");
        BlockEncodingHandle deriv;
        bool started = false;
        for (int j = 0; j < d; ++j) {
            BlockEncodingHandle hj;
            if (term.orders[j] == 0) {
                hj = identity_encoding(n);
            } else {
                auto [a, b] = problem.domains[j];
                AssembledTerm at =
                    assemble_term(stencils[k][j], PiecewisePolynomial::constant(a, b, 1.0),
                                  problem.boundaries[j], n, a, b);
                if (at.vprime.norm() > 1e-12)
                    throw Error("hamiltonian-encoder",
                                "multi-dimensional path needs homogeneous boundary data");
                hj = encode_term_robin(at.profile, at.f, n, tol);
            }
            deriv = started ? tensor(hj, deriv) : std::move(hj);
            started = true;
        }
        BlockEncodingHandle coef;
        if (coefficient_handle(term.coef, d, n, tol, coef))
            aks.push_back(product(coef, deriv));
        else
            aks.push_back(std::move(deriv));
    }
    BlockEncodingHandle hA =
        aks.size() == 1 ? aks[0] : lcu_combine(aks, std::vector<cplx>(aks.size(), cplx(1.0)));

    if (problem.source)
        throw Error("hamiltonian-encoder",
                    "multi-dimensional sources are matrix-path only");
    BlockEncodingHandle hB = identity_encoding(d * n);
    BlockEncodingHandle S1 = encode_S(hA, &hB, 1);
    BlockEncodingHandle S2 = encode_S(hA, &hB, 2);

    XiGrid xi{n_xi, L_xi};
    BlockEncodingHandle H1 = tensor(S1, xi_coordinate(xi));
    BlockEncodingHandle H2 = tensor(S2, identity_encoding(n_xi));
    BlockEncodingHandle H = lcu_combine({H1, H2}, {1.0, 1.0});

    if (n_clock > 0) {
        if (!(ds > 0.0)) throw Error("hamiltonian-encoder", "clock step must be positive");
        BandedProfile ps;
        ps.bulk = {{-1, cplx(0.0, 1.0 / (2.0 * ds))}, {1, cplx(0.0, -1.0 / (2.0 * ds))}};
        BlockEncodingHandle hp = banded_core(ps.bulk, nullptr, n_clock, nullptr, tol);
        int inner = (int)H.data.size();
        H = lcu_combine({tensor(hp, identity_encoding(inner)),
                         tensor(identity_encoding(n_clock), H)},
                        {1.0, 1.0});
    }

    EncodedHamiltonian out;
    out.handle = std::move(H);
    out.alpha_total = out.handle.alpha;
    out.layout = out.handle.circuit.registers;
    return out;
}

std::string resource_report(const BlockEncodingHandle& h) {
    ResourceCount rc = count_resources(h.circuit, true);
    nlohmann::json j;
    j["one_qubit"] = rc.one_qubit;
    j["cnot"] = rc.cnot;
    j["pure_ancillas"] = rc.pure_ancillas;
    j["alpha"] = h.alpha;
    j["epsilon"] = h.epsilon;
    return j.dump(2);
}

} // namespace qpde
