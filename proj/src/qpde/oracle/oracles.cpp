#include "qpde/oracle/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qpde/circuit/synth.hpp"
#include "qpde/qsvt/qsp.hpp"

namespace qpde {

Circuit banded_sparse_access(const std::vector<long long>& offsets, int n, int l) {
    long long kappa = (long long)offsets.size();
    if (l < 0 || n < 1 || l > n) throw Error("oracle-library", "bad banded access sizes");
    if (kappa > (1LL << l))
        throw Error("oracle-library", "shift register too small for the band");
    long long N = 1LL << n;
    std::vector<std::pair<long long, long long>> assign;
    std::set<long long> images;
    for (long long s = 0; s < kappa; ++s) {
        long long r = ((offsets[s] % N) + N) % N;
        if (!images.insert(r).second)
            throw Error("oracle-library", "duplicate band offsets");
        assign.push_back({s, r});
    }

    Circuit c;
    int sbase = c.add_qubits(n, "shift", Role::SparseIndex);
    int ibase = c.add_qubits(n, "index", Role::Data);
    int carry = c.add_qubits(1, "carry", Role::PureAncilla);
    std::vector<int> sreg, ireg;
    for (int q = 0; q < n; ++q) sreg.push_back(sbase + q);
    for (int q = 0; q < n; ++q) ireg.push_back(ibase + q);
    basis_permutation(c, sreg, assign);
    cuccaro_add(c, sreg, ireg, carry);
    return c;
}

Circuit sparse_amplitude_oracle(const std::vector<cplx>& values, double N_D, int l) {
    long long kappa = (long long)values.size();
    if (l < 0 || kappa > (1LL << l))
        throw Error("oracle-library", "value list exceeds the s register");
    bool complex_vals = false;
    for (const cplx& v : values) {
        if (std::abs(v) > N_D * (1.0 + 1e-12))
            throw Error("oracle-library", "N_D below the largest value");
        if (std::abs(std::arg(v)) > 1e-14 && std::abs(v) > 0.0) complex_vals = true;
    }

    Circuit c;
    std::vector<int> sreg;
    if (l > 0) {
        int sbase = c.add_qubits(l, "band", Role::SparseIndex);
        for (int q = 0; q < l; ++q) sreg.push_back(sbase + q);
    }
    int flag = c.add_qubits(1, "branch", Role::Flag);

    long long S = 1LL << l;
    std::vector<double> theta(S, 0.0);
    for (long long s = 0; s < kappa; ++s) {
        double r = std::min(1.0, std::abs(values[s]) / N_D);
        theta[s] = 2.0 * std::acos(r);
    }
    if (l == 0)
        c.ry(flag, theta[0]);
    else
        multiplexed_ry(c, sreg, flag, theta);

    if (complex_vals) {
        // phase e^{i arg D_s} on the |0> branch only: split into a multiplexed
        // Rz on the flag and a diagonal phase on the s register.
        std::vector<double> phi(S, 0.0);
        for (long long s = 0; s < kappa; ++s) phi[s] = std::arg(values[s]);
        std::vector<double> half(S);
        for (long long s = 0; s < S; ++s) half[s] = 0.5 * phi[s];
        std::vector<double> rz(S);
        for (long long s = 0; s < S; ++s) rz[s] = -phi[s];
        if (l == 0) {
            c.g1(flag, Mat2{std::polar(1.0, phi[0]), 0.0, 0.0, 1.0});
        } else {
            multiplexed_rz(c, sreg, flag, rz);
            diagonal_phases(c, sreg, half);
        }
    }
    return c;
}

Circuit indicator(long long K1, long long K2, int n) {
    if (n < 1 || K1 < 0 || K1 > K2 || K2 >= (1LL << n))
        throw Error("oracle-library", "indicator bounds out of range");
    Circuit c;
    int ibase = c.add_qubits(n, "index", Role::Data);
    int flag = c.add_qubits(1, "indicator", Role::Flag);
    int sbase = c.add_qubits(2 * n + 2, "scratch", Role::PureAncilla);
    std::vector<int> reg, scratch;
    for (int q = 0; q < n; ++q) reg.push_back(ibase + q);
    for (int q = 0; q < 2 * n + 2; ++q) scratch.push_back(sbase + q);
    indicator_range(c, reg, K1, K2, flag, scratch);
    return c;
}

void uniform_prep(Circuit& c, const std::vector<int>& reg, long long kappa) {
    long long S = 1LL << reg.size();
    if (kappa < 1 || kappa > S) throw Error("oracle-library", "uniform prep kappa range");
    if (kappa == S) {
        for (int q : reg) c.h(q);
        return;
    }
    std::vector<double> w(S, 0.0);
    for (long long s = 0; s < kappa; ++s) w[s] = 1.0;
    amplitude_prep(c, reg, w);
}

void diagonal_phases(Circuit& c, const std::vector<int>& reg,
                     const std::vector<double>& phis) {
    if (reg.empty()) throw Error("oracle-library", "diagonal phases on empty register");
    long long S = 1LL << reg.size();
    if ((long long)phis.size() != S)
        throw Error("oracle-library", "diagonal phases wants 2^n angles");
    if (reg.size() == 1) {
        c.g1(reg[0], Mat2{std::polar(1.0, phis[0]), 0.0, 0.0, std::polar(1.0, phis[1])});
        return;
    }
    long long half = S / 2;
    std::vector<double> mean(half), delta(half);
    for (long long t = 0; t < half; ++t) {
        mean[t] = 0.5 * (phis[2 * t] + phis[2 * t + 1]);
        delta[t] = phis[2 * t + 1] - phis[2 * t];
    }
    std::vector<int> high(reg.begin() + 1, reg.end());
    multiplexed_rz(c, high, reg[0], delta);
    diagonal_phases(c, high, mean);
}

namespace {

struct PolyBranch {
    BlockEncodingHandle handle;
    cplx weight;
    double err = 0.0;
};

// Window keeping the QSP target analytic near w = +-1 while staying flat
// (to ~1e-9) over the band of reachable signal values.
double poly_window(double w) {
    const double w0 = 0.735, del = 0.06;
    return 0.5 * (std::erf((w0 - w) / del) + std::erf((w0 + w) / del));
}

} // namespace

BlockEncodingHandle piecewise_poly_oracle(const PiecewisePolynomial& f, int n,
                                          double tol) {
    if (n < 1 || n > 24) throw Error("oracle-library", "grid register size out of range");
    if (!(tol > 0.0)) throw Error("oracle-library", "nonpositive tolerance");
    double Nf = f.max_abs();
    if (Nf <= 0.0) throw Error("oracle-library", "cannot encode the zero function");

    const double mu = 1.0 / 16.0;
    const double cfac = pi / 6.0;
    long long M = 1LL << n;
    double a = f.a(), b = f.b();
    double dx = (b - a) / double(M - 1);
    double dxt = (2.0 - 2.0 * mu) / double(M - 1);
    double sb = std::sin(cfac * (1.0 - mu));

    // grid index span of each segment
    const auto& segs = f.segments();
    int G = (int)segs.size();
    std::vector<long long> first(G, -1), last(G, -1);
    for (long long j = 0; j < M; ++j) {
        int g = f.segment_index(a + double(j) * dx);
        if (first[g] < 0) first[g] = j;
        last[g] = j;
    }

    std::vector<PolyBranch> branches;
    int fit_deg = 320;
    for (int g = 0; g < G; ++g) {
        if (first[g] < 0) continue;
        auto value = [&](double w) -> cplx {
            double xt = std::asin(std::max(-1.0, std::min(1.0, w))) / cfac;
            double x = a + (xt + 1.0 - mu) / dxt * dx;
            return eval_poly(segs[g].coef, x) / Nf;
        };
        for (int part = 0; part < 4; ++part) {
            int parity = part % 2;
            auto exact = [&](double w) {
                cplx vp = value(w), vm = value(-w);
                double rp = (part < 2) ? vp.real() : vp.imag();
                double rm = (part < 2) ? vm.real() : vm.imag();
                return 0.5 * (rp + (parity ? -rm : rm));
            };
            ChebSeries fit = cheb_fit(
                [&](double w) { return exact(w) * poly_window(w); }, fit_deg);
            for (int k = 0; k <= fit_deg; ++k)
                if (k % 2 != parity) fit.c[k] = 0.0;
            double tail = 0.0;
            int d = parity;
            for (int k = fit_deg; k >= 0; --k) {
                tail += std::abs(fit.c[k]);
                if (tail > tol / 40.0) {
                    d = k;
                    break;
                }
            }
            if (d % 2 != parity) ++d;
            ChebSeries trunc;
            trunc.c.assign(fit.c.begin(), fit.c.begin() + d + 1);
            double m = trunc.max_abs();
            if (m < tol * 1e-3) continue;

            ChebSeries target;
            target.c.resize(trunc.c.size());
            for (size_t k = 0; k < trunc.c.size(); ++k) target.c[k] = trunc.c[k] / (2.0 * m);
            PhaseSequence ps =
                solve_qsp_phases_cached("poly-oracle", target, d, QspConvention::Wx);

            // branch circuit: indicator-selected one-qubit QSP with a
            // real-part extraction qubit
            PolyBranch br;
            Circuit& bc = br.handle.circuit;
            int dbase = bc.add_qubits(n, "grid", Role::Data);
            int sig = bc.add_qubits(1, "signal", Role::Flag);
            int sel = bc.add_qubits(1, "re-select", Role::Flag);
            std::vector<int> dreg, scratch;
            for (int q = 0; q < n; ++q) dreg.push_back(dbase + q);
            int ind = -1;
            if (first[g] != 0 || last[g] != M - 1) {
                ind = bc.add_qubits(1, "segment", Role::Flag);
                int sbase = bc.add_qubits(2 * n + 2, "scratch", Role::PureAncilla);
                for (int q = 0; q < 2 * n + 2; ++q) scratch.push_back(sbase + q);
                indicator_range(bc, dreg, first[g], last[g], ind, scratch);
                bc.x(ind); // in range -> flag back to |0>
            }

            auto phase_zz = [&](double phi) {
                bc.cx(sel, sig);
                bc.g1(sig, Mat2{std::polar(1.0, phi), 0.0, 0.0, std::polar(1.0, -phi)});
                bc.cx(sel, sig);
            };
            double theta0 = pi / 2.0 - cfac * (-1.0 + mu);
            auto wop = [&]() {
                bc.g1(sig, gate_rx(-2.0 * theta0));
                for (int bq = 0; bq < n; ++bq)
                    bc.mc({dbase + bq}, {1}, sig,
                          gate_rx(2.0 * cfac * dxt * double(1LL << bq)));
            };
            bc.h(sel);
            phase_zz(ps.phases[d]);
            for (int k = d; k >= 1; --k) {
                wop();
                phase_zz(ps.phases[k - 1]);
            }
            bc.h(sel);

            br.handle.alpha = 1.0;
            br.handle.dim = M;
            br.handle.data = dreg;
            br.handle.flags = {sig, sel};
            if (ind >= 0) br.handle.flags.push_back(ind);
            br.handle.pure = scratch;
            br.weight = (part < 2) ? cplx(2.0 * m, 0.0) : cplx(0.0, 2.0 * m);

            double band_err = 0.0;
            for (int i = 0; i <= 1600; ++i) {
                double w = -sb + 2.0 * sb * double(i) / 1600.0;
                band_err = std::max(band_err, std::abs(trunc.eval(w) - exact(w)));
            }
            br.err = band_err + 2.0 * m * ps.residual;
            branches.push_back(std::move(br));
        }
    }
    if (branches.empty())
        throw Error("oracle-library", "no nonzero polynomial branches");

    std::vector<BlockEncodingHandle> hs;
    std::vector<cplx> ws;
    double err_sum = 0.0;
    for (auto& br : branches) {
        hs.push_back(std::move(br.handle));
        ws.push_back(br.weight);
        err_sum += br.err;
    }
    BlockEncodingHandle out = lcu_combine(hs, ws);
    out.alpha *= Nf;
    out.epsilon = Nf * err_sum;
    return out;
}

} // namespace qpde
