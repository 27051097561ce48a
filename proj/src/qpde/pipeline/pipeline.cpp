#include "qpde/pipeline/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpde/classical/reference.hpp"
#include "qpde/encoder/encoder.hpp"
#include "qpde/qsvt/qsp.hpp"
#include "qpde/qsvt/qsvt.hpp"
#include "qpde/schro/schro.hpp"
#include "qpde/sim/statevector.hpp"

namespace qpde {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Assembled {
    DiscretizedSystem sys;
    HomogenizedSystem hom;
    HomogenizeMode mode;
    Eigen::VectorXcd u0;
    Eigen::VectorXcd w0;
    XiGrid xi;
};

Assembled assemble(const ProblemFile& pf) {
    if (pf.run.stencils.size() != pf.problem.terms.size())
        throw Error("pipeline", "one stencil choice per term required");
    std::vector<StencilSpec> stencils;
    for (size_t k = 0; k < pf.problem.terms.size(); ++k)
        stencils.push_back(build_stencil(pf.run.stencils[k].kind,
                                         pf.problem.terms[k].p,
                                         pf.run.stencils[k].accuracy));
    Assembled a;
    a.sys = assemble_system(pf.problem, stencils, pf.run.n);
    a.mode = pf.run.homogenize == "general" ? HomogenizeMode::General
                                            : HomogenizeMode::Identity;
    a.hom = homogenize(a.sys, a.mode);

    auto samples = pf.problem.initial.sample(a.sys.grid, pf.problem.a, pf.problem.b);
    long long N = 1LL << pf.run.n;
    a.u0 = Eigen::VectorXcd::Zero(N);
    for (long long i = 0; i < N; ++i) a.u0(i) = samples[i];
    a.w0 = Eigen::VectorXcd::Zero(2 * N);
    a.w0.head(N) = a.u0;
    a.w0.tail(N) = a.hom.companion;
    a.xi = XiGrid{pf.run.n_xi, pf.run.L_xi};
    return a;
}

int max_order(const ProblemFile& pf) {
    int m = 1;
    for (const auto& t : pf.problem.terms) m = std::max(m, t.p);
    return m;
}

Eigen::VectorXcd euler_reference(const Assembled& a, const ProblemFile& pf, double T) {
    if (T <= 0.0) return a.u0;
    int m = max_order(pf);
    CflInfo cfl{a.sys.dx, m, 0.25};
    double dt = 0.25 * std::pow(a.sys.dx, m);
    return forward_euler(a.sys.A, a.sys.v, a.u0, dt, T, {}, &cfl).final_state();
}

// scatter a data-register vector into the full simulator register
StateVector embed_state(const Eigen::VectorXcd& psi, int nq, const std::vector<int>& data) {
    StateVector full = StateVector::zero_state(nq);
    full.amp(0) = 0.0;
    for (long long k = 0; k < psi.size(); ++k) {
        if (psi(k) == cplx(0.0)) continue;
        long long idx = 0;
        for (size_t b = 0; b < data.size(); ++b)
            if ((k >> b) & 1) idx |= 1LL << data[b];
        full.amp(idx) = psi(k);
    }
    return full;
}

std::string resources_text(const ProblemFile& pf, const Assembled& a,
                           const EncodedHamiltonian& enc) {
    std::ostringstream os;
    os << "mode: " << (pf.run.mode == RunMode::Matrix ? "matrix" : "circuit") << "\n";
    os << "n = " << pf.run.n << ", n_xi = " << pf.run.n_xi
       << ", L_xi = " << fmt(pf.run.L_xi) << "\n\n";

    os << "term encodings:\n";
    for (size_t k = 0; k < a.sys.terms.size(); ++k) {
        const AssembledTerm& t = a.sys.terms[k];
        auto h = encode_term_robin(t.profile, t.f, pf.run.n);
        os << "  term " << k << " (order " << t.p << ", kappa "
           << t.profile.kappa() << "):\n" << resource_report(h) << "\n";
    }
    os << "\nfull Hamiltonian encoding (" << enc.handle.circuit.nq << " qubits):\n"
       << resource_report(enc.handle) << "\n";
    os << "alpha_total = " << fmt(enc.alpha_total) << "\n\n";

    os << "QSVT truncation degrees:\n";
    for (double T : pf.run.times) {
        double at = enc.alpha_total * T;
        int g = T > 0.0 ? truncation_degree(at, pf.run.epsilon) : 0;
        double lg = std::log(1.0 / pf.run.epsilon);
        double formula = at + lg / std::log(std::exp(1.0) + lg / std::max(at, 1e-300));
        os << "  T = " << fmt(T) << ": g = " << g
           << "  (theorem scale alpha*t + ln(1/eps)/ln(e + ln(1/eps)/(alpha*t)) = "
           << fmt(formula) << ")\n";
    }

    long long N = 1LL << pf.run.n;
    int m = max_order(pf);
    int acc = pf.run.stencils.empty() ? 2 : pf.run.stencils[0].accuracy;
    double Tmax = 0.0;
    for (double T : pf.run.times) Tmax = std::max(Tmax, T);
    os << "\nclassical comparison:\n"
       << flop_estimate(N, 1, m, acc, std::max(Tmax, 1e-12)).text << "\n";
    return os.str();
}

void write_outputs(const ProblemFile& pf, const RunArtifacts& art) {
    namespace fs = std::filesystem;
    fs::create_directories(pf.run.out);
    for (size_t i = 0; i < art.stages.size(); ++i) {
        std::vector<double> x, uq, ue, err;
        for (size_t j = 0; j < art.grid.size(); ++j) {
            x.push_back(art.grid[j]);
            uq.push_back(art.u_quantum[i](j).real());
            ue.push_back(art.u_euler[i](j).real());
            err.push_back(std::abs(art.u_quantum[i](j) - art.u_euler[i](j)));
        }
        std::string name = pf.run.out + "/solution_T" + fmt(art.stages[i].T) + ".csv";
        save_csv(name, {"x_i", "u_quantum", "u_euler", "abs_error"},
                 {x, uq, ue, err});
    }
    std::ofstream mf(pf.run.out + "/metrics.txt");
    mf << art.metrics_text;
    std::ofstream rf(pf.run.out + "/resources.txt");
    rf << art.resources_text;
}

} // namespace

RunArtifacts run(const ProblemFile& pf) {
    Assembled a = assemble(pf);
    long long dim = (2LL << pf.run.n) << pf.run.n_xi;
    if (pf.run.mode == RunMode::Matrix && dim > (1LL << 14))
        throw Error("pipeline", "matrix mode caps at dimension 2^14");

    RecoveryOptions opt;
    opt.xi_star = pf.run.xi_star;
    opt.window_points = pf.run.window;
    opt.project_top_half = true;
    SolutionRecovery rec(a.xi, a.w0, opt);
    Eigen::VectorXcd psi0 = initial_state(a.w0, a.xi);

    const PiecewisePolynomial* src =
        pf.problem.source ? &*pf.problem.source : nullptr;
    EncodedHamiltonian enc =
        encode_H_1d(a.sys, src, a.mode, pf.run.n_xi, pf.run.L_xi);

    SparseC H;
    if (pf.run.mode == RunMode::Matrix) {
        auto [s1, s2] = split_hermitian(a.hom.S);
        H = assemble_H(s1, s2, a.xi);
    }

    RunArtifacts art;
    art.grid = a.sys.grid;
    std::ostringstream met;
    for (double T : pf.run.times) {
        Eigen::VectorXcd uq;
        double success = 0.0;
        if (T <= 0.0) {
            auto r = rec.recover(psi0);
            uq = r.u;
            success = r.success_prob;
        } else if (pf.run.mode == RunMode::Matrix) {
            Eigen::VectorXcd psit =
                chebyshev_expi_apply(H, T, psi0, std::min(1e-12, pf.run.epsilon));
            auto r = rec.recover(psit);
            uq = r.u;
            success = r.success_prob;
        } else {
            // the simulation circuit adds two ancillas on top of the encoding
            if (enc.handle.circuit.nq + 2 > kMaxSimQubits)
                throw Error("pipeline", "circuit mode exceeds the simulator width");
            int g = 0;
            auto sim = hamiltonian_simulation(enc.handle, T, pf.run.epsilon, &g);
            StateVector full = embed_state(psi0, sim.circuit.nq, sim.data);
            apply(sim.circuit, full);
            Eigen::VectorXcd block = slice_amplitudes(full, sim.data);
            double p_flag = block.squaredNorm();
            auto r = rec.recover(block * sim.alpha);
            uq = r.u;
            success = p_flag * r.success_prob;
        }
        Eigen::VectorXcd ue = euler_reference(a, pf, T);
        Metrics m = compare_states(uq, ue);
        art.stages.push_back({T, m.fidelity, m.mse, success});
        art.u_quantum.push_back(uq);
        art.u_euler.push_back(ue);
        met << "T=" << fmt(T) << " fidelity=" << fmt(m.fidelity)
            << " mse=" << fmt(m.mse) << " success_prob=" << fmt(success) << "\n";
    }
    art.metrics_text = met.str();
    art.resources_text = resources_text(pf, a, enc);
    if (!pf.run.out.empty()) write_outputs(pf, art);
    return art;
}

std::string discretize_report_text(const ProblemFile& pf) {
    Assembled a = assemble(pf);
    std::ostringstream os;
    long long N = 1LL << pf.run.n;
    os << "grid: N = " << N << " points on [" << fmt(pf.problem.a) << ", "
       << fmt(pf.problem.b) << "], dx = " << fmt(a.sys.dx) << "\n";
    os << "operator: " << N << " x " << N << ", nnz = " << a.sys.A.nonZeros()
       << "\n";
    for (size_t k = 0; k < a.sys.terms.size(); ++k) {
        const BandedProfile& p = a.sys.terms[k].profile;
        os << "term " << k << ": order " << a.sys.terms[k].p << ", kappa = "
           << p.kappa() << ", boundary rows = " << p.boundary_rows.size()
           << " (K1 = " << p.K1 << ", K2 = " << p.K2 << ")\n";
    }
    os << "inhomogeneity norm: " << fmt(a.sys.v.norm()) << "\n";
    int m = max_order(pf);
    os << "CFL step (alpha = 0.25): dt <= " << fmt(0.25 * std::pow(a.sys.dx, m))
       << "\n";
    return os.str();
}

std::string encode_report_text(const ProblemFile& pf) {
    Assembled a = assemble(pf);
    const PiecewisePolynomial* src =
        pf.problem.source ? &*pf.problem.source : nullptr;
    EncodedHamiltonian enc =
        encode_H_1d(a.sys, src, a.mode, pf.run.n_xi, pf.run.L_xi);
    std::ostringstream os;
    os << "Hamiltonian block-encoding: " << enc.handle.circuit.nq
       << " qubits, alpha_total = " << fmt(enc.alpha_total) << "\n"
       << resource_report(enc.handle) << "\n";
    return os.str();
}

std::string resources_report_text(const ProblemFile& pf) {
    Assembled a = assemble(pf);
    const PiecewisePolynomial* src =
        pf.problem.source ? &*pf.problem.source : nullptr;
    EncodedHamiltonian enc =
        encode_H_1d(a.sys, src, a.mode, pf.run.n_xi, pf.run.L_xi);
    return resources_text(pf, a, enc);
}

} // namespace qpde
