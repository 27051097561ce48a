#include "qpde/schro/schro.hpp"

#include <cmath>

namespace qpde {

Eigen::VectorXd XiGrid::points() const {
    Eigen::VectorXd p(size());
    for (long long k = 0; k < size(); ++k) p(k) = point(k);
    return p;
}

std::pair<SparseC, SparseC> split_hermitian(const SparseC& S) {
    if (S.rows() != S.cols()) throw Error("schrodingerizer", "split of non-square matrix");
    SparseC Sd = SparseC(S.adjoint());
    SparseC S1 = 0.5 * (S + Sd);
    SparseC S2 = (S - Sd) * cplx(0.0, -0.5);
    S1.prune(cplx(1.0), 1e-300);
    S2.prune(cplx(1.0), 1e-300);
    return {S1, S2};
}

SparseC assemble_H(const SparseC& S1, const SparseC& S2, const XiGrid& xi) {
    long long N = S1.rows(), M = xi.size();
    if (S2.rows() != N) throw Error("schrodingerizer", "S1/S2 dimension mismatch");
    std::vector<Eigen::Triplet<cplx>> t;
    for (int outer = 0; outer < S1.outerSize(); ++outer)
        for (SparseC::InnerIterator it(S1, outer); it; ++it)
            for (long long k = 0; k < M; ++k)
                t.emplace_back(it.row() * M + k, it.col() * M + k,
                               it.value() * xi.point(k));
    for (int outer = 0; outer < S2.outerSize(); ++outer)
        for (SparseC::InnerIterator it(S2, outer); it; ++it)
            for (long long k = 0; k < M; ++k)
                t.emplace_back(it.row() * M + k, it.col() * M + k, it.value());
    SparseC H(N * M, N * M);
    H.setFromTriplets(t.begin(), t.end());
    return H;
}

SparseC clock_momentum(int n_s, double ds) {
    long long M = 1LL << n_s;
    cplx c(0.0, -0.5 / ds);
    std::vector<Eigen::Triplet<cplx>> t;
    for (long long j = 0; j < M; ++j) {
        t.emplace_back(j, (j + 1) % M, c);
        t.emplace_back(j, (j + M - 1) % M, -c);
    }
    SparseC p(M, M);
    p.setFromTriplets(t.begin(), t.end());
    return p;
}

SparseC clock_extend(const std::function<SparseC(double)>& H_at, int n_s, double ds) {
    long long Ms = 1LL << n_s;
    SparseC H0 = H_at(0.0);
    long long D = H0.rows();
    std::vector<Eigen::Triplet<cplx>> t;
    SparseC p = clock_momentum(n_s, ds);
    for (int outer = 0; outer < p.outerSize(); ++outer)
        for (SparseC::InnerIterator it(p, outer); it; ++it)
            for (long long d = 0; d < D; ++d)
                t.emplace_back(it.row() * D + d, it.col() * D + d, it.value());
    for (long long k = 0; k < Ms; ++k) {
        SparseC Hk = (k == 0) ? H0 : H_at(double(k) * ds);
        if (Hk.rows() != D) throw Error("schrodingerizer", "clock sampler dimension drift");
        for (int outer = 0; outer < Hk.outerSize(); ++outer)
            for (SparseC::InnerIterator it(Hk, outer); it; ++it)
                t.emplace_back(k * D + it.row(), k * D + it.col(), it.value());
    }
    SparseC H(Ms * D, Ms * D);
    H.setFromTriplets(t.begin(), t.end());
    return H;
}

Eigen::VectorXcd initial_state(const Eigen::VectorXcd& w0, const XiGrid& xi) {
    if (w0.norm() <= 0.0) throw Error("schrodingerizer", "zero initial vector");
    long long N = w0.size(), M = xi.size();
    Eigen::VectorXcd psi(N * M);
    for (long long j = 0; j < N; ++j)
        for (long long k = 0; k < M; ++k) {
            double x = xi.point(k);
            psi(j * M + k) = w0(j) * (2.0 / (1.0 + x * x));
        }
    psi.normalize();
    return psi;
}

Eigen::VectorXcd initial_clock_profile(int n_s, double ds, double sigma) {
    long long M = 1LL << n_s;
    double period = double(M) * ds;
    Eigen::VectorXcd g(M);
    double norm4 = std::pow(1.0 / (2.0 * pi * sigma * sigma), 0.25);
    for (long long k = 0; k < M; ++k) {
        double s = double(k) * ds;
        double x = std::min(s, period - s); // periodic distance from s = 0
        g(k) = norm4 * std::exp(-x * x / (4.0 * sigma * sigma));
    }
    return g;
}

SolutionRecovery::SolutionRecovery(const XiGrid& xi, const Eigen::VectorXcd& w0,
                                   const RecoveryOptions& opt)
    : xi_(xi), opt_(opt) {
    long long M = xi.size();
    data_dim_ = w0.size();
    dconj_ = 2.0 * pi / (double(M) * xi.dxi());
    double xs = (opt.xi_star < 0.0) ? xi.L / 6.0 : opt.xi_star;
    if (opt.window_points < 1)
        throw Error("schrodingerizer", "recovery window must contain a point");

    long long center = (long long)std::llround(xs / dconj_);
    long long lo = center - (opt.window_points - 1) / 2;
    for (int w = 0; w < opt.window_points; ++w) {
        long long steps = lo + w;
        if (steps <= 0 || steps >= M / 2)
            throw Error("schrodingerizer", "recovery window leaves the positive-xi range");
        window_.push_back(steps); // inverse-transform index of xi = steps*dconj
    }

    Eigen::VectorXcd psi0 = initial_state(w0, xi_);
    Eigen::MatrixXcd V0 = transform(psi0);
    long long out_dim = opt_.project_top_half ? data_dim_ / 2 : data_dim_;
    Eigen::VectorXcd target = w0.segment(0, out_dim);
    for (long long m : window_) {
        Eigen::VectorXcd vm(out_dim);
        for (long long j = 0; j < out_dim; ++j) vm(j) = V0(j, m);
        double nn = vm.squaredNorm();
        if (nn <= 0.0) throw Error("schrodingerizer", "degenerate calibration column");
        calib_.push_back(vm.dot(target) / nn);
    }
}

Eigen::MatrixXcd SolutionRecovery::transform(const Eigen::VectorXcd& psi) const {
    long long M = xi_.size();
    if (psi.size() != data_dim_ * M)
        throw Error("schrodingerizer", "state size does not match recovery layout");
    Eigen::MatrixXcd V(data_dim_, M);
    std::vector<cplx> tw(M);
    for (long long m = 0; m < M; ++m)
        tw[m] = std::polar(1.0 / std::sqrt(double(M)), -2.0 * pi * double(m) / double(M));
    for (long long j = 0; j < data_dim_; ++j)
        for (long long m = 0; m < M; ++m) {
            cplx acc = 0.0;
            for (long long k = 0; k < M; ++k) acc += tw[(m * k) % M] * psi(j * M + k);
            V(j, m) = acc;
        }
    return V;
}

RecoveryResult SolutionRecovery::recover(const Eigen::VectorXcd& psi_final) const {
    Eigen::MatrixXcd V = transform(psi_final);
    long long out_dim = opt_.project_top_half ? data_dim_ / 2 : data_dim_;
    RecoveryResult r;
    r.u = Eigen::VectorXcd::Zero(out_dim);
    double nn = psi_final.squaredNorm();
    for (size_t w = 0; w < window_.size(); ++w) {
        Eigen::VectorXcd vm(out_dim);
        for (long long j = 0; j < out_dim; ++j) vm(j) = V(j, window_[w]);
        r.success_prob += vm.squaredNorm() / nn;
        r.u += calib_[w] * vm;
    }
    r.u /= double(window_.size());
    if (r.success_prob < opt_.min_prob)
        throw Error("schrodingerizer", "postselection probability below the floor");
    return r;
}

double gershgorin_bound(const SparseC& H) {
    Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(H.rows());
    for (int outer = 0; outer < H.outerSize(); ++outer)
        for (SparseC::InnerIterator it(H, outer); it; ++it)
            row_abs(it.row()) += std::abs(it.value());
    double b = row_abs.size() ? row_abs.maxCoeff() : 0.0;
    return std::max(b, 1e-300);
}

Eigen::VectorXcd chebyshev_expi_apply(const SparseC& H, double t,
                                      const Eigen::VectorXcd& psi, double tol) {
    if (H.rows() != psi.size())
        throw Error("schrodingerizer", "propagator dimension mismatch");
    double lam = gershgorin_bound(H);
    double tau = lam * t;
    double atau = std::abs(tau);
    // e^{i tau x} = sum_k (2 - delta_k0) i^k J_k(tau) T_k(x) on [-1, 1]
    SparseC A = H * cplx(1.0 / lam, 0.0);
    Eigen::VectorXcd tkm1 = psi;         // T_0 psi
    Eigen::VectorXcd tk = A * psi;       // T_1 psi
    Eigen::VectorXcd out = psi;          // J_0 term
    auto bessel = [&](int k) {
        double v = std::cyl_bessel_j((double)k, atau);
        if (tau < 0.0 && (k & 1)) v = -v;
        return v;
    };
    out *= bessel(0);
    cplx ik(0.0, 1.0);
    int small_run = 0;
    for (int k = 1; k < 100000; ++k) {
        double jk = bessel(k);
        out += (2.0 * jk) * (ik * tk);
        if (std::abs(jk) < tol * 1e-2 && double(k) > atau)
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 4) break;
        Eigen::VectorXcd tkp1 = 2.0 * (A * tk) - tkm1;
        tkm1.swap(tk);
        tk.swap(tkp1);
        ik *= cplx(0.0, 1.0);
    }
    return out;
}

} // namespace qpde
