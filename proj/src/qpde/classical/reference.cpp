#include "qpde/classical/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qpde {

EulerRun forward_euler(const Eigen::SparseMatrix<cplx>& A, const Eigen::VectorXcd& v,
                       const Eigen::VectorXcd& u0, double dt, double T,
                       const std::vector<double>& record_times, const CflInfo* cfl) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw Error("classical-reference", "invalid dt or T");
    EulerRun run;
    run.steps = std::max<long long>(1, (long long)std::ceil(T / dt - 1e-12));
    run.dt = T / double(run.steps);
    if (cfl) {
        double bound = cfl->alpha * std::pow(cfl->dx, cfl->m);
        run.cfl_violated = run.dt > bound * (1.0 + 1e-12);
    }

    std::set<long long> marks;
    for (double t : record_times) {
        long long k = (long long)std::llround(t / run.dt);
        if (k >= 0 && k <= run.steps) marks.insert(k);
    }
    marks.insert(run.steps);

    Eigen::VectorXcd u = u0;
    if (marks.count(0)) run.checkpoints.emplace_back(0.0, u);
    for (long long s = 1; s <= run.steps; ++s) {
        u = u + run.dt * (A * u) + run.dt * v;
        if (!u.allFinite() || u.norm() > 1e12)
            throw Error("classical-reference",
                        "forward Euler diverged (check the CFL bound dt <= alpha*dx^m)");
        if (marks.count(s)) run.checkpoints.emplace_back(double(s) * run.dt, u);
    }
    return run;
}

Eigen::MatrixXcd dense_expm(const Eigen::MatrixXcd& M, double t) {
    if (M.rows() != M.cols()) throw Error("classical-reference", "expm needs a square matrix");
    if (M.rows() > 4096) throw Error("classical-reference", "expm guard exceeded (dim > 4096)");
    const Eigen::Index n = M.rows();
    Eigen::MatrixXcd A = t * M;

    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const double theta13 = 5.371920351148152;

    double norm1 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) norm1 = std::max(norm1, A.col(j).cwiseAbs().sum());
    int s = 0;
    if (norm1 > theta13) s = int(std::ceil(std::log2(norm1 / theta13)));
    if (s > 0) A /= std::pow(2.0, s);

    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd A2 = A * A;
    const Eigen::MatrixXcd A4 = A2 * A2;
    const Eigen::MatrixXcd A6 = A2 * A4;
    Eigen::MatrixXcd U =
        A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
             b[3] * A2 + b[1] * I);
    Eigen::MatrixXcd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                         b[4] * A4 + b[2] * A2 + b[0] * I;
    Eigen::MatrixXcd R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) R = R * R;
    return R;
}

Eigen::VectorXcd inhomogeneous_solution(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& v,
                                        const Eigen::VectorXcd& u0, double t) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = A;
    aug.topRightCorner(n, 1) = v;
    Eigen::VectorXcd w(n + 1);
    w.head(n) = u0;
    w(n) = 1.0;
    Eigen::VectorXcd out = dense_expm(aug, t) * w;
    return out.head(n);
}

FlopReport flop_estimate(long long N, int d, int m, int g, double T) {
    FlopReport r;
    r.explicit_flops = T * std::pow(double(N), double(d + m)) * double(m);
    r.implicit_flops = T * std::pow(double(N), double(d + g));
    std::ostringstream os;
    os << "classical cost estimates (N=" << N << ", d=" << d << ", m=" << m << ", g=" << g
       << ", T=" << T << ")\n"
       << "  explicit (forward Euler, CFL-limited): ~" << r.explicit_flops
       << " flops  [O(T N^(d+m) m)]\n"
       << "  implicit (order-g solve):              ~" << r.implicit_flops
       << " flops  [O(T N^(d+g))]\n";
    os << "  crossover: implicit preferred when N^(g-m) < m, i.e. "
       << (r.implicit_flops < r.explicit_flops ? "implicit" : "explicit")
       << " cheaper at this configuration\n";
    r.text = os.str();
    return r;
}

} // namespace qpde
