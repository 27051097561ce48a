#include "qpde/fd/discretize.hpp"

#include <cmath>

namespace qpde {

AssembledTerm assemble_term(const StencilSpec& stencil, const PiecewisePolynomial& f,
                            const Boundary& boundary, int n, double a, double b) {
    const int N = int(pow2(n));
    const int lw = stencil.left_width();
    const int rw = stencil.right_width();
    if (lw + rw + 1 > N)
        throw Error("discretizer", "stencil wider than the grid");

    const double dx = (b - a) / (N - 1);
    double scale = 1.0;
    for (int k = 0; k < stencil.p; ++k) scale /= dx;

    MatrixC D = MatrixC::Zero(N, N);
    VectorC corr = VectorC::Zero(N);

    const bool robin = boundary.kind == BoundaryKind::Robin;
    const RobinBoundary& rb = boundary.robin;

    for (int i = 0; i < N; ++i) {
        for (std::size_t m = 0; m < stencil.offsets.size(); ++m) {
            const double gt = stencil.gamma_d(m) * scale;
            const int j = i + stencil.offsets[m];
            if (j >= 0 && j < N) {
                D(i, j) += gt;
            } else if (j < 0) {
                // Ghost at x_{-d}: closed with the centered first-derivative
                // form of the left condition, u_{-d} = u_d - 2 d dx (A2 - A1 u_0),
                // or by odd reflection through the fixed Dirichlet value.
                const int d = -j;
                if (robin) {
                    D(i, d) += gt;
                    D(i, 0) += gt * 2.0 * d * dx * rb.A1;
                    corr(i) += -gt * 2.0 * d * dx * rb.A2;
                } else {
                    D(i, 0) += 2.0 * gt;
                    D(i, d) -= gt;
                }
            } else {
                const int d = j - (N - 1);
                if (robin) {
                    D(i, N - 1 - d) += gt;
                    D(i, N - 1) += -gt * 2.0 * d * dx * rb.B1;
                    corr(i) += gt * 2.0 * d * dx * rb.B2;
                } else {
                    D(i, N - 1) += 2.0 * gt;
                    D(i, N - 1 - d) -= gt;
                }
            }
        }
    }

    int extra_left = 0, extra_right = 0;
    if (!robin) {
        // Endpoint values are pinned; their rows carry no dynamics.
        D.row(0).setZero();
        D.row(N - 1).setZero();
        corr(0) = corr(N - 1) = 0.0;
        extra_left = extra_right = 1;
    }

    AssembledTerm out{SparseC(N, N), VectorC::Zero(N), BandedProfile{}, f, stencil.p};
    BandedProfile& prof = out.profile;
    prof.K1 = std::max(lw, extra_left);
    prof.K2 = N - 1 - std::max(rw, extra_right);
    for (std::size_t m = 0; m < stencil.offsets.size(); ++m)
        prof.bulk.push_back({stencil.offsets[m], stencil.gamma_d(m) * scale});
    for (int i = 0; i < N; ++i) {
        if (i >= prof.K1 && i <= prof.K2) continue;
        std::vector<std::pair<int, cplx>> row;
        for (int j = 0; j < N; ++j)
            if (D(i, j) != cplx(0.0)) row.emplace_back(j, D(i, j));
        prof.boundary_rows[i] = std::move(row);
        if (corr(i) != cplx(0.0)) prof.boundary_correction[i] = corr(i);
    }

    std::vector<Eigen::Triplet<cplx>> trip;
    for (int i = 0; i < N; ++i) {
        const cplx fi = f.evaluate(a + i * dx);
        out.vprime(i) = fi * corr(i);
        for (int j = 0; j < N; ++j)
            if (D(i, j) != cplx(0.0)) trip.emplace_back(i, j, fi * D(i, j));
    }
    out.A.setFromTriplets(trip.begin(), trip.end());
    return out;
}

DiscretizedSystem assemble_system(const PdeProblem1D& problem,
                                  const std::vector<StencilSpec>& stencils, int n) {
    if (problem.terms.empty()) throw Error("discretizer", "problem has no terms");
    if (stencils.size() != problem.terms.size())
        throw Error("discretizer", "one stencil per term required");

    DiscretizedSystem sys;
    sys.n = n;
    const int N = int(pow2(n));
    sys.dx = (problem.b - problem.a) / (N - 1);
    sys.grid.resize(N);
    for (int i = 0; i < N; ++i) sys.grid[i] = problem.a + i * sys.dx;

    sys.A = SparseC(N, N);
    sys.v = VectorC::Zero(N);
    for (std::size_t k = 0; k < problem.terms.size(); ++k) {
        if (stencils[k].p != problem.terms[k].p)
            throw Error("discretizer", "stencil derivative order mismatch");
        AssembledTerm t = assemble_term(stencils[k], problem.terms[k].f,
                                        problem.boundary, n, problem.a, problem.b);
        sys.A = sys.A + t.A;
        sys.v += t.vprime;
        sys.terms.push_back(std::move(t));
    }
    if (problem.source)
        for (int i = 0; i < N; ++i) sys.v(i) += problem.source->evaluate(sys.grid[i]);
    if (problem.boundary.kind == BoundaryKind::Dirichlet) {
        sys.v(0) = 0.0;
        sys.v(N - 1) = 0.0;
    }
    return sys;
}

HomogenizedSystem homogenize(const DiscretizedSystem& system, HomogenizeMode mode) {
    const int N = int(system.A.rows());
    HomogenizedSystem out;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int k = 0; k < system.A.outerSize(); ++k)
        for (SparseC::InnerIterator it(system.A, k); it; ++it)
            trip.emplace_back(int(it.row()), int(it.col()), it.value());
    if (mode == HomogenizeMode::General) {
        const double root = std::sqrt(double(N));
        for (int i = 0; i < N; ++i) {
            const cplx bii = root * system.v(i);
            if (bii != cplx(0.0)) trip.emplace_back(i, N + i, bii);
        }
        out.companion = VectorC::Constant(N, cplx(1.0 / root));
    } else {
        for (int i = 0; i < N; ++i) trip.emplace_back(i, N + i, cplx(1.0));
        out.companion = system.v;
    }
    out.S = SparseC(2 * N, 2 * N);
    out.S.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace qpde
