#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpde/classical/reference.hpp"
#include "qpde/fd/discretize.hpp"
#include "qpde/schro/schro.hpp"

using namespace qpde;

namespace {

std::mt19937 rng(29);

MatrixC random_matrix(int d, double scale) {
    std::normal_distribution<double> G;
    MatrixC m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(G(rng), G(rng));
    m *= scale / m.operatorNorm();
    return m;
}

SparseC sparse_of(const MatrixC& M) {
    SparseC S(M.rows(), M.cols());
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (M(i, j) != cplx(0.0)) t.emplace_back(i, j, M(i, j));
    S.setFromTriplets(t.begin(), t.end());
    return S;
}

double direction_fidelity(const VectorC& a, const VectorC& b) {
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

} // namespace

TEST_CASE("XiGrid geometry") {
    XiGrid xi{3, 1.0};
    CHECK(xi.size() == 8);
    CHECK(xi.point(0) == doctest::Approx(-1.0));
    CHECK(xi.point(7) == doctest::Approx(1.0));
    CHECK(xi.dxi() == doctest::Approx(2.0 / 7.0));
    Eigen::VectorXd p = xi.points();
    for (int k = 0; k + 1 < 8; ++k)
        CHECK(p(k + 1) - p(k) == doctest::Approx(xi.dxi()));
}

TEST_CASE("split_hermitian") {
    MatrixC K = random_matrix(6, 1.0);
    K = ((K + K.adjoint()) / 2.0).eval();
    auto [h1, h2] = split_hermitian(sparse_of(K));
    CHECK((MatrixC(h1) - K).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(MatrixC(h2).cwiseAbs().maxCoeff() < 1e-14);

    auto [g1, g2] = split_hermitian(sparse_of((cplx(0.0, 1.0) * K).eval()));
    CHECK(MatrixC(g1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((MatrixC(g2) - K).cwiseAbs().maxCoeff() < 1e-14);

    MatrixC S = random_matrix(16, 2.0);
    auto [s1, s2] = split_hermitian(sparse_of(S));
    CHECK((MatrixC(s1) + cplx(0.0, 1.0) * MatrixC(s2) - S).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((MatrixC(s1) - MatrixC(s1).adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((MatrixC(s2) - MatrixC(s2).adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("assemble_H matches the tensor definition and is Hermitian") {
    MatrixC S = random_matrix(5, 1.5);
    auto [s1, s2] = split_hermitian(sparse_of(S));
    XiGrid xi{3, 2.0};
    MatrixC H = MatrixC(assemble_H(s1, s2, xi));
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    MatrixC d1(s1), d2(s2);
    long long M = xi.size();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (long long k = 0; k < M; ++k) {
                CHECK(std::abs(H(i * M + k, j * M + k) -
                               (d1(i, j) * xi.point(k) + d2(i, j))) < 1e-13);
                // off-diagonal in k vanishes
                if (k > 0) CHECK(std::abs(H(i * M + k, j * M + k - 1)) == 0.0);
            }
}

TEST_CASE("clock momentum matrix") {
    double ds = 0.25;
    MatrixC p = MatrixC(clock_momentum(2, ds));
    cplx c(0.0, -0.5 / ds);
    CHECK(std::abs(p(0, 0)) == 0.0);
    CHECK(std::abs(p(0, 1) - c) < 1e-15);
    CHECK(std::abs(p(0, 2)) == 0.0);
    CHECK(std::abs(p(0, 3) + c) < 1e-15);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("clock_extend with a constant Hamiltonian") {
    MatrixC K = random_matrix(3, 1.0);
    K = ((K + K.adjoint()) / 2.0).eval();
    SparseC Ks = sparse_of(K);
    SparseC Hp = clock_extend([&](double) { return Ks; }, 2, 0.5);
    MatrixC H = MatrixC(Hp);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    MatrixC p = MatrixC(clock_momentum(2, 0.5));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    cplx want = (i == j ? p(a, b) : cplx(0.0)) +
                                (a == b ? K(i, j) : cplx(0.0));
                    CHECK(std::abs(H(a * 3 + i, b * 3 + j) - want) < 1e-13);
                }
}

TEST_CASE("initial_state profile") {
    XiGrid xi{4, 6.0};
    VectorC w0(3);
    w0 << 1.0, cplx(0.0, 2.0), -0.5;
    VectorC psi = initial_state(w0, xi);
    CHECK(psi.norm() == doctest::Approx(1.0));
    // xi marginal proportional to 1/(1+x^2)^2
    long long M = xi.size();
    double r0 = 0.0, r1 = 0.0;
    for (int j = 0; j < 3; ++j) {
        r0 += std::norm(psi(j * M + 0));
        r1 += std::norm(psi(j * M + 5));
    }
    double x0 = xi.point(0), x5 = xi.point(5);
    double want = std::pow((1.0 + x5 * x5) / (1.0 + x0 * x0), -2.0);
    CHECK(r1 / r0 == doctest::Approx(want).epsilon(1e-10));
    CHECK_THROWS_AS(initial_state(VectorC::Zero(3), xi), Error);
}

TEST_CASE("clock profile ratio") {
    double ds = 0.01, sigma = 0.1;
    VectorC g = initial_clock_profile(6, ds, sigma);
    long long k1 = (long long)std::llround(sigma / ds);
    long long k2 = (long long)std::llround(2.0 * sigma / ds);
    CHECK(std::abs(g(0)) / std::abs(g(k1)) == doctest::Approx(std::exp(0.25)).epsilon(1e-12));
    CHECK(std::abs(g(0)) / std::abs(g(k2)) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("chebyshev propagator matches the dense exponential") {
    MatrixC K = random_matrix(64, 3.0);
    K = ((K + K.adjoint()) / 2.0).eval();
    std::normal_distribution<double> G;
    VectorC psi(64);
    for (int i = 0; i < 64; ++i) psi(i) = cplx(G(rng), G(rng));
    psi.normalize();
    for (double t : {0.0, 0.7, 2.0, -1.3}) {
        VectorC got = chebyshev_expi_apply(sparse_of(K), t, psi);
        VectorC want = dense_expm(cplx(0.0, 1.0) * K, t) * psi;
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("recovery with no dynamics returns the initial vector") {
    XiGrid xi{8, 12.0};
    std::normal_distribution<double> G;
    VectorC w0(4);
    for (int i = 0; i < 4; ++i) w0(i) = cplx(G(rng), G(rng));
    SolutionRecovery rec(xi, w0);
    VectorC psi0 = initial_state(w0, xi);
    auto r = rec.recover(psi0);
    CHECK(direction_fidelity(r.u, w0) > 1.0 - 1e-10);
    CHECK((r.u - w0).cwiseAbs().maxCoeff() < 1e-8); // calibration makes it exact here
    CHECK(r.success_prob > 0.0);
}

TEST_CASE("schrodingerisation soundness for random non-Hermitian generators") {
    XiGrid xi{8, 12.0};
    for (int dim : {2, 5, 8}) {
        MatrixC S = random_matrix(dim, 1.0);
        auto [s1, s2] = split_hermitian(sparse_of(S));
        SparseC H = assemble_H(s1, s2, xi);
        std::normal_distribution<double> G;
        VectorC w0(dim);
        for (int i = 0; i < dim; ++i) w0(i) = cplx(G(rng), G(rng));
        w0.normalize();
        RecoveryOptions opt;
        opt.xi_star = 1.5;
        opt.window_points = 3;
        SolutionRecovery rec(xi, w0, opt);
        VectorC psi = initial_state(w0, xi);
        for (double t : {0.5, 1.0}) {
            VectorC psit = chebyshev_expi_apply(H, t, psi);
            auto r = rec.recover(psit);
            VectorC want = dense_expm(MatrixC(S), t) * w0;
            CHECK(direction_fidelity(r.u, want) >= 1.0 - 1e-4);
        }
    }
}

TEST_CASE("recovered inhomogeneous ODE solution, N = 4") {
    const int N = 4;
    MatrixC A = random_matrix(N, 0.8);
    std::normal_distribution<double> G;
    VectorC v(N), u0(N);
    for (int i = 0; i < N; ++i) {
        v(i) = cplx(G(rng), G(rng)) * 0.3;
        u0(i) = cplx(G(rng), G(rng));
    }
    u0.normalize();

    DiscretizedSystem sys;
    sys.n = 2;
    sys.A = sparse_of(A);
    sys.v = v;
    auto hom = homogenize(sys, HomogenizeMode::General);

    XiGrid xi{10, 64.0};
    VectorC w0(2 * N);
    w0 << u0, hom.companion;
    RecoveryOptions opt;
    opt.project_top_half = true;
    opt.xi_star = 1.0;
    SolutionRecovery rec(xi, w0, opt);
    SparseC H;
    {
        auto [s1, s2] = split_hermitian(hom.S);
        H = assemble_H(s1, s2, xi);
    }
    VectorC psi = initial_state(w0, xi);
    double t = 0.4;
    VectorC psit = chebyshev_expi_apply(H, t, psi);
    auto r = rec.recover(psit);
    VectorC want = inhomogeneous_solution(MatrixC(sys.A), v, u0, t);
    CHECK(direction_fidelity(r.u, want) >= 1.0 - 1e-6);
}

TEST_CASE("success probability shrinks with the window") {
    XiGrid xi{8, 12.0};
    MatrixC S = random_matrix(4, 1.0);
    auto [s1, s2] = split_hermitian(sparse_of(S));
    SparseC H = assemble_H(s1, s2, xi);
    VectorC w0(4);
    w0 << 1.0, -0.5, cplx(0.0, 0.7), 0.2;
    w0.normalize();
    VectorC psit = chebyshev_expi_apply(H, 0.8, initial_state(w0, xi));
    double prev = -1.0;
    for (int w : {7, 5, 3, 1}) {
        RecoveryOptions opt;
        opt.window_points = w;
        SolutionRecovery rec(xi, w0, opt);
        auto r = rec.recover(psit);
        if (prev >= 0.0) CHECK(r.success_prob < prev);
        prev = r.success_prob;
    }
}

TEST_CASE("recovery rejects vanishing postselection probability") {
    XiGrid xi{5, 6.0};
    VectorC w0(2);
    w0 << 1.0, 0.5;
    SolutionRecovery rec(xi, w0);
    // All weight on a single xi point: the conjugate register is flat but tiny
    // per column; use a state orthogonal to every window column instead.
    VectorC psi = VectorC::Zero(2 * xi.size());
    psi(0) = 1.0; // j=0, k=0 only
    RecoveryOptions opt;
    opt.min_prob = 0.9; // unreachably high floor
    SolutionRecovery strict(xi, w0, opt);
    CHECK_THROWS_AS(strict.recover(psi), Error);
}

TEST_CASE("clock-extended evolution tracks a time-dependent generator") {
    // H(s) = (1 + 0.5 sin(pi s)) sigma_z, commuting family:
    // u(t) = exp(i phi(t) sigma_z) u0 with phi = t + (1 - cos(pi t))/(2 pi).
    const int n_s = 7;
    const double period = 2.0;
    const double ds = period / double(1 << n_s);
    const double sigma = 2.0 * ds;
    MatrixC Z = MatrixC::Zero(2, 2);
    Z(0, 0) = 1.0;
    Z(1, 1) = -1.0;
    auto H_phys = [&](double s) { return sparse_of(((1.0 + 0.5 * std::sin(pi * s)) * Z).eval()); };
    // The clock peak drifts toward decreasing s (periodic wrap), so the block
    // at grid point s holds the physical generator at period - s.
    auto sampler = [&](double s) { return H_phys(std::min(s, period - s)); };
    SparseC Hp = clock_extend(sampler, n_s, ds);

    VectorC u0(2);
    u0 << std::sqrt(0.3), cplx(0.0, std::sqrt(0.7));
    VectorC g = initial_clock_profile(n_s, ds, sigma);
    long long Ms = 1 << n_s;
    VectorC psi(Ms * 2);
    for (long long k = 0; k < Ms; ++k)
        for (int d = 0; d < 2; ++d) psi(k * 2 + d) = g(k) * u0(d);
    psi.normalize();

    double t = 0.5;
    VectorC psit = chebyshev_expi_apply(Hp, t, psi);
    long long kstar = (long long)std::llround((period - t) / ds) % Ms;
    VectorC slice = psit.segment(kstar * 2, 2);
    double phi = t + (1.0 - std::cos(pi * t)) / (2.0 * pi);
    VectorC want(2);
    want(0) = std::polar(1.0, phi) * u0(0);
    want(1) = std::polar(1.0, -phi) * u0(1);
    slice.normalize();
    cplx ov = slice.dot(want);
    slice *= ov / std::abs(ov);
    CHECK((slice - want).cwiseAbs().maxCoeff() < 1e-2);
}
