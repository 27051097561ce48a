#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "qpde/qsvt/qsp.hpp"

using namespace qpde;

namespace {

// Jacobi-Anger series for cos(tau x) and sin(tau x), scaled by `scale`.
ChebSeries cos_series(double tau, int degree, double scale) {
    auto J = bessel_j_list(degree + 1, tau);
    ChebSeries s;
    s.c.assign(degree + 1, 0.0);
    s.c[0] = scale * J[0];
    for (int k = 2; k <= degree; k += 2)
        s.c[k] = scale * 2.0 * ((k / 2) % 2 ? -1.0 : 1.0) * J[k];
    return s;
}

ChebSeries sin_series(double tau, int degree, double scale) {
    auto J = bessel_j_list(degree + 1, tau);
    ChebSeries s;
    s.c.assign(degree + 1, 0.0);
    for (int k = 1; k <= degree; k += 2)
        s.c[k] = scale * 2.0 * (((k - 1) / 2) % 2 ? -1.0 : 1.0) * J[k];
    return s;
}

double dense_gap(const PhaseSequence& ps, const ChebSeries& target) {
    int Q = int(ps.phases.size()) - 1;
    double worst = 0.0;
    for (int i = 0; i < 2 * Q + 1; ++i) {
        double x = std::cos(pi * (i + 0.5) / (2 * Q + 1));
        worst = std::max(worst, std::abs(qsp_response(ps.phases, x, ps.convention).real() -
                                         target.eval(x)));
    }
    return worst;
}

} // namespace

TEST_CASE("chebyshev series eval and parity") {
    ChebSeries s;
    s.c = {0.25, 0.0, -0.5, 0.0, 0.125}; // even
    for (double x : {-0.9, -0.3, 0.0, 0.4, 1.0}) {
        double t2 = 2 * x * x - 1;
        double t4 = 8 * x * x * x * x - 8 * x * x + 1;
        CHECK(s.eval(x) == doctest::Approx(0.25 - 0.5 * t2 + 0.125 * t4).epsilon(1e-13));
    }
    CHECK(s.has_parity(0));
    CHECK_FALSE(s.has_parity(1));
    CHECK(s.max_abs() == doctest::Approx(0.875).epsilon(1e-10));
}

TEST_CASE("cheb_fit reproduces smooth functions and Jacobi-Anger") {
    auto f = [](double x) { return std::cos(1.7 * x); };
    ChebSeries s = cheb_fit(f, 24);
    for (double x : {-0.95, -0.5, 0.0, 0.3, 0.99})
        CHECK(s.eval(x) == doctest::Approx(f(x)).epsilon(1e-14));
    ChebSeries ja = cos_series(1.7, 24, 1.0);
    for (int k = 0; k <= 24; ++k)
        CHECK(s.c[k] == doctest::Approx(ja.c[k]).epsilon(1e-12));
}

TEST_CASE("bessel list matches the standard library") {
    for (double x : {0.0, 0.1, 1.0, 3.0, 7.5, 20.0}) {
        auto J = bessel_j_list(30, x);
        for (int k = 0; k <= 30; ++k)
            CHECK(J[k] == doctest::Approx(std::cyl_bessel_j(double(k), x)).epsilon(1e-11));
    }
    auto Jn = bessel_j_list(8, -3.0);
    for (int k = 0; k <= 8; ++k) {
        double ref = std::cyl_bessel_j(double(k), 3.0) * ((k % 2) ? -1.0 : 1.0);
        CHECK(Jn[k] == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("truncation degree frozen value and monotonicity") {
    CHECK(truncation_degree(2.0, 1e-6) == 10);
    for (double at : {0.5, 1.0, 2.0, 5.0})
        CHECK(truncation_degree(at, 1e-8) >= truncation_degree(at, 1e-6));
    for (double eps : {1e-4, 1e-6, 1e-10})
        for (double at : {0.3, 1.0, 4.0})
            CHECK(truncation_degree(2.0 * at, eps) >= truncation_degree(at, eps));
}

TEST_CASE("truncation degree scaling fit") {
    for (double at : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
        for (double eps : {1e-3, 1e-6, 1e-10}) {
            double li = std::log(1.0 / eps);
            double model = at + li / std::log(std::exp(1.0) + li / at);
            double g = truncation_degree(at, eps);
            CHECK(g >= model / 2.0);
            CHECK(g <= model * 2.0);
        }
}

TEST_CASE("zero phases give the Chebyshev polynomial in the Wx convention") {
    for (int d : {1, 3, 6}) {
        std::vector<double> ph(d + 1, 0.0);
        for (double x : {-0.8, -0.2, 0.5, 0.95}) {
            double td = std::cos(d * std::acos(x));
            CHECK(qsp_response(ph, x, QspConvention::Wx).real() ==
                  doctest::Approx(td).epsilon(1e-12));
        }
    }
}

TEST_CASE("degree zero solve") {
    ChebSeries flat;
    flat.c = {0.5};
    PhaseSequence ps = solve_qsp_phases(flat, 0, QspConvention::Wx);
    REQUIRE(ps.phases.size() == 1);
    for (double x : {-0.7, 0.0, 0.9})
        CHECK(qsp_response(ps.phases, x, QspConvention::Wx).real() ==
              doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("phase solve for the cos target at the frozen degree") {
    int g = truncation_degree(2.0, 1e-6);
    ChebSeries target = cos_series(2.0, g, 0.5);
    PhaseSequence ps = solve_qsp_phases(target, g, QspConvention::Wx);
    CHECK(ps.parity == 0);
    CHECK(ps.residual <= 1e-12);
    CHECK(dense_gap(ps, target) <= 1e-12);
    // symmetric phases
    for (int k = 0; k <= g; ++k)
        CHECK(ps.phases[k] == doctest::Approx(ps.phases[g - k]).epsilon(1e-12));
    // even response
    for (double x : {0.2, 0.6, 0.9}) {
        double p = qsp_response(ps.phases, x, ps.convention).real();
        double m = qsp_response(ps.phases, -x, ps.convention).real();
        CHECK(p == doctest::Approx(m).epsilon(1e-12));
    }
}

TEST_CASE("phase solve for the sin target, odd parity") {
    ChebSeries target = sin_series(2.0, 9, 0.5);
    PhaseSequence ps = solve_qsp_phases(target, 9, QspConvention::Wx);
    CHECK(ps.parity == 1);
    CHECK(dense_gap(ps, target) <= 1e-12);
    for (double x : {0.15, 0.55, 0.85}) {
        double p = qsp_response(ps.phases, x, ps.convention).real();
        double m = qsp_response(ps.phases, -x, ps.convention).real();
        CHECK(p == doctest::Approx(-m).epsilon(1e-12));
    }
}

TEST_CASE("alpha t = 1 at the 1e-8 budget") {
    int g = truncation_degree(1.0, 1e-8);
    ChebSeries ce = cos_series(1.0, g, 0.5);
    ChebSeries co = sin_series(1.0, g - 1, 0.5);
    PhaseSequence pe = solve_qsp_phases(ce, g, QspConvention::Wx);
    PhaseSequence po = solve_qsp_phases(co, g - 1, QspConvention::Wx);
    CHECK(dense_gap(pe, ce) <= 1e-8);
    CHECK(dense_gap(po, co) <= 1e-8);
}

TEST_CASE("reflection convention conversion") {
    ChebSeries te = cos_series(1.3, 8, 0.5);
    PhaseSequence ps = solve_qsp_phases(te, 8, QspConvention::Reflection);
    CHECK(ps.convention == QspConvention::Reflection);
    CHECK(dense_gap(ps, te) <= 1e-12);
    ChebSeries to = sin_series(1.3, 7, 0.5);
    PhaseSequence po = solve_qsp_phases(to, 7, QspConvention::Reflection);
    CHECK(dense_gap(po, to) <= 1e-12);
}

TEST_CASE("solver rejects ill-posed targets") {
    ChebSeries wrong_parity;
    wrong_parity.c = {0.0, 0.4}; // odd, but degree below asks even
    CHECK_THROWS(solve_qsp_phases(wrong_parity, 2, QspConvention::Wx));
    ChebSeries too_big;
    too_big.c = {0.0, 1.2};
    CHECK_THROWS(solve_qsp_phases(too_big, 1, QspConvention::Wx));
}

TEST_CASE("disk cache round trip") {
    auto dir = std::filesystem::temp_directory_path() / "qpde-qsp-test-cache";
    std::filesystem::remove_all(dir);
    setenv("QPDE_QSP_CACHE", dir.c_str(), 1);
    ChebSeries t = cos_series(0.8, 6, 0.5);
    PhaseSequence a = solve_qsp_phases_cached("cos@0.8", t, 6, QspConvention::Wx);
    CHECK(std::filesystem::exists(dir));
    bool any = false;
    for (auto& e : std::filesystem::directory_iterator(dir)) {
        (void)e;
        any = true;
    }
    CHECK(any);
    PhaseSequence b = solve_qsp_phases_cached("cos@0.8", t, 6, QspConvention::Wx);
    REQUIRE(a.phases.size() == b.phases.size());
    for (size_t k = 0; k < a.phases.size(); ++k)
        CHECK(a.phases[k] == doctest::Approx(b.phases[k]).epsilon(1e-15));
    unsetenv("QPDE_QSP_CACHE");
    std::filesystem::remove_all(dir);
}
