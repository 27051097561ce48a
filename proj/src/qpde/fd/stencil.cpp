#include "qpde/fd/stencil.hpp"

namespace qpde {

namespace {

Rational ipow(long long base, int e) {
    Rational r(1);
    for (int k = 0; k < e; ++k) r *= Rational(base);
    return r;
}

Rational factorial(int q) {
    Rational r(1);
    for (int k = 2; k <= q; ++k) r *= Rational(k);
    return r;
}

/// Solve the square rational system M x = rhs by Gaussian elimination.
std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> M,
                                     std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && M[piv][col] == Rational(0)) ++piv;
        if (piv == n) throw Error("discretizer", "singular moment system");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || M[r][col] == Rational(0)) continue;
            Rational f = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
    return x;
}

std::vector<int> make_offsets(StencilKind kind, int points) {
    std::vector<int> off(points);
    for (int m = 0; m < points; ++m) {
        switch (kind) {
        case StencilKind::Forward: off[m] = m; break;
        case StencilKind::Backward: off[m] = m - (points - 1); break;
        case StencilKind::Central: off[m] = m - (points - 1) / 2; break;
        }
    }
    return off;
}

} // namespace

Rational stencil_moment(const StencilSpec& s, int q) {
    Rational sum(0);
    for (std::size_t m = 0; m < s.offsets.size(); ++m)
        sum += s.gamma[m] * ipow(s.offsets[m], q) / factorial(q);
    return sum;
}

StencilSpec build_stencil(StencilKind kind, int p, int g) {
    if (p < 0 || g < 1) throw Error("discretizer", "invalid stencil request");
    const int max_points = 14;
    for (int points = p + 1; points <= max_points; ++points) {
        if (kind == StencilKind::Central && points % 2 == 0) continue;
        StencilSpec s;
        s.kind = kind;
        s.p = p;
        s.offsets = make_offsets(kind, points);

        std::vector<std::vector<Rational>> M(points, std::vector<Rational>(points));
        std::vector<Rational> rhs(points, Rational(0));
        for (int q = 0; q < points; ++q) {
            for (int m = 0; m < points; ++m)
                M[q][m] = ipow(s.offsets[m], q) / factorial(q);
            if (q == p) rhs[q] = Rational(1);
        }
        s.gamma = solve_rational(std::move(M), std::move(rhs));

        // Achieved order: first higher moment that fails to vanish.
        int achieved = points - p;
        for (int q = points; q <= points + 6; ++q) {
            if (stencil_moment(s, q) != Rational(0)) break;
            achieved = q + 1 - p;
        }
        s.g = achieved;
        if (achieved >= g) return s;
    }
    throw Error("discretizer", "no stencil of requested order within the catalogue");
}

} // namespace qpde
