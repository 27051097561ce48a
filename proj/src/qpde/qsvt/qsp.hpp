#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qpde/common.hpp"

namespace qpde {

/// Coefficients c[k] of sum_k c[k] T_k(x).
struct ChebSeries {
    std::vector<double> c;

    int degree() const { return int(c.size()) - 1; }
    double eval(double x) const;
    double max_abs(int samples = 4096) const;
    bool has_parity(int parity, double tol = 1e-12) const; // parity 0 even, 1 odd
};

/// Interpolates f at the degree+1 Chebyshev points of the first kind.
ChebSeries cheb_fit(const std::function<double(double)>& f, int degree);

/// J_0..J_nmax at x by downward Miller recursion.
std::vector<double> bessel_j_list(int nmax, double x);

/// Minimal g with 1.07/sqrt(g) * (alpha_t * e / (2g))^g <= epsilon.
int truncation_degree(double alpha_t, double epsilon);

enum class QspConvention {
    Wx,        // signal W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]], phases e^{i phi Z}
    Reflection // signal M(x) = [[x, sqrt(1-x^2)], [sqrt(1-x^2), -x]], phases e^{i phi Z}
};

struct PhaseSequence {
    std::vector<double> phases; // length degree+1
    int parity = 0;
    QspConvention convention = QspConvention::Wx;
    double residual = 0.0;
};

/// <0| e^{i phi_0 Z} prod_k [ S(x) e^{i phi_k Z} ] |0> for the convention's
/// signal S.
cplx qsp_response(const std::vector<double>& phases, double x, QspConvention conv);

/// Finds symmetric phases whose response real part equals the definite-parity
/// polynomial `target` (Chebyshev basis, sup norm <= 1/2 recommended, < 1
/// required). Deterministic homotopy from T_d; throws on non-convergence.
PhaseSequence solve_qsp_phases(const ChebSeries& target, int degree, QspConvention conv,
                               double tol = 1e-12);

/// Same, consulting/filling the on-disk cache; `key` must uniquely describe
/// the target (the cache also keys on degree, convention and tol).
PhaseSequence solve_qsp_phases_cached(const std::string& key, const ChebSeries& target,
                                      int degree, QspConvention conv, double tol = 1e-12);

} // namespace qpde
