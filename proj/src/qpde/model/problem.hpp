#pragma once

#include <optional>
#include <vector>

#include "qpde/model/piecewise.hpp"

namespace qpde {

struct RobinBoundary {
    // du/dx + A1*u = A2 at x=a;  du/dx + B1*u = B2 at x=b.
    cplx A1{0.0}, A2{0.0}, B1{0.0}, B2{0.0};
};

struct DirichletBoundary {
    cplx left{0.0}, right{0.0};
};

/// Dirichlet kept as a separate kind (not a Robin limit) because assembly differs.
enum class BoundaryKind { Robin, Dirichlet };

struct Boundary {
    BoundaryKind kind = BoundaryKind::Robin;
    RobinBoundary robin;
    DirichletBoundary dirichlet;

    static Boundary make_robin(cplx A1, cplx A2, cplx B1, cplx B2) {
        Boundary b;
        b.kind = BoundaryKind::Robin;
        b.robin = {A1, A2, B1, B2};
        return b;
    }
    static Boundary make_dirichlet(cplx left, cplx right) {
        Boundary b;
        b.kind = BoundaryKind::Dirichlet;
        b.dirichlet = {left, right};
        return b;
    }
};

/// One term f_k(x) * d^p/dx^p of the spatial operator.
struct PdeTerm1D {
    int p = 0;
    PiecewisePolynomial f;
};

/// Initial data: either a piecewise polynomial or the named profile
/// sin(pi*(b - x)/(2*(b - a))) used by the reference heat experiment.
struct InitialCondition {
    enum class Kind { Piecewise, SinHalf };
    Kind kind = Kind::SinHalf;
    std::optional<PiecewisePolynomial> pw;

    std::vector<cplx> sample(const std::vector<double>& grid, double a, double b) const;
};

struct PdeProblem1D {
    double a = 0.0, b = 1.0;
    std::vector<PdeTerm1D> terms;
    std::optional<PiecewisePolynomial> source; // absent means v = 0
    Boundary boundary;
    InitialCondition initial;
};

/// Sum of separable products: f(x_1..x_d) = sum_m prod_i g_{m,i}(x_i),
/// optionally post-composed with an outer polynomial h (PET layer, L_NN = 1).
struct SeparableFunctionSpec {
    std::vector<std::vector<PiecewisePolynomial>> summands; // [m][dim]
    std::vector<double> outer; // h coefficients; empty = identity
};

struct PdeTermMultiD {
    std::vector<int> orders; // p per dimension
    SeparableFunctionSpec coef;
};

struct PdeProblemMultiD {
    int d = 1;
    std::vector<std::pair<double, double>> domains;
    std::vector<PdeTermMultiD> terms;
    std::optional<SeparableFunctionSpec> source;
    std::vector<Boundary> boundaries;
};

} // namespace qpde
