#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>

#include "qpde/fd/stencil.hpp"
#include "qpde/model/problem.hpp"

namespace qpde {

using SparseC = Eigen::SparseMatrix<cplx>;
using VectorC = Eigen::VectorXcd;
using MatrixC = Eigen::MatrixXcd;

/// Banded description of the stencil matrix D (coefficient f not included):
/// bulk rows follow D(i, offset + i) = value; rows below K1 / above K2 deviate
/// and are stored densely together with their constant corrections.
struct BandedProfile {
    struct Bulk {
        int offset; // signed column offset; column index is (offset + i) mod N
        cplx value;
    };
    std::vector<Bulk> bulk; // sorted by offset; index s = 0..kappa-1
    std::map<int, std::vector<std::pair<int, cplx>>> boundary_rows; // row -> (col, D value)
    std::map<int, cplx> boundary_correction; // row -> constant term (before f)
    int K1 = 0, K2 = 0;

    int kappa() const { return int(bulk.size()); }
};

struct AssembledTerm {
    SparseC A;          // diag(f) * D with ghost elimination applied
    VectorC vprime;     // boundary corrections, f folded in
    BandedProfile profile;
    PiecewisePolynomial f;
    int p = 0;
};

struct DiscretizedSystem {
    int n = 0;
    double dx = 0.0;
    std::vector<double> grid;
    SparseC A;
    VectorC v; // v(x_i) + sum_k v'_k(x_i)
    std::vector<AssembledTerm> terms;
};

AssembledTerm assemble_term(const StencilSpec& stencil, const PiecewisePolynomial& f,
                            const Boundary& boundary, int n, double a, double b);

DiscretizedSystem assemble_system(const PdeProblem1D& problem,
                                  const std::vector<StencilSpec>& stencils, int n);

enum class HomogenizeMode { General, Identity };

struct HomogenizedSystem {
    SparseC S;          // 2N x 2N, [[A, B], [0, 0]]
    VectorC companion;  // lower half of the initial vector w0 = (u0; companion)
};

HomogenizedSystem homogenize(const DiscretizedSystem& system, HomogenizeMode mode);

} // namespace qpde
