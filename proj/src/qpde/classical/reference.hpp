#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "qpde/common.hpp"

namespace qpde {

struct EulerRun {
    double dt = 0.0;
    long long steps = 0;
    bool cfl_violated = false;
    std::vector<std::pair<double, Eigen::VectorXcd>> checkpoints;
    const Eigen::VectorXcd& final_state() const { return checkpoints.back().second; }
};

struct CflInfo {
    double dx = 0.0;
    int m = 2;          // stencil derivative order
    double alpha = 0.25;
};

/// Forward Euler for du/dt = A u + v: u_{n+1} = (dt*A + I) u_n + dt*v.
/// record_times are snapshot instants (T is always recorded); dt is shrunk so
/// an integer number of steps lands on T exactly.
EulerRun forward_euler(const Eigen::SparseMatrix<cplx>& A, const Eigen::VectorXcd& v,
                       const Eigen::VectorXcd& u0, double dt, double T,
                       const std::vector<double>& record_times = {},
                       const CflInfo* cfl = nullptr);

/// e^{M t} by Pade-13 scaling and squaring. Guarded to dim <= 4096.
Eigen::MatrixXcd dense_expm(const Eigen::MatrixXcd& M, double t);

/// u(t) = e^{At} u0 + int_0^t e^{A(t-s)} v ds via the augmented exponential.
Eigen::VectorXcd inhomogeneous_solution(const Eigen::MatrixXcd& A,
                                        const Eigen::VectorXcd& v,
                                        const Eigen::VectorXcd& u0, double t);

struct FlopReport {
    double explicit_flops = 0.0;
    double implicit_flops = 0.0;
    std::string text;
};

/// Appendix-style classical cost estimates: explicit O(T N^{d+m} m),
/// implicit O(T N^{d+g}).
FlopReport flop_estimate(long long N, int d, int m, int g, double T);

} // namespace qpde
