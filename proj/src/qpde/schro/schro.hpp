#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "qpde/common.hpp"
#include "qpde/fd/discretize.hpp"

namespace qpde {

/// Auxiliary coordinate register: 2^n_xi points x[k] = -L + k*dxi with
/// dxi = 2L/(2^n_xi - 1), so the grid is symmetric up to the half-step offset.
struct XiGrid {
    int n_xi = 0;
    double L = 0.0;

    long long size() const { return 1LL << n_xi; }
    double dxi() const { return 2.0 * L / double(size() - 1); }
    double point(long long k) const { return -L + double(k) * dxi(); }
    Eigen::VectorXd points() const;
};

std::pair<SparseC, SparseC> split_hermitian(const SparseC& S);

/// H = S1 (x) diag(x_xi) + S2 (x) 1, with the xi index fastest.
SparseC assemble_H(const SparseC& S1, const SparseC& S2, const XiGrid& xi);

/// Periodic central-difference momentum matrix: row j couples j+-1 (mod 2^n_s)
/// with entries -+ i/(2 ds).
SparseC clock_momentum(int n_s, double ds);

/// H' = p_s (x) 1 + blockdiag_k H(x_s[k]) over the clock grid x_s[k] = k*ds,
/// clock index slowest.
SparseC clock_extend(const std::function<SparseC(double)>& H_at, int n_s, double ds);

/// psi(0) = normalize(w0 (x) p(x_xi)) with p(x) = 2/(1+x^2); xi index fastest.
Eigen::VectorXcd initial_state(const Eigen::VectorXcd& w0, const XiGrid& xi);

/// Normalized clock profile (1/(2 pi sigma^2))^{1/4} exp(-x^2/(4 sigma^2))
/// sampled at x_s[k] = k*ds, measuring x as the periodic distance from s = 0.
Eigen::VectorXcd initial_clock_profile(int n_s, double ds, double sigma);

struct RecoveryOptions {
    double xi_star = -1.0;   // < 0 means the default L/6
    int window_points = 1;   // conjugate-grid points centered on xi_star
    double min_prob = 1e-12; // postselection floor
    bool project_top_half = false; // drop the homogenization half of the data index
};

struct RecoveryResult {
    Eigen::VectorXcd u;
    double success_prob = 0.0;
};

/// Reverse-Fourier postselection of the xi register. The calibration constants
/// relating postselected amplitudes to u(t) are measured on psi(0) against w0
/// rather than taken from a closed form.
class SolutionRecovery {
  public:
    SolutionRecovery(const XiGrid& xi, const Eigen::VectorXcd& w0,
                     const RecoveryOptions& opt = {});

    RecoveryResult recover(const Eigen::VectorXcd& psi_final) const;

    const std::vector<long long>& window_indices() const { return window_; }
    double conjugate_spacing() const { return dconj_; }

  private:
    XiGrid xi_;
    RecoveryOptions opt_;
    long long data_dim_ = 0;
    double dconj_ = 0.0;
    std::vector<long long> window_;
    std::vector<cplx> calib_;

    Eigen::MatrixXcd transform(const Eigen::VectorXcd& psi) const;
};

/// e^{iHt} psi for sparse Hermitian H via the Chebyshev expansion with Bessel
/// coefficients; spectral radius bounded by Gershgorin discs.
Eigen::VectorXcd chebyshev_expi_apply(const SparseC& H, double t,
                                      const Eigen::VectorXcd& psi, double tol = 1e-12);

double gershgorin_bound(const SparseC& H);

} // namespace qpde
