#pragma once

#include <Eigen/Dense>

#include "qpde/pipeline/problem_io.hpp"

namespace qpde {

struct StageMetrics {
    double T = 0.0;
    double fidelity = 0.0;
    double mse = 0.0;
    double success_prob = 0.0;
};

struct RunArtifacts {
    std::vector<double> grid;
    std::vector<StageMetrics> stages;
    std::vector<Eigen::VectorXcd> u_quantum;
    std::vector<Eigen::VectorXcd> u_euler;
    std::string metrics_text;
    std::string resources_text;
};

/// Full pipeline: discretize, homogenize, schrodingerize, evolve (matrix or
/// circuit mode), recover, compare against forward Euler. When run.out is
/// nonempty, writes solution_T*.csv, metrics.txt and resources.txt there.
RunArtifacts run(const ProblemFile& pf);

/// Resource report without evolving: per-term and full-Hamiltonian encoding
/// counts, QSVT call counts per requested time, and the classical flop
/// comparison.
std::string resources_report_text(const ProblemFile& pf);

/// Discretization summary: grid, operator shape, boundary rows, CFL step.
std::string discretize_report_text(const ProblemFile& pf);

/// Resource record for the full Hamiltonian block-encoding alone.
std::string encode_report_text(const ProblemFile& pf);

} // namespace qpde
