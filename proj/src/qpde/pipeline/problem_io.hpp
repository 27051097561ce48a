#pragma once

#include <string>

#include "qpde/fd/stencil.hpp"
#include "qpde/model/problem.hpp"

namespace qpde {

/// Per-term finite-difference choice; the derivative order comes from the term.
struct StencilChoice {
    StencilKind kind = StencilKind::Central;
    int accuracy = 4;
};

enum class RunMode { Matrix, Circuit };

struct RunConfig {
    int n = 5;
    int n_xi = 8;
    double L_xi = 12.0;
    std::vector<double> times{1.0};
    double epsilon = 1e-8;
    RunMode mode = RunMode::Matrix;
    std::string homogenize = "identity"; // identity | general
    double xi_star = 1.5;
    int window = 3;
    std::vector<StencilChoice> stencils; // one per term; filled with defaults
    std::string out; // empty = no files written
};

struct ProblemFile {
    PdeProblem1D problem;
    RunConfig run;
};

/// Line-oriented sections [domain], [term], [source], [boundary], [initial],
/// [grid], [run]. Piecewise polynomials are `segment <lo> <hi> <c0> <c1> ...`
/// lines; the named initial profile is `builtin sin_half`. '#' starts a
/// comment.
ProblemFile parse_problem_file(const std::string& text);
ProblemFile load_problem_file(const std::string& path);
std::string serialize_problem_file(const ProblemFile& pf);
void save_problem_file(const std::string& path, const ProblemFile& pf);

} // namespace qpde
