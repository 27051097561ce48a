#include "qpde/model/problem.hpp"

#include <cmath>

namespace qpde {

std::vector<cplx> InitialCondition::sample(const std::vector<double>& grid, double a,
                                           double b) const {
    std::vector<cplx> u(grid.size());
    if (kind == Kind::SinHalf) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            u[i] = std::sin(pi * (b - grid[i]) / (2.0 * (b - a)));
    } else {
        if (!pw) throw Error("pde-model", "piecewise initial condition missing data");
        for (std::size_t i = 0; i < grid.size(); ++i) u[i] = pw->evaluate(grid[i]);
    }
    return u;
}

} // namespace qpde
