#pragma once

#include <boost/rational.hpp>
#include <vector>

#include "qpde/common.hpp"

namespace qpde {

using Rational = boost::rational<long long>;

enum class StencilKind { Backward, Forward, Central };

/// Finite-difference stencil for d^p/dx^p with exact rational weights.
/// Approximation: u^(p)(x_i) ~= (1/dx^p) * sum_m gamma[m] * u_{i+offsets[m]},
/// valid to accuracy order g (moment conditions sum gamma*m^q/q! = delta_{q,p}).
struct StencilSpec {
    StencilKind kind = StencilKind::Central;
    int p = 0;
    int g = 0; // achieved accuracy order
    std::vector<int> offsets;
    std::vector<Rational> gamma;

    double gamma_d(std::size_t m) const {
        return double(gamma[m].numerator()) / double(gamma[m].denominator());
    }
    int left_width() const { return offsets.empty() ? 0 : std::max(0, -offsets.front()); }
    int right_width() const { return offsets.empty() ? 0 : std::max(0, offsets.back()); }
};

StencilSpec build_stencil(StencilKind kind, int p, int g);

/// Exact moment sum_m gamma[m] * offsets[m]^q / q! (used by tests as well).
Rational stencil_moment(const StencilSpec& s, int q);

} // namespace qpde
