#pragma once

#include <vector>

#include "qpde/common.hpp"

namespace qpde {

/// One polynomial piece on [lo, hi). Coefficients in monomial order: c0 + c1*x + ...
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<cplx> coef;
};

/// Piecewise polynomial on [a, b]. Segments tile the domain exactly; evaluation
/// uses the half-open convention [lo, hi), with the last segment closed at b.
class PiecewisePolynomial {
public:
    PiecewisePolynomial(double a, double b, std::vector<Segment> segments);

    static PiecewisePolynomial constant(double a, double b, cplx c);
    static PiecewisePolynomial single(double a, double b, std::vector<cplx> coef);

    cplx evaluate(double x) const;
    int segment_index(double x) const;

    /// Upper bound on max |f| over the domain: dense per-segment sampling times
    /// a small safety factor, so the bound dominates any downstream grid.
    double max_abs() const;

    bool is_real() const;
    int max_degree() const;

    double a() const { return a_; }
    double b() const { return b_; }
    const std::vector<Segment>& segments() const { return segs_; }

private:
    double a_, b_;
    std::vector<Segment> segs_;
};

cplx eval_poly(const std::vector<cplx>& coef, double x);

} // namespace qpde
