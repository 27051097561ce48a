#include "qpde/model/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace qpde {

cplx eval_poly(const std::vector<cplx>& coef, double x) {
    cplx v = 0.0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) v = v * x + *it;
    return v;
}

PiecewisePolynomial::PiecewisePolynomial(double a, double b, std::vector<Segment> segments)
    : a_(a), b_(b), segs_(std::move(segments)) {
    if (!(a < b)) throw Error("pde-model", "domain requires a < b");
    if (segs_.empty()) throw Error("pde-model", "no segments");
    const double tol = 1e-12 * (std::abs(a) + std::abs(b) + 1.0);
    if (std::abs(segs_.front().lo - a) > tol || std::abs(segs_.back().hi - b) > tol)
        throw Error("pde-model", "segments do not tile [a,b]");
    for (std::size_t g = 0; g < segs_.size(); ++g) {
        if (!(segs_[g].lo < segs_[g].hi))
            throw Error("pde-model", "segment breakpoints not strictly increasing");
        if (g > 0 && std::abs(segs_[g].lo - segs_[g - 1].hi) > tol)
            throw Error("pde-model", "gap or overlap between segments");
        if (segs_[g].coef.empty())
            throw Error("pde-model", "segment without coefficients");
        for (const cplx& c : segs_[g].coef)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw Error("pde-model", "non-finite coefficient");
    }
}

PiecewisePolynomial PiecewisePolynomial::constant(double a, double b, cplx c) {
    return PiecewisePolynomial(a, b, {Segment{a, b, {c}}});
}

PiecewisePolynomial PiecewisePolynomial::single(double a, double b, std::vector<cplx> coef) {
    return PiecewisePolynomial(a, b, {Segment{a, b, std::move(coef)}});
}

int PiecewisePolynomial::segment_index(double x) const {
    const double tol = 1e-12 * (std::abs(a_) + std::abs(b_) + 1.0);
    if (x < a_ - tol || x > b_ + tol)
        throw Error("pde-model", "evaluation point outside domain");
    x = std::clamp(x, a_, b_);
    for (std::size_t g = 0; g + 1 < segs_.size(); ++g)
        if (x < segs_[g].hi) return int(g);
    return int(segs_.size()) - 1;
}

cplx PiecewisePolynomial::evaluate(double x) const {
    return eval_poly(segs_[segment_index(x)].coef, x);
}

double PiecewisePolynomial::max_abs() const {
    double m = 0.0;
    const int samples = 8192;
    for (const Segment& s : segs_) {
        for (int k = 0; k <= samples; ++k) {
            double x = s.lo + (s.hi - s.lo) * double(k) / samples;
            m = std::max(m, std::abs(eval_poly(s.coef, x)));
        }
    }
    return m * 1.005;
}

bool PiecewisePolynomial::is_real() const {
    for (const Segment& s : segs_)
        for (const cplx& c : s.coef)
            if (c.imag() != 0.0) return false;
    return true;
}

int PiecewisePolynomial::max_degree() const {
    int d = 0;
    for (const Segment& s : segs_) d = std::max(d, int(s.coef.size()) - 1);
    return d;
}

} // namespace qpde
