#include "qpde/qsvt/qsp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qpde {

double ChebSeries::eval(double x) const {
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = int(c.size()) - 1; k >= 1; --k) {
        double b0 = c[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

double ChebSeries::max_abs(int samples) const {
    double m = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double x = std::cos(pi * double(i) / double(samples));
        m = std::max(m, std::abs(eval(x)));
    }
    return m;
}

bool ChebSeries::has_parity(int parity, double tol) const {
    for (size_t k = 0; k < c.size(); ++k)
        if (int(k % 2) != parity && std::abs(c[k]) > tol) return false;
    return true;
}

ChebSeries cheb_fit(const std::function<double(double)>& f, int degree) {
    int N = degree + 1;
    std::vector<double> fx(N);
    for (int j = 0; j < N; ++j) fx[j] = f(std::cos(pi * (j + 0.5) / N));
    ChebSeries s;
    s.c.resize(N);
    for (int k = 0; k < N; ++k) {
        double acc = 0.0;
        for (int j = 0; j < N; ++j) acc += fx[j] * std::cos(k * pi * (j + 0.5) / N);
        s.c[k] = acc * (k == 0 ? 1.0 : 2.0) / N;
    }
    return s;
}

std::vector<double> bessel_j_list(int nmax, double x) {
    std::vector<double> out(nmax + 1, 0.0);
    double ax = std::abs(x);
    if (ax < 1e-300) {
        out[0] = 1.0;
        return out;
    }
    int start = nmax + 16 + int(std::ceil(ax + 10.0 * std::sqrt(ax + 1.0)));
    if (start % 2) ++start;
    std::vector<double> f(start + 2, 0.0);
    f[start + 1] = 0.0;
    f[start] = 1e-160;
    for (int k = start; k >= 1; --k) {
        f[k - 1] = (2.0 * k / ax) * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e120) {
            for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-120;
        }
    }
    // normalization: J_0 + 2 sum_{k even > 0} J_k = 1
    double norm = f[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * f[k];
    for (int k = 0; k <= nmax && k <= start; ++k) {
        double v = f[k] / norm;
        if (x < 0.0 && (k & 1)) v = -v;
        out[k] = v;
    }
    return out;
}

int truncation_degree(double alpha_t, double epsilon) {
    if (!(alpha_t > 0.0) || !(epsilon > 0.0) || epsilon >= 1.0)
        throw Error("qsvt-engine", "truncation_degree domain error");
    double le = std::log(epsilon);
    for (int g = 1; g < 1000000; ++g) {
        double lhs = std::log(1.07) - 0.5 * std::log(double(g)) +
                     double(g) * std::log(alpha_t * std::exp(1.0) / (2.0 * double(g)));
        if (lhs <= le) return g;
    }
    throw Error("qsvt-engine", "truncation_degree did not terminate");
}

namespace {

using M2d = Eigen::Matrix2cd;

M2d signal(double x, QspConvention conv) {
    double r = std::sqrt(std::max(0.0, 1.0 - x * x));
    M2d m;
    if (conv == QspConvention::Wx)
        m << cplx(x, 0.0), cplx(0.0, r), cplx(0.0, r), cplx(x, 0.0);
    else
        m << cplx(x, 0.0), cplx(r, 0.0), cplx(r, 0.0), cplx(-x, 0.0);
    return m;
}

} // namespace

cplx qsp_response(const std::vector<double>& phases, double x, QspConvention conv) {
    if (phases.empty()) throw Error("qsvt-engine", "empty phase list");
    M2d u = M2d::Identity();
    u(0, 0) = std::polar(1.0, phases[0]);
    u(1, 1) = std::polar(1.0, -phases[0]);
    M2d w = signal(x, conv);
    for (size_t k = 1; k < phases.size(); ++k) {
        M2d p;
        p << std::polar(1.0, phases[k]), 0.0, 0.0, std::polar(1.0, -phases[k]);
        u = u * w * p;
    }
    return u(0, 0);
}

namespace {

std::vector<double> phases_from_params(const Eigen::VectorXd& p, int degree) {
    std::vector<double> ph(degree + 1);
    for (int k = 0; k <= degree; ++k) ph[k] = p(std::min(k, degree - k));
    return ph;
}

Eigen::VectorXd residual_at(const Eigen::VectorXd& p, int degree, QspConvention conv,
                            const std::vector<double>& nodes, const ChebSeries& target) {
    std::vector<double> ph = phases_from_params(p, degree);
    Eigen::VectorXd r(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        r(i) = qsp_response(ph, nodes[i], conv).real() - target.eval(nodes[i]);
    return r;
}

bool newton_solve(Eigen::VectorXd& p, int degree, QspConvention conv,
                  const std::vector<double>& nodes, const ChebSeries& target,
                  double tol, int max_iter) {
    int M = int(p.size());
    Eigen::VectorXd r = residual_at(p, degree, conv, nodes, target);
    for (int it = 0; it < max_iter; ++it) {
        if (r.cwiseAbs().maxCoeff() <= tol) return true;
        Eigen::MatrixXd J(M, M);
        const double h = 1e-7;
        for (int j = 0; j < M; ++j) {
            Eigen::VectorXd q = p;
            q(j) += h;
            J.col(j) = (residual_at(q, degree, conv, nodes, target) - r) / h;
        }
        Eigen::VectorXd step = J.partialPivLu().solve(-r);
        double alpha = 1.0;
        bool accepted = false;
        double rn = r.norm();
        while (alpha >= 1e-4) {
            Eigen::VectorXd cand = p + alpha * step;
            Eigen::VectorXd rc = residual_at(cand, degree, conv, nodes, target);
            if (rc.norm() < rn * (1.0 - 1e-4 * alpha) || rc.cwiseAbs().maxCoeff() <= tol) {
                p = cand;
                r = rc;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return false;
    }
    return r.cwiseAbs().maxCoeff() <= tol;
}

double dense_residual(const std::vector<double>& phases, QspConvention conv,
                      const ChebSeries& target, int degree) {
    int Q = 2 * degree + 1;
    double worst = 0.0;
    for (int i = 0; i < Q; ++i) {
        double x = std::cos(pi * (i + 0.5) / Q);
        worst = std::max(worst,
                         std::abs(qsp_response(phases, x, conv).real() - target.eval(x)));
    }
    return worst;
}

} // namespace

PhaseSequence solve_qsp_phases(const ChebSeries& target, int degree, QspConvention conv,
                               double tol) {
    if (degree < 0) throw Error("qsvt-engine", "negative degree");
    if (target.degree() > degree)
        throw Error("qsvt-engine", "target degree exceeds phase degree");
    int parity = degree % 2;
    if (!target.has_parity(parity, 1e-11))
        throw Error("qsvt-engine", "target parity does not match degree");
    if (target.max_abs() >= 1.0 - 1e-9)
        throw Error("qsvt-engine", "target sup norm too close to 1");

    if (degree == 0) {
        PhaseSequence ps;
        ps.convention = conv;
        ps.parity = 0;
        double v = target.c.empty() ? 0.0 : target.c[0];
        // Wx: response e^{i phi}; Reflection: the single projector phase too.
        ps.phases = {std::acos(std::min(1.0, std::max(-1.0, v)))};
        ps.residual = std::abs(qsp_response(ps.phases, 0.37, conv).real() - v);
        return ps;
    }

    if (conv == QspConvention::Reflection) {
        // W(x) = i exp(-i pi/4 Z) M(x) exp(-i pi/4 Z), so a Wx sequence maps
        // exactly onto reflection phases by constant shifts; the i^degree
        // factor folds into the leading phase (only the (0,0) entry matters).
        PhaseSequence wx = solve_qsp_phases(target, degree, QspConvention::Wx, tol);
        PhaseSequence ps;
        ps.convention = conv;
        ps.parity = parity;
        ps.phases = wx.phases;
        ps.phases[0] += pi * degree / 2.0 - pi / 4.0;
        ps.phases[degree] -= pi / 4.0;
        for (int k = 1; k < degree; ++k) ps.phases[k] -= pi / 2.0;
        ps.residual = dense_residual(ps.phases, conv, target, degree);
        if (ps.residual > tol)
            throw Error("qsvt-engine", "reflection conversion residual exceeds tolerance");
        return ps;
    }

    int M = (degree + 2) / 2;
    std::vector<double> nodes(M);
    for (int i = 0; i < M; ++i) nodes[i] = std::cos(pi * (i + 0.5) / (2.0 * M));

    // Homotopy from the zero polynomial. Phases (pi/4, 0, ..., 0, pi/4) give
    // response i T_degree(x), whose real part vanishes identically, and the
    // real-part Jacobian is regular there (unlike at the all-zero phases,
    // which sit at a critical point of the real part).
    ChebSeries base;
    base.c.assign(degree + 1, 0.0);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(M);
    p(0) = pi / 4.0;

    double node_tol = std::max(tol * 0.05, 1e-14);
    double lam = 0.0, step = 0.5;
    while (lam < 1.0) {
        double nl = std::min(1.0, lam + step);
        ChebSeries mix;
        mix.c.assign(degree + 1, 0.0);
        for (int k = 0; k <= degree; ++k) {
            double tk = (k < int(target.c.size())) ? target.c[k] : 0.0;
            mix.c[k] = (1.0 - nl) * base.c[k] + nl * tk;
        }
        Eigen::VectorXd cand = p;
        double use_tol = (nl >= 1.0) ? node_tol : 1e-10;
        if (newton_solve(cand, degree, conv, nodes, mix, use_tol, 80)) {
            p = cand;
            lam = nl;
            step = std::min(0.5, step * 2.0);
        } else {
            step *= 0.5;
            if (step < 1e-5) {
                std::ostringstream os;
                os << "phase solve stalled at homotopy parameter " << lam;
                throw Error("qsvt-engine", os.str());
            }
        }
    }

    PhaseSequence ps;
    ps.convention = conv;
    ps.parity = parity;
    ps.phases = phases_from_params(p, degree);
    ps.residual = dense_residual(ps.phases, conv, target, degree);
    if (ps.residual > tol) {
        std::ostringstream os;
        os << "phase solve residual " << ps.residual << " exceeds tolerance " << tol;
        throw Error("qsvt-engine", os.str());
    }
    return ps;
}

namespace {

std::string cache_dir() {
    if (const char* env = std::getenv("QPDE_QSP_CACHE")) return env;
    return (std::filesystem::temp_directory_path() / "qpde-qsp-cache").string();
}

unsigned long long fnv1a(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

PhaseSequence solve_qsp_phases_cached(const std::string& key, const ChebSeries& target,
                                      int degree, QspConvention conv, double tol) {
    std::ostringstream sig;
    sig << key << "|d=" << degree << "|conv=" << int(conv) << "|tol=";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12e", tol);
    sig << buf;
    for (double c : target.c) {
        std::snprintf(buf, sizeof(buf), "|%.12e", c);
        sig << buf;
    }
    std::filesystem::path dir(cache_dir());
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    char name[32];
    std::snprintf(name, sizeof(name), "%016llx.txt", fnv1a(sig.str()));
    std::filesystem::path file = dir / name;

    if (std::filesystem::exists(file)) {
        std::ifstream in(file);
        PhaseSequence ps;
        ps.convention = conv;
        ps.parity = degree % 2;
        double v;
        while (in >> v) ps.phases.push_back(v);
        if (int(ps.phases.size()) == degree + 1) {
            ps.residual = dense_residual(ps.phases, conv, target, degree);
            if (ps.residual <= tol) return ps;
        }
        // stale or corrupt entry: fall through and resolve
    }

    PhaseSequence ps = solve_qsp_phases(target, degree, conv, tol);
    std::ofstream out(file);
    if (out) {
        out.precision(17);
        for (double ph : ps.phases) out << ph << "\n";
    }
    return ps;
}

} // namespace qpde
