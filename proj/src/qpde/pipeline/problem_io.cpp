#include "qpde/pipeline/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qpde {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream s(line);
    std::string t;
    while (s >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

double num(const std::string& t, const char* what) {
    try {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw Error("problem-file", std::string("bad number for ") + what + ": '" + t + "'");
    }
}

StencilKind kind_of(const std::string& t) {
    if (t == "central") return StencilKind::Central;
    if (t == "forward") return StencilKind::Forward;
    if (t == "backward") return StencilKind::Backward;
    throw Error("problem-file", "unknown stencil kind '" + t + "'");
}

const char* kind_name(StencilKind k) {
    switch (k) {
        case StencilKind::Central: return "central";
        case StencilKind::Forward: return "forward";
        default: return "backward";
    }
}

struct SegmentAccum {
    std::vector<Segment> segs;

    void add(const std::vector<std::string>& tk) {
        if (tk.size() < 4)
            throw Error("problem-file", "segment needs <lo> <hi> <c0> ...");
        Segment s;
        s.lo = num(tk[1], "segment lo");
        s.hi = num(tk[2], "segment hi");
        for (size_t i = 3; i < tk.size(); ++i)
            s.coef.push_back(num(tk[i], "segment coefficient"));
        segs.push_back(std::move(s));
    }

    PiecewisePolynomial finish(double a, double b) const {
        if (segs.empty()) throw Error("problem-file", "section has no segment lines");
        return PiecewisePolynomial(a, b, segs);
    }
};

} // namespace

ProblemFile parse_problem_file(const std::string& text) {
    ProblemFile pf;
    pf.problem.terms.clear();
    pf.run.times.clear();

    double a = 0.0, b = 1.0;
    bool have_domain = false;

    struct TermDraft {
        int order = 0;
        StencilChoice stencil;
        SegmentAccum f;
        bool constant_one = true;
    };
    std::vector<TermDraft> terms;
    SegmentAccum source, initial;
    bool have_source = false, initial_builtin = false, have_initial_segments = false;

    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tk = tokens_of(line);
        if (tk.empty()) continue;
        if (tk[0].front() == '[') {
            section = tk[0];
            if (section == "[term]") terms.emplace_back();
            continue;
        }
        auto fail = [&](const std::string& msg) -> Error {
            return Error("problem-file",
                         msg + " (line " + std::to_string(lineno) + ")");
        };
        if (section == "[domain]") {
            if (tk[0] == "a" && tk.size() == 2) {
                a = num(tk[1], "a");
                have_domain = true;
            } else if (tk[0] == "b" && tk.size() == 2) {
                b = num(tk[1], "b");
            } else {
                throw fail("unknown [domain] entry '" + tk[0] + "'");
            }
        } else if (section == "[term]") {
            TermDraft& t = terms.back();
            if (tk[0] == "order" && tk.size() == 2) {
                t.order = int(num(tk[1], "order"));
            } else if (tk[0] == "stencil" && tk.size() == 3) {
                t.stencil.kind = kind_of(tk[1]);
                t.stencil.accuracy = int(num(tk[2], "stencil accuracy"));
            } else if (tk[0] == "segment") {
                t.f.add(tk);
                t.constant_one = false;
            } else {
                throw fail("unknown [term] entry '" + tk[0] + "'");
            }
        } else if (section == "[source]") {
            if (tk[0] != "segment") throw fail("[source] wants segment lines");
            source.add(tk);
            have_source = true;
        } else if (section == "[boundary]") {
            if (tk[0] == "robin" && tk.size() == 5) {
                pf.problem.boundary = Boundary::make_robin(
                    num(tk[1], "A1"), num(tk[2], "A2"), num(tk[3], "B1"),
                    num(tk[4], "B2"));
            } else if (tk[0] == "dirichlet" && tk.size() == 3) {
                pf.problem.boundary =
                    Boundary::make_dirichlet(num(tk[1], "left"), num(tk[2], "right"));
            } else {
                throw fail("unknown [boundary] entry");
            }
        } else if (section == "[initial]") {
            if (tk[0] == "builtin" && tk.size() == 2 && tk[1] == "sin_half") {
                initial_builtin = true;
            } else if (tk[0] == "segment") {
                initial.add(tk);
                have_initial_segments = true;
            } else {
                throw fail("unknown [initial] entry");
            }
        } else if (section == "[grid]") {
            if (tk.size() != 2) throw fail("[grid] entries are key value pairs");
            if (tk[0] == "n")
                pf.run.n = int(num(tk[1], "n"));
            else if (tk[0] == "n_xi")
                pf.run.n_xi = int(num(tk[1], "n_xi"));
            else if (tk[0] == "L_xi")
                pf.run.L_xi = num(tk[1], "L_xi");
            else
                throw fail("unknown [grid] key '" + tk[0] + "'");
        } else if (section == "[run]") {
            if (tk[0] == "T") {
                for (size_t i = 1; i < tk.size(); ++i)
                    pf.run.times.push_back(num(tk[i], "T"));
            } else if (tk[0] == "epsilon" && tk.size() == 2) {
                pf.run.epsilon = num(tk[1], "epsilon");
            } else if (tk[0] == "mode" && tk.size() == 2) {
                if (tk[1] == "matrix")
                    pf.run.mode = RunMode::Matrix;
                else if (tk[1] == "circuit")
                    pf.run.mode = RunMode::Circuit;
                else
                    throw fail("mode must be matrix or circuit");
            } else if (tk[0] == "homogenize" && tk.size() == 2) {
                if (tk[1] != "identity" && tk[1] != "general")
                    throw fail("homogenize must be identity or general");
                pf.run.homogenize = tk[1];
            } else if (tk[0] == "xi_star" && tk.size() == 2) {
                pf.run.xi_star = num(tk[1], "xi_star");
            } else if (tk[0] == "window" && tk.size() == 2) {
                pf.run.window = int(num(tk[1], "window"));
            } else if (tk[0] == "out" && tk.size() == 2) {
                pf.run.out = tk[1];
            } else {
                throw fail("unknown [run] entry '" + tk[0] + "'");
            }
        } else {
            throw fail("entry outside any section");
        }
    }

    if (!have_domain) throw Error("problem-file", "missing [domain] section");
    if (terms.empty()) throw Error("problem-file", "missing [term] section");
    if (!(b > a)) throw Error("problem-file", "domain needs b > a");

    pf.problem.a = a;
    pf.problem.b = b;
    for (const TermDraft& t : terms) {
        PiecewisePolynomial f = t.constant_one
                                    ? PiecewisePolynomial::constant(a, b, 1.0)
                                    : t.f.finish(a, b);
        pf.problem.terms.push_back({t.order, f});
        pf.run.stencils.push_back(t.stencil);
    }
    if (have_source) pf.problem.source = source.finish(a, b);
    if (initial_builtin && have_initial_segments)
        throw Error("problem-file", "[initial] is either builtin or segments");
    if (have_initial_segments) {
        pf.problem.initial.kind = InitialCondition::Kind::Piecewise;
        pf.problem.initial.pw = initial.finish(a, b);
    } else {
        pf.problem.initial.kind = InitialCondition::Kind::SinHalf;
    }
    if (pf.run.times.empty()) pf.run.times.push_back(1.0);
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("problem-file", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_problem_file(ss.str());
}

namespace {

void write_segments(std::ostream& os, const PiecewisePolynomial& p) {
    for (const Segment& s : p.segments()) {
        os << "segment " << fmt(s.lo) << " " << fmt(s.hi);
        for (const cplx& c : s.coef) os << " " << fmt(c.real());
        os << "\n";
    }
}

} // namespace

std::string serialize_problem_file(const ProblemFile& pf) {
    std::ostringstream os;
    os << "[domain]\n";
    os << "a " << fmt(pf.problem.a) << "\n";
    os << "b " << fmt(pf.problem.b) << "\n";
    for (size_t k = 0; k < pf.problem.terms.size(); ++k) {
        const PdeTerm1D& t = pf.problem.terms[k];
        const StencilChoice& sc = pf.run.stencils[k];
        os << "\n[term]\n";
        os << "order " << t.p << "\n";
        os << "stencil " << kind_name(sc.kind) << " " << sc.accuracy << "\n";
        write_segments(os, t.f);
    }
    if (pf.problem.source) {
        os << "\n[source]\n";
        write_segments(os, *pf.problem.source);
    }
    os << "\n[boundary]\n";
    if (pf.problem.boundary.kind == BoundaryKind::Robin) {
        const RobinBoundary& r = pf.problem.boundary.robin;
        os << "robin " << fmt(r.A1.real()) << " " << fmt(r.A2.real()) << " "
           << fmt(r.B1.real()) << " " << fmt(r.B2.real()) << "\n";
    } else {
        const DirichletBoundary& d = pf.problem.boundary.dirichlet;
        os << "dirichlet " << fmt(d.left.real()) << " " << fmt(d.right.real()) << "\n";
    }
    os << "\n[initial]\n";
    if (pf.problem.initial.kind == InitialCondition::Kind::SinHalf)
        os << "builtin sin_half\n";
    else
        write_segments(os, *pf.problem.initial.pw);
    os << "\n[grid]\n";
    os << "n " << pf.run.n << "\n";
    os << "n_xi " << pf.run.n_xi << "\n";
    os << "L_xi " << fmt(pf.run.L_xi) << "\n";
    os << "\n[run]\n";
    os << "mode " << (pf.run.mode == RunMode::Matrix ? "matrix" : "circuit") << "\n";
    os << "T";
    for (double t : pf.run.times) os << " " << fmt(t);
    os << "\n";
    os << "epsilon " << fmt(pf.run.epsilon) << "\n";
    os << "homogenize " << pf.run.homogenize << "\n";
    os << "xi_star " << fmt(pf.run.xi_star) << "\n";
    os << "window " << pf.run.window << "\n";
    if (!pf.run.out.empty()) os << "out " << pf.run.out << "\n";
    return os.str();
}

void save_problem_file(const std::string& path, const ProblemFile& pf) {
    std::ofstream f(path);
    if (!f) throw Error("problem-file", "cannot open '" + path + "' for writing");
    f << serialize_problem_file(pf);
}

} // namespace qpde
