#include "qpde/oracle/handle.hpp"

#include <Eigen/SVD>
#include <algorithm>

#include "json.hpp"
#include "qpde/circuit/synth.hpp"
#include "qpde/sim/statevector.hpp"

namespace qpde {

namespace {

int ceil_log2(long long k) {
    int l = 0;
    while ((1LL << l) < k) ++l;
    return l;
}

} // namespace

void BlockEncodingHandle::validate() const {
    if (!(alpha > 0.0)) throw Error("oracle-library", "handle alpha must be positive");
    if (epsilon < 0.0) throw Error("oracle-library", "handle epsilon negative");
    if (dim != (1LL << data.size()))
        throw Error("oracle-library", "handle dim does not match data register");
    std::vector<int> seen(circuit.nq, 0);
    auto mark = [&](const std::vector<int>& qs) {
        for (int q : qs) {
            if (q < 0 || q >= circuit.nq || seen[q]++)
                throw Error("oracle-library", "handle qubit lists do not partition");
        }
    };
    mark(data);
    mark(flags);
    mark(pure);
    for (int q = 0; q < circuit.nq; ++q)
        if (!seen[q]) throw Error("oracle-library", "handle qubit lists do not partition");
}

Eigen::MatrixXcd extract_encoded(const BlockEncodingHandle& h) {
    return h.alpha * extract_block(h.circuit, h.data);
}

BlockEncodingHandle identity_encoding(int n) {
    if (n < 1) throw Error("oracle-library", "identity encoding needs a data qubit");
    BlockEncodingHandle h;
    h.circuit.add_qubits(n, "data", Role::Data);
    h.alpha = 1.0;
    h.dim = 1LL << n;
    for (int q = 0; q < n; ++q) h.data.push_back(q);
    return h;
}

BlockEncodingHandle zero_encoding(int n) {
    if (n < 1) throw Error("oracle-library", "zero encoding needs a data qubit");
    BlockEncodingHandle h;
    h.circuit.add_qubits(n, "data", Role::Data);
    int flag = h.circuit.add_qubits(1, "flag", Role::Flag);
    h.circuit.x(flag);
    h.alpha = 1.0;
    h.dim = 1LL << n;
    for (int q = 0; q < n; ++q) h.data.push_back(q);
    h.flags = {flag};
    return h;
}

BlockEncodingHandle dense_encoding(const Eigen::MatrixXcd& A, double alpha) {
    long long d = A.rows();
    if (d != A.cols() || !is_pow2(d))
        throw Error("oracle-library", "dense encoding wants a square power-of-two matrix");
    if (!(alpha > 0.0)) throw Error("oracle-library", "dense encoding alpha must be positive");
    Eigen::MatrixXcd M = A / alpha;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() && sv(0) > 1.0 + 1e-12)
        throw Error("oracle-library", "dense encoding norm exceeds alpha");
    Eigen::VectorXd comp(sv.size());
    for (long long i = 0; i < sv.size(); ++i)
        comp(i) = std::sqrt(std::max(0.0, 1.0 - sv(i) * sv(i)));
    Eigen::MatrixXcd P = svd.matrixU() * comp.asDiagonal() * svd.matrixU().adjoint();
    Eigen::MatrixXcd Q = svd.matrixV() * comp.asDiagonal() * svd.matrixV().adjoint();
    Eigen::MatrixXcd W(2 * d, 2 * d);
    W.topLeftCorner(d, d) = M;
    W.topRightCorner(d, d) = P;
    W.bottomLeftCorner(d, d) = Q;
    W.bottomRightCorner(d, d) = -M.adjoint();

    int n = ceil_log2(d);
    BlockEncodingHandle h;
    int base = h.circuit.add_qubits(n, "data", Role::Data);
    int flag = h.circuit.add_qubits(1, "flag", Role::Flag);
    std::vector<int> reg;
    for (int q = 0; q < n; ++q) reg.push_back(base + q);
    reg.push_back(flag);
    circuit_from_unitary(h.circuit, reg, W);
    h.alpha = alpha;
    h.dim = d;
    for (int q = 0; q < n; ++q) h.data.push_back(base + q);
    h.flags = {flag};
    return h;
}

BlockEncodingHandle lcu_combine(const std::vector<BlockEncodingHandle>& handles,
                                const std::vector<cplx>& weights) {
    if (handles.empty() || handles.size() != weights.size())
        throw Error("oracle-library", "lcu needs one weight per handle");
    long long K = (long long)handles.size();
    long long dim = handles[0].dim;
    size_t pool_f = 0, pool_p = 0;
    for (const auto& h : handles) {
        h.validate();
        if (h.dim != dim) throw Error("oracle-library", "lcu dimension mismatch");
        pool_f = std::max(pool_f, h.flags.size());
        pool_p = std::max(pool_p, h.pure.size());
    }
    for (const cplx& w : weights)
        if (std::abs(w) == 0.0) throw Error("oracle-library", "lcu weight is zero");

    int n = ceil_log2(dim);
    int lsel = ceil_log2(K);

    BlockEncodingHandle out;
    int dbase = out.circuit.add_qubits(n, "data", Role::Data);
    std::vector<int> sel, fpool, ppool;
    if (lsel) {
        int sbase = out.circuit.add_qubits(lsel, "select", Role::Flag);
        for (int q = 0; q < lsel; ++q) sel.push_back(sbase + q);
    }
    if (pool_f) {
        int fbase = out.circuit.add_qubits((int)pool_f, "branch-flag", Role::Flag);
        for (size_t q = 0; q < pool_f; ++q) fpool.push_back(fbase + (int)q);
    }
    if (pool_p) {
        int pbase = out.circuit.add_qubits((int)pool_p, "scratch", Role::PureAncilla);
        for (size_t q = 0; q < pool_p; ++q) ppool.push_back(pbase + (int)q);
    }

    double alpha_out = 0.0;
    std::vector<double> prep_w(1LL << lsel, 0.0);
    for (long long k = 0; k < K; ++k) {
        prep_w[k] = std::abs(weights[k]) * handles[k].alpha;
        alpha_out += prep_w[k];
    }

    Circuit prep;
    prep.nq = out.circuit.nq;
    if (lsel) amplitude_prep(prep, sel, prep_w);
    out.circuit.append(prep);

    for (long long k = 0; k < K; ++k) {
        const auto& h = handles[k];
        std::vector<int> map(h.circuit.nq, -1);
        for (size_t p = 0; p < h.data.size(); ++p) map[h.data[p]] = dbase + (int)p;
        for (size_t p = 0; p < h.flags.size(); ++p) map[h.flags[p]] = fpool[p];
        for (size_t p = 0; p < h.pure.size(); ++p) map[h.pure[p]] = ppool[p];
        std::vector<std::pair<int, int>> ctrl;
        for (int b = 0; b < lsel; ++b) ctrl.push_back({sel[b], int((k >> b) & 1)});
        out.circuit.append_mapped(h.circuit, map, ctrl);

        double phi = std::arg(weights[k]);
        if (std::abs(phi) > 1e-15) {
            Mat2 u = (k & 1) ? gate_phase(phi)
                             : Mat2{std::polar(1.0, phi), 0.0, 0.0, 1.0};
            if (lsel == 0) {
                out.circuit.gphase(dbase, phi);
            } else if (lsel == 1) {
                out.circuit.g1(sel[0], u);
            } else {
                std::vector<int> cq(sel.begin() + 1, sel.end());
                std::vector<int> pol;
                for (int b = 1; b < lsel; ++b) pol.push_back(int((k >> b) & 1));
                out.circuit.mc(cq, pol, sel[0], u);
            }
        }
    }
    out.circuit.append(adjoint(prep));

    out.alpha = alpha_out;
    out.dim = dim;
    out.epsilon = 0.0;
    for (long long k = 0; k < K; ++k)
        out.epsilon += std::abs(weights[k]) * handles[k].epsilon;
    for (int q = 0; q < n; ++q) out.data.push_back(dbase + q);
    out.flags = sel;
    out.flags.insert(out.flags.end(), fpool.begin(), fpool.end());
    out.pure = ppool;
    return out;
}

BlockEncodingHandle tensor(const BlockEncodingHandle& h1, const BlockEncodingHandle& h2) {
    h1.validate();
    h2.validate();
    int n1 = (int)h1.data.size(), n2 = (int)h2.data.size();
    BlockEncodingHandle out;
    int dbase = out.circuit.add_qubits(n1 + n2, "data", Role::Data);
    int fbase = -1, pbase = -1;
    size_t nf = h1.flags.size() + h2.flags.size();
    // the two factors run sequentially, so borrowed scratch can be shared
    size_t np = std::max(h1.pure.size(), h2.pure.size());
    if (nf) fbase = out.circuit.add_qubits((int)nf, "flag", Role::Flag);
    if (np) pbase = out.circuit.add_qubits((int)np, "scratch", Role::PureAncilla);

    auto place = [&](const BlockEncodingHandle& h, int doff, int foff) {
        std::vector<int> map(h.circuit.nq, -1);
        for (size_t p = 0; p < h.data.size(); ++p) map[h.data[p]] = dbase + doff + (int)p;
        for (size_t p = 0; p < h.flags.size(); ++p) map[h.flags[p]] = fbase + foff + (int)p;
        for (size_t p = 0; p < h.pure.size(); ++p) map[h.pure[p]] = pbase + (int)p;
        out.circuit.append_mapped(h.circuit, map);
    };
    place(h2, 0, 0);
    place(h1, n2, (int)h2.flags.size());

    out.alpha = h1.alpha * h2.alpha;
    out.epsilon = h1.alpha * h2.epsilon + h2.alpha * h1.epsilon + 2.0 * h1.epsilon * h2.epsilon;
    out.dim = h1.dim * h2.dim;
    for (int q = 0; q < n1 + n2; ++q) out.data.push_back(dbase + q);
    for (size_t q = 0; q < nf; ++q) out.flags.push_back(fbase + (int)q);
    for (size_t q = 0; q < np; ++q) out.pure.push_back(pbase + (int)q);
    return out;
}

BlockEncodingHandle product(const BlockEncodingHandle& h1, const BlockEncodingHandle& h2) {
    h1.validate();
    h2.validate();
    if (h1.dim != h2.dim) throw Error("oracle-library", "product dimension mismatch");
    int n = (int)h1.data.size();
    BlockEncodingHandle out;
    int dbase = out.circuit.add_qubits(n, "data", Role::Data);
    int fbase = -1, pbase = -1;
    size_t nf = h1.flags.size() + h2.flags.size();
    size_t np = std::max(h1.pure.size(), h2.pure.size());
    if (nf) fbase = out.circuit.add_qubits((int)nf, "flag", Role::Flag);
    if (np) pbase = out.circuit.add_qubits((int)np, "scratch", Role::PureAncilla);

    auto place = [&](const BlockEncodingHandle& h, int foff) {
        std::vector<int> map(h.circuit.nq, -1);
        for (size_t p = 0; p < h.data.size(); ++p) map[h.data[p]] = dbase + (int)p;
        for (size_t p = 0; p < h.flags.size(); ++p) map[h.flags[p]] = fbase + foff + (int)p;
        for (size_t p = 0; p < h.pure.size(); ++p) map[h.pure[p]] = pbase + (int)p;
        out.circuit.append_mapped(h.circuit, map);
    };
    place(h2, 0);
    place(h1, (int)h2.flags.size());

    out.alpha = h1.alpha * h2.alpha;
    out.epsilon = h1.alpha * h2.epsilon + h2.alpha * h1.epsilon + h1.epsilon * h2.epsilon;
    out.dim = h1.dim;
    for (int q = 0; q < n; ++q) out.data.push_back(dbase + q);
    for (size_t q = 0; q < nf; ++q) out.flags.push_back(fbase + (int)q);
    for (size_t q = 0; q < np; ++q) out.pure.push_back(pbase + (int)q);
    return out;
}

std::string serialize_handle(const BlockEncodingHandle& h) {
    nlohmann::json j;
    j["alpha"] = h.alpha;
    j["epsilon"] = h.epsilon;
    j["dim"] = h.dim;
    j["data"] = h.data;
    j["flags"] = h.flags;
    j["pure"] = h.pure;
    j["circuit"] = serialize(h.circuit);
    return j.dump(2);
}

BlockEncodingHandle deserialize_handle(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BlockEncodingHandle h;
    h.alpha = j.at("alpha").get<double>();
    h.epsilon = j.at("epsilon").get<double>();
    h.dim = j.at("dim").get<long long>();
    h.data = j.at("data").get<std::vector<int>>();
    h.flags = j.at("flags").get<std::vector<int>>();
    h.pure = j.at("pure").get<std::vector<int>>();
    h.circuit = deserialize(j.at("circuit").get<std::string>());
    h.validate();
    return h;
}

} // namespace qpde
