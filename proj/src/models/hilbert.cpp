#include "gtc/models/hilbert.hpp"

#include <numeric>

namespace gtc::hilbert {

int prod(const std::vector<int>& dims) { return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>()); }

std::vector<int> dims_of(const Object& o, const Dims& dims) {
    std::vector<int> r;
    for (const auto& a : o.atoms) {
        auto it = dims.find(a);
        if (it == dims.end()) throw ModelError("no dimension for atom " + a);
        r.push_back(it->second);
    }
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Mat factor_permutation(const std::vector<int>& dims, const std::vector<int>& perm) {
    int n = prod(dims), k = static_cast<int>(dims.size());
    std::vector<int> out_dims(k);
    for (int p = 0; p < k; ++p) out_dims[p] = dims[perm[p]];
    Mat P = Mat::Zero(n, n);
    std::vector<int> digit(k);
    for (int idx = 0; idx < n; ++idx) {
        for (int p = k - 1, r = idx; p >= 0; --p) {
            digit[p] = r % dims[p];
            r /= dims[p];
        }
        int out = 0;
        for (int p = 0; p < k; ++p) out = out * out_dims[p] + digit[perm[p]];
        P(out, idx) = 1;
    }
    return P;
}

Morph identity(const std::vector<int>& dims) { return {dims, dims, Mat::Identity(prod(dims), prod(dims))}; }

Morph symmetry(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> dims = a, perm;
    dims.insert(dims.end(), b.begin(), b.end());
    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    for (int k = 0; k < nb; ++k) perm.push_back(na + k);
    for (int k = 0; k < na; ++k) perm.push_back(k);
    std::vector<int> out = b;
    out.insert(out.end(), a.begin(), a.end());
    return {dims, out, factor_permutation(dims, perm)};
}

Morph compose(const Morph& f, const Morph& g) {
    if (f.out_dims != g.in_dims) throw ModelError("compose: dimension mismatch");
    return {f.in_dims, g.out_dims, g.m * f.m};
}

Morph tensor(const Morph& f, const Morph& g) {
    Morph r{f.in_dims, f.out_dims, kron(f.m, g.m)};
    r.in_dims.insert(r.in_dims.end(), g.in_dims.begin(), g.in_dims.end());
    r.out_dims.insert(r.out_dims.end(), g.out_dims.begin(), g.out_dims.end());
    return r;
}

Mat hs_sum_trace(const Mat& f, int A, int U, int B, int C, int D, const Mat& basis) {
    if (f.rows() != C * D * U || f.cols() != A * U * B) throw ModelError("hs_sum_trace: shape mismatch");
    if (basis.rows() != U || basis.cols() != U) throw ModelError("hs_sum_trace: basis must be square in dim U");
    Mat w = Mat::Zero(C * D, A * B);
    for (int c = 0; c < C; ++c)
        for (int d = 0; d < D; ++d)
            for (int a = 0; a < A; ++a)
                for (int b = 0; b < B; ++b) {
                    double s = 0;
                    for (int i = 0; i < U; ++i)
                        // <f(a x u_i x b), c x d x u_i>
                        for (int u_in = 0; u_in < U; ++u_in)
                            for (int u_out = 0; u_out < U; ++u_out)
                                s += basis(u_in, i) * basis(u_out, i) *
                                     f((c * D + d) * U + u_out, (a * U + u_in) * B + b);
                    w(c * D + d, a * B + b) = s;
                }
    return w;
}

Mat hs_sum_trace(const Mat& f, int A, int U, int B, int C, int D) {
    return hs_sum_trace(f, A, U, B, C, D, Mat::Identity(U, U));
}

Mat recompose(const Factorization& w, int A, int U, int B, int C, int D) {
    if (w.g.rows() != w.E * D * U || w.g.cols() != B || w.h.rows() != C || w.h.cols() != A * U * w.E)
        throw ModelError("factorization shape mismatch");
    return kron(w.h, Mat::Identity(D * U, D * U)) * kron(Mat::Identity(A * U, A * U), w.g);
}

Mat hs_factored_trace(const Factorization& w, int A, int U, int B, int C, int D) {
    if (w.g.rows() != w.E * D * U || w.g.cols() != B || w.h.rows() != C || w.h.cols() != A * U * w.E)
        throw ModelError("factorization shape mismatch");
    Mat step1 = kron(Mat::Identity(A, A), w.g);                     // A x B -> A x E x D x U
    Mat move = factor_permutation({A, w.E, D, U}, {0, 3, 1, 2});    // -> A x U x E x D
    Mat step3 = kron(w.h, Mat::Identity(D, D));                     // -> C x D
    return step3 * move * step1;
}

Factorization canonical_factorization(const Mat& f, int A, int U, int B, int C, int D) {
    if (f.rows() != C * D * U || f.cols() != A * U * B) throw ModelError("factorization: shape mismatch");
    int X = A * U;
    Factorization w;
    w.E = X * C;
    w.g = Mat::Zero(w.E * D * U, B);
    w.h = Mat::Zero(C, X * w.E);
    for (int x = 0; x < X; ++x)
        for (int c = 0; c < C; ++c) {
            int e = x * C + c;
            w.h(c, x * w.E + e) = 1;
            for (int d = 0; d < D; ++d)
                for (int u = 0; u < U; ++u)
                    for (int b = 0; b < B; ++b) w.g((e * D + d) * U + u, b) = f((c * D + d) * U + u, x * B + b);
        }
    return w;
}

Factorization transform(const Factorization& w, const Mat& M, int A, int U, int D) {
    Factorization r = w;
    r.g = kron(M, Mat::Identity(D * U, D * U)) * w.g;
    r.h = w.h * kron(Mat::Identity(A * U, A * U), M.inverse());
    return r;
}

Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0, 1);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = N(rng);
    return m;
}

Factorization random_factorization(int A, int U, int B, int C, int D, int E, std::mt19937_64& rng) {
    return {random_matrix(E * D * U, B, rng), random_matrix(C, A * U * E, rng), E};
}

Mat random_orthogonal(int n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
    return qr.householderQ() * Mat::Identity(n, n);
}

Mat random_invertible(int n, std::mt19937_64& rng) {
    // well conditioned: identity plus a small perturbation
    return Mat::Identity(n, n) + 0.3 * random_matrix(n, n, rng) / std::sqrt(static_cast<double>(n));
}

double max_rel_dev(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
    double d = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) d = std::max(d, rel_dev(a(i, j), b(i, j)));
    return d;
}

Morph Ops::box(const BoxSig& sig) {
    auto it = boxes.find(sig.name);
    if (it == boxes.end()) throw ModelError("unbound box " + sig.name);
    return it->second;
}

Morph Ops::trace(const Morph& f, const TraceShape& s, const Object&) {
    auto part = [&](const std::vector<int>& v, int from, int n) {
        return prod(std::vector<int>(v.begin() + from, v.begin() + from + n));
    };
    int A = part(f.in_dims, 0, s.a), U = part(f.in_dims, s.a, s.u), B = part(f.in_dims, s.a + s.u, s.b);
    int C = part(f.out_dims, 0, s.c), D = part(f.out_dims, s.c, s.d);
    Morph r;
    r.in_dims.assign(f.in_dims.begin(), f.in_dims.begin() + s.a);
    r.in_dims.insert(r.in_dims.end(), f.in_dims.begin() + s.a + s.u, f.in_dims.end());
    r.out_dims.assign(f.out_dims.begin(), f.out_dims.begin() + s.c + s.d);
    r.m = hs_sum_trace(f.m, A, U, B, C, D);
    return r;
}

Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs) {
    Ops ops;
    for (auto& [atom, n] : j.at("atoms").items()) ops.dims[atom] = n.get<int>();
    for (auto& [name, rows] : j.at("boxes").items()) {
        auto s = sigs.find(name);
        if (s == sigs.end()) throw ModelError("binding for undeclared box " + name);
        Morph f{dims_of(s->second.inputs, ops.dims), dims_of(s->second.outputs, ops.dims), {}};
        int r = prod(f.out_dims), c = prod(f.in_dims);
        if (static_cast<int>(rows.size()) != r) throw ModelError("box " + name + ": expected " + std::to_string(r) + " rows");
        f.m = Mat(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c)
                throw ModelError("box " + name + ": expected " + std::to_string(c) + " columns");
            for (int k = 0; k < c; ++k) f.m(i, k) = rows[i][k].get<double>();
        }
        ops.boxes[name] = f;
    }
    return ops;
}

nlohmann::json to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gtc::hilbert
