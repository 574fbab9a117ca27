#include "gtc/models/metric.hpp"

#include <cmath>
#include <numeric>

namespace gtc::metric {

double sup_dist(const Tuple& x, const Tuple& y) {
    double d = 0;
    for (std::size_t g = 0; g < x.size(); ++g)
        for (std::size_t k = 0; k < x[g].size(); ++k) d = std::max(d, std::abs(x[g][k] - y[g][k]));
    return d;
}

double max_rel_dev(const Tuple& x, const Tuple& y) {
    if (x.size() != y.size()) return INFINITY;
    double d = 0;
    for (std::size_t g = 0; g < x.size(); ++g) {
        if (x[g].size() != y[g].size()) return INFINITY;
        for (std::size_t k = 0; k < x[g].size(); ++k) d = std::max(d, rel_dev(x[g][k], y[g][k]));
    }
    return d;
}

int banach_bound(double c, double d0, double tol) {
    double target = tol * (1 - c);
    if (d0 <= target) return 1;
    if (c <= 0) return 2;
    return static_cast<int>(std::ceil(std::log(target / d0) / std::log(c))) + 1;
}

BanachResult banach_rec(const std::function<Tuple(const Tuple&)>& step, const Tuple& start, double c, double tol) {
    if (!(c >= 0 && c < 1)) throw ModelError("contraction factor must lie in [0, 1)");
    if (!(tol > 0)) throw ModelError("tolerance must be positive");
    BanachResult r;
    Tuple y = start;
    Tuple next = step(y);
    r.iterations = 1;
    double d0 = sup_dist(y, next);
    r.bound = banach_bound(c, d0, tol);
    double d = d0;
    while (d > tol * (1 - c)) {
        if (r.iterations > r.bound + 2)
            throw ModelError("no convergence within the a-priori bound; declared contraction factor is wrong");
        y = std::move(next);
        next = step(y);
        ++r.iterations;
        d = sup_dist(y, next);
    }
    r.point = std::move(next);
    return r;
}

Morph trace(const Morph& f, const TraceShape& s, const std::vector<int>& u_dims, double tol) {
    if (!f.lip) throw ModelError("metric trace needs Lipschitz data for the body");
    double c = 0;
    for (int r = 0; r < s.u; ++r) {
        double row = 0;
        for (int k = 0; k < s.u; ++k) row += (*f.lip)(s.c + s.d + r, s.a + k);
        c = std::max(c, row);
    }
    if (c >= 1) throw ModelError("feedback is not contractive (factor " + std::to_string(c) + ")");
    cart::Solver<Vec> solve = [u_dims, c, tol](const std::function<Tuple(const Tuple&)>& step, int) {
        Tuple start;
        for (int d : u_dims) start.push_back(Vec(d, 0.0));
        return banach_rec(step, start, c, tol).point;
    };
    return cart::trace(f, s, solve);
}

std::vector<int> dims_of(const Object& o, const Dims& dims) {
    std::vector<int> r;
    for (const auto& a : o.atoms) {
        auto it = dims.find(a);
        if (it == dims.end()) throw ModelError("no dimension for atom " + a);
        r.push_back(it->second);
    }
    return r;
}

namespace {

std::vector<int> offsets(const std::vector<int>& dims) {
    std::vector<int> off(dims.size() + 1, 0);
    std::partial_sum(dims.begin(), dims.end(), off.begin() + 1);
    return off;
}

}  // namespace

Morph from_affine_sin(const AffineSin& a, const std::vector<int>& in_dims, const std::vector<int>& out_dims) {
    auto io = offsets(in_dims), oo = offsets(out_dims);
    int n = io.back(), m = oo.back();
    if (a.M.rows() != m || a.M.cols() != n || a.N.rows() != m || a.N.cols() != n || a.offset.size() != m ||
        a.alpha.size() != m || a.phase.size() != m)
        throw ModelError("affine-sine data does not match the box profile");
    Morph f;
    f.n_in = static_cast<int>(in_dims.size());
    f.n_out = static_cast<int>(out_dims.size());
    f.fn = [a, io, oo, n, out_dims](const Tuple& x, int) {
        Eigen::VectorXd v(n);
        for (std::size_t g = 0; g < x.size(); ++g)
            for (std::size_t k = 0; k < x[g].size(); ++k) v(io[g] + k) = x[g][k];
        Eigen::VectorXd y = a.M * v + a.offset + a.alpha.cwiseProduct((a.N * v + a.phase).array().sin().matrix());
        Tuple out;
        for (std::size_t g = 0; g < out_dims.size(); ++g) {
            Vec w(out_dims[g]);
            for (int k = 0; k < out_dims[g]; ++k) w[k] = y(oo[g] + k);
            out.push_back(std::move(w));
        }
        return out;
    };
    f.lip = lipschitz_bounds(a, in_dims, out_dims);
    return f;
}

Eigen::MatrixXd lipschitz_bounds(const AffineSin& a, const std::vector<int>& in_dims, const std::vector<int>& out_dims) {
    auto io = offsets(in_dims), oo = offsets(out_dims);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(out_dims.size(), in_dims.size());
    for (std::size_t j = 0; j < out_dims.size(); ++j)
        for (std::size_t i = 0; i < in_dims.size(); ++i)
            for (int r = oo[j]; r < oo[j + 1]; ++r) {
                double s = 0;
                for (int l = io[i]; l < io[i + 1]; ++l) s += std::abs(a.M(r, l)) + std::abs(a.alpha(r)) * std::abs(a.N(r, l));
                L(j, i) = std::max(L(j, i), s);
            }
    return L;
}

AffineSin random_affine_sin(const BoxSig& sig, const Dims& dims, std::mt19937_64& rng) {
    auto in_dims = dims_of(sig.inputs, dims), out_dims = dims_of(sig.outputs, dims);
    auto io = offsets(in_dims), oo = offsets(out_dims);
    int n = io.back(), m = oo.back();
    std::uniform_real_distribution<double> U(-1, 1);
    AffineSin a{Eigen::MatrixXd(m, n), Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::VectorXd(m)};
    for (int r = 0; r < m; ++r) {
        for (int l = 0; l < n; ++l) {
            a.M(r, l) = U(rng);
            a.N(r, l) = U(rng);
        }
        a.offset(r) = U(rng);
        a.alpha(r) = 0.5 * U(rng);
        a.phase(r) = 3 * U(rng);
    }
    // damp guarded passages, then cap each row's total bound
    for (std::size_t j = 0; j < out_dims.size(); ++j)
        for (std::size_t i = 0; i < in_dims.size(); ++i) {
            if (!(has_gate(sig.split.unguarded_in, i) && has_gate(sig.split.guarded_out, j))) continue;
            for (int r = oo[j]; r < oo[j + 1]; ++r)
                for (int l = io[i]; l < io[i + 1]; ++l) {
                    a.M(r, l) *= 0.2;
                    a.N(r, l) *= 0.2;
                }
        }
    std::uniform_real_distribution<double> cap(0.4, 0.9);
    for (int r = 0; r < m; ++r) {
        double s = a.M.row(r).cwiseAbs().sum() + std::abs(a.alpha(r)) * a.N.row(r).cwiseAbs().sum();
        if (s > 0) {
            double k = cap(rng) / s;
            a.M.row(r) *= k;
            a.N.row(r) *= k;
        }
    }
    return a;
}

Tuple random_point(const std::vector<int>& dims, std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> U(-radius, radius);
    Tuple t;
    for (int d : dims) {
        Vec v(d);
        for (double& x : v) x = U(rng);
        t.push_back(std::move(v));
    }
    return t;
}

Morph Ops::box(const BoxSig& sig) {
    auto it = boxes.find(sig.name);
    if (it == boxes.end()) throw ModelError("unbound box " + sig.name);
    return it->second;
}

namespace {

Eigen::MatrixXd read_matrix(const nlohmann::json& j, int rows, int cols, const std::string& what) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    if (j.is_null()) return M;
    if (static_cast<int>(j.size()) != rows) throw ModelError(what + ": expected " + std::to_string(rows) + " rows");
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) throw ModelError(what + ": expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) M(r, c) = j[r][c].get<double>();
    }
    return M;
}

Eigen::VectorXd read_vector(const nlohmann::json& j, int n, const std::string& what) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (j.is_null()) return v;
    if (static_cast<int>(j.size()) != n) throw ModelError(what + ": expected " + std::to_string(n) + " entries");
    for (int r = 0; r < n; ++r) v(r) = j[r].get<double>();
    return v;
}

}  // namespace

Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs) {
    Ops ops;
    for (auto& [atom, n] : j.at("atoms").items()) ops.dims[atom] = n.get<int>();
    if (j.contains("tol")) ops.tol = j["tol"].get<double>();
    for (auto& [name, data] : j.at("boxes").items()) {
        auto s = sigs.find(name);
        if (s == sigs.end()) throw ModelError("binding for undeclared box " + name);
        auto in_dims = dims_of(s->second.inputs, ops.dims), out_dims = dims_of(s->second.outputs, ops.dims);
        int n = std::accumulate(in_dims.begin(), in_dims.end(), 0), m = std::accumulate(out_dims.begin(), out_dims.end(), 0);
        auto get = [&](const char* key) { return data.contains(key) ? data[key] : nlohmann::json(); };
        AffineSin a{read_matrix(get("M"), m, n, name + ".M"), read_matrix(get("N"), m, n, name + ".N"),
                    read_vector(get("offset"), m, name + ".offset"), read_vector(get("alpha"), m, name + ".alpha"),
                    read_vector(get("phase"), m, name + ".phase")};
        Morph f = from_affine_sin(a, in_dims, out_dims);
        const Split& sp = s->second.split;
        for (int jj : gate_list(sp.guarded_out)) {
            double row = 0;
            for (int i : gate_list(sp.unguarded_in)) row += (*f.lip)(jj, i);
            if (row >= 1) throw ModelError("box " + name + ": guarded output " + std::to_string(jj) + " is not contractive");
        }
        ops.boxes[name] = f;
    }
    return ops;
}

}  // namespace gtc::metric
