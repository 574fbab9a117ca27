#pragma once
// Morphisms of Cartesian models as functions on gate tuples, and the trace obtained from a fixpoint operator.
// Shared by the metric, topos-of-trees and poset models.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gtc/expr.hpp"

namespace gtc {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace cart {

template <class V>
using Tuple = std::vector<V>;

template <class V>
struct Morph {
    int n_in = 0, n_out = 0;
    // stage is used by the topos-of-trees model only
    std::function<Tuple<V>(const Tuple<V>&, int stage)> fn;
    // Gate-level Lipschitz bounds (n_out x n_in), metric model only.
    std::optional<Eigen::MatrixXd> lip;

    Tuple<V> operator()(const Tuple<V>& x, int stage = 0) const { return fn(x, stage); }
};

template <class V>
Morph<V> identity(int n) {
    Morph<V> m{n, n, [](const Tuple<V>& x, int) { return x; }, Eigen::MatrixXd::Identity(n, n)};
    return m;
}

template <class V>
Morph<V> symmetry(int a, int b) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(a + b, a + b);
    for (int i = 0; i < a; ++i) L(b + i, i) = 1;
    for (int i = 0; i < b; ++i) L(i, a + i) = 1;
    return {a + b, a + b,
            [a](const Tuple<V>& x, int) {
                Tuple<V> y(x.begin() + a, x.end());
                y.insert(y.end(), x.begin(), x.begin() + a);
                return y;
            },
            L};
}

// first ; second
template <class V>
Morph<V> compose(const Morph<V>& f, const Morph<V>& g) {
    if (f.n_out != g.n_in) throw ModelError("compose: arity mismatch");
    Morph<V> m{f.n_in, g.n_out, [f, g](const Tuple<V>& x, int s) { return g.fn(f.fn(x, s), s); }, std::nullopt};
    if (f.lip && g.lip) m.lip = Eigen::MatrixXd(*g.lip * *f.lip);
    return m;
}

template <class V>
Morph<V> tensor(const Morph<V>& f, const Morph<V>& g) {
    int fi = f.n_in;
    Morph<V> m{f.n_in + g.n_in, f.n_out + g.n_out,
               [f, g, fi](const Tuple<V>& x, int s) {
                   Tuple<V> y = f.fn(Tuple<V>(x.begin(), x.begin() + fi), s);
                   Tuple<V> z = g.fn(Tuple<V>(x.begin() + fi, x.end()), s);
                   y.insert(y.end(), z.begin(), z.end());
                   return y;
               },
               std::nullopt};
    if (f.lip && g.lip) {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m.n_out, m.n_in);
        L.topLeftCorner(f.n_out, f.n_in) = *f.lip;
        L.bottomRightCorner(g.n_out, g.n_in) = *g.lip;
        m.lip = L;
    }
    return m;
}

// Fixpoint of step : U -> U at a stage, as provided by the model.
template <class V>
using Solver = std::function<Tuple<V>(const std::function<Tuple<V>(const Tuple<V>&)>& step, int stage)>;

// Body (A x U) x B -> C x (D x U): feed the U outputs back through the model's fixpoint operator.
template <class V>
Morph<V> trace(const Morph<V>& f, const TraceShape& s, Solver<V> solve) {
    int a = s.a, u = s.u, b = s.b, cd = s.c + s.d;
    Morph<V> m{a + b, cd,
               [f, a, u, b, cd, solve](const Tuple<V>& x, int stage) {
                   auto plug = [&](const Tuple<V>& uu) {
                       Tuple<V> in(x.begin(), x.begin() + a);
                       in.insert(in.end(), uu.begin(), uu.end());
                       in.insert(in.end(), x.begin() + a, x.end());
                       return in;
                   };
                   auto step = [&](const Tuple<V>& uu) {
                       Tuple<V> y = f.fn(plug(uu), stage);
                       return Tuple<V>(y.begin() + cd, y.end());
                   };
                   Tuple<V> fixed = solve(step, stage);
                   Tuple<V> y = f.fn(plug(fixed), stage);
                   y.resize(cd);
                   return y;
               },
               std::nullopt};
    if (f.lip) {
        // Lipschitz bound of the traced map: L_xa + L_xu (I - L_uu)^-1 L_ua
        const Eigen::MatrixXd& L = *f.lip;
        std::vector<int> ins, outs;
        for (int i = 0; i < a; ++i) ins.push_back(i);
        for (int i = 0; i < b; ++i) ins.push_back(a + u + i);
        Eigen::MatrixXd Lxa(cd, a + b), Lxu(cd, u), Lua(u, a + b), Luu(u, u);
        for (int r = 0; r < cd; ++r) {
            for (int k = 0; k < a + b; ++k) Lxa(r, k) = L(r, ins[k]);
            for (int k = 0; k < u; ++k) Lxu(r, k) = L(r, a + k);
        }
        for (int r = 0; r < u; ++r) {
            for (int k = 0; k < a + b; ++k) Lua(r, k) = L(cd + r, ins[k]);
            for (int k = 0; k < u; ++k) Luu(r, k) = L(cd + r, a + k);
        }
        Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(u, u) - Luu).inverse();
        m.lip = Eigen::MatrixXd(Lxa + Lxu * inv * Lua);
    }
    return m;
}

}  // namespace cart
}  // namespace gtc
