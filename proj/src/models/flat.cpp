#include "gtc/models/flat.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace gtc::flat {

std::optional<int> Poset::bottom() const {
    for (int x = 0; x < n; ++x) {
        bool below_all = true;
        for (int y = 0; y < n; ++y) below_all = below_all && leq(x, y);
        if (below_all) return x;
    }
    return std::nullopt;
}

bool valid(const Poset& p) {
    if (static_cast<int>(p.le.size()) != p.n) return false;
    for (int a = 0; a < p.n; ++a) {
        if (static_cast<int>(p.le[a].size()) != p.n || !p.le[a][a]) return false;
        for (int b = 0; b < p.n; ++b) {
            if (a != b && p.le[a][b] && p.le[b][a]) return false;
            for (int c = 0; c < p.n; ++c)
                if (p.le[a][b] && p.le[b][c] && !p.le[a][c]) return false;
        }
    }
    return true;
}

Poset discrete(int n) {
    Poset p{n, std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    for (int a = 0; a < n; ++a) p.le[a][a] = 1;
    return p;
}

Poset chain(int n) {
    Poset p{n, std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) p.le[a][b] = 1;
    return p;
}

Poset lift(const Poset& p) {
    Poset r{p.n + 1, std::vector<std::vector<char>>(p.n + 1, std::vector<char>(p.n + 1, 0))};
    for (int b = 0; b <= p.n; ++b) r.le[0][b] = 1;
    for (int a = 0; a < p.n; ++a)
        for (int b = 0; b < p.n; ++b) r.le[a + 1][b + 1] = p.le[a][b];
    return r;
}

std::vector<int> decode(const std::vector<Poset>& ps, int index) {
    std::vector<int> d(ps.size());
    for (int k = static_cast<int>(ps.size()) - 1; k >= 0; --k) {
        d[k] = index % ps[k].n;
        index /= ps[k].n;
    }
    return d;
}

int encode(const std::vector<Poset>& ps, const std::vector<int>& digits) {
    int idx = 0;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (digits[k] < 0 || digits[k] >= ps[k].n) throw ModelError("element out of range");
        idx = idx * ps[k].n + digits[k];
    }
    return idx;
}

Poset product(const std::vector<Poset>& ps) {
    int n = 1;
    for (const Poset& p : ps) n *= p.n;
    Poset r{n, std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    for (int a = 0; a < n; ++a) {
        auto da = decode(ps, a);
        for (int b = 0; b < n; ++b) {
            auto db = decode(ps, b);
            bool le = true;
            for (std::size_t k = 0; k < ps.size() && le; ++k) le = ps[k].leq(da[k], db[k]);
            r.le[a][b] = le;
        }
    }
    return r;
}

std::vector<Poset> all_posets(int max_n) {
    std::vector<Poset> out;
    for (int n = 1; n <= max_n; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) pairs.push_back({a, b});
        std::set<std::string> seen;
        for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
            Poset p = discrete(n);
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if (mask & (1u << k)) p.le[pairs[k].first][pairs[k].second] = 1;
            if (!valid(p)) continue;
            // canonical form: smallest relation string over all relabelings
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::string best;
            do {
                std::string s;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += p.le[perm[a]][perm[b]] ? '1' : '0';
                if (best.empty() || s < best) best = s;
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (seen.insert(best).second) out.push_back(p);
        }
    }
    return out;
}

bool monotone(const Poset& X, const Poset& Y, const Map& f) {
    if (static_cast<int>(f.size()) != X.n) return false;
    for (int y : f)
        if (y < 0 || y >= Y.n) return false;
    for (int a = 0; a < X.n; ++a)
        for (int b = 0; b < X.n; ++b)
            if (X.leq(a, b) && !Y.leq(f[a], f[b])) return false;
    return true;
}

std::vector<int> linear_extension(const Poset& p) {
    std::vector<int> order(p.n), below(p.n, 0);
    std::iota(order.begin(), order.end(), 0);
    for (int a = 0; a < p.n; ++a)
        for (int b = 0; b < p.n; ++b) below[a] += p.leq(b, a);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return below[a] < below[b]; });
    return order;
}

std::vector<Map> all_monotone(const Poset& X, const Poset& Y) {
    std::vector<Map> out;
    auto order = linear_extension(X);
    Map f(X.n, -1);
    std::function<void(int)> go = [&](int k) {
        if (k == X.n) {
            out.push_back(f);
            return;
        }
        int x = order[k];
        for (int y = 0; y < Y.n; ++y) {
            bool ok = true;
            for (int k2 = 0; k2 < k && ok; ++k2) {
                int x2 = order[k2];
                if (X.leq(x2, x)) ok = Y.leq(f[x2], y);
            }
            if (!ok) continue;
            f[x] = y;
            go(k + 1);
        }
        f[x] = -1;
    };
    go(0);
    return out;
}

Map random_monotone(const Poset& X, const Poset& Y, std::mt19937_64& rng) {
    if (X.n > 0 && Y.n == 0) throw ModelError("no map into the empty poset");
    auto order = linear_extension(X);
    Map f(X.n, -1);
    long budget = 20000;
    std::function<bool(int)> go = [&](int k) {
        if (k == X.n) return true;
        if (--budget < 0) return false;
        int x = order[k];
        std::vector<int> cand;
        for (int y = 0; y < Y.n; ++y) {
            bool ok = true;
            for (int k2 = 0; k2 < k && ok; ++k2)
                if (X.leq(order[k2], x)) ok = Y.leq(f[order[k2]], y);
            if (ok) cand.push_back(y);
        }
        std::shuffle(cand.begin(), cand.end(), rng);
        for (int y : cand) {
            f[x] = y;
            if (go(k + 1)) return true;
        }
        f[x] = -1;
        return false;
    };
    if (!go(0)) f.assign(X.n, std::uniform_int_distribution<int>(0, Y.n - 1)(rng));
    return f;
}

std::optional<int> least_fixpoint(const Poset& P, const std::function<int(int)>& h) {
    std::vector<int> fixed;
    for (int x = 0; x < P.n; ++x)
        if (h(x) == x) fixed.push_back(x);
    for (int x : fixed)
        if (std::all_of(fixed.begin(), fixed.end(), [&](int y) { return P.leq(x, y); })) return x;
    return std::nullopt;
}

Gates gates_of(const Object& o, const Space& space) {
    Gates g;
    for (const auto& a : o.atoms) {
        auto it = space.find(a);
        if (it == space.end()) throw ModelError("no poset for atom " + a);
        g.push_back(it->second);
    }
    return g;
}

Morph from_table(const Map& table, const Gates& in, const Gates& out) {
    Morph m;
    m.n_in = static_cast<int>(in.size());
    m.n_out = static_cast<int>(out.size());
    m.fn = [table, in, out](const Tuple& x, int) { return decode(out, table.at(encode(in, x))); };
    return m;
}

namespace {

Gates pick(const Gates& g, const std::vector<int>& idx) {
    Gates r;
    for (int i : idx) r.push_back(g[i]);
    return r;
}

std::vector<int> pick_digits(const std::vector<int>& d, const std::vector<int>& idx) {
    std::vector<int> r;
    for (int i : idx) r.push_back(d[i]);
    return r;
}

}  // namespace

Map random_box(const BoxSig& sig, const Space& space, std::mt19937_64& rng) {
    Gates in = gates_of(sig.inputs, space), out = gates_of(sig.outputs, space);
    auto ug = gate_list(sig.split.unguarded_in), gd = gate_list(sig.split.guarded_in());
    auto co = gate_list(sig.split.unguarded_out()), dout = gate_list(sig.split.guarded_out);
    Poset PA = product(pick(in, ug)), PB = product(pick(in, gd));
    Gates Cg = pick(out, co), Dg = pick(out, dout);
    Map h = random_monotone(product({PA, PB}), product(Cg), rng);
    Map g = random_monotone(product({lift(PA), PB}), product(Dg), rng);
    Poset dom = product(in);
    Map table(dom.n);
    for (int x = 0; x < dom.n; ++x) {
        auto d = decode(in, x);
        int a = encode(pick(in, ug), pick_digits(d, ug)), b = encode(pick(in, gd), pick_digits(d, gd));
        auto yc = decode(Cg, h[encode({PA, PB}, {a, b})]);
        auto yd = decode(Dg, g[encode({lift(PA), PB}, {eta(a), b})]);
        std::vector<int> y(out.size());
        for (std::size_t k = 0; k < co.size(); ++k) y[co[k]] = yc[k];
        for (std::size_t k = 0; k < dout.size(); ++k) y[dout[k]] = yd[k];
        table[x] = encode(out, y);
    }
    return table;
}

bool factors_through_eta(const Map& table, const Gates& in, const Gates& out, const Split& s) {
    auto gd = gate_list(s.guarded_in()), dout = gate_list(s.guarded_out);
    Gates Bg = pick(in, gd), Dg = pick(out, dout);
    Poset PB = product(Bg), PD = product(Dg);
    // values of the guarded part for each guarded-input element b
    std::vector<std::vector<int>> values(PB.n);
    Poset dom = product(in);
    for (int x = 0; x < dom.n; ++x) {
        auto d = decode(in, x);
        int b = encode(Bg, pick_digits(d, gd));
        values[b].push_back(encode(Dg, pick_digits(decode(out, table[x]), dout)));
    }
    // need a monotone l : PB -> PD with l(b) below every value at b; it becomes g'(bottom, b)
    auto order = linear_extension(PB);
    Map l(PB.n, -1);
    std::function<bool(int)> go = [&](int k) {
        if (k == PB.n) return true;
        int b = order[k];
        for (int v = 0; v < PD.n; ++v) {
            bool ok = std::all_of(values[b].begin(), values[b].end(), [&](int w) { return PD.leq(v, w); });
            for (int k2 = 0; k2 < k && ok; ++k2)
                if (PB.leq(order[k2], b)) ok = PD.leq(l[order[k2]], v);
            if (!ok) continue;
            l[b] = v;
            if (go(k + 1)) return true;
        }
        l[b] = -1;
        return false;
    };
    return go(0);
}

Morph trace(const Morph& f, const TraceShape& s, const Gates& loop) {
    Poset P = product(loop);
    cart::Solver<int> solve = [loop, P](const std::function<Tuple(const Tuple&)>& step, int) {
        auto lfp = least_fixpoint(P, [&](int u) { return encode(loop, step(decode(loop, u))); });
        if (!lfp) throw ModelError("feedback has no least fixpoint");
        return decode(loop, *lfp);
    };
    return cart::trace(f, s, solve);
}

bool equal(const Morph& f, const Morph& g, const Gates& in) {
    Poset dom = product(in);
    for (int x = 0; x < dom.n; ++x) {
        auto t = decode(in, x);
        if (f(t) != g(t)) return false;
    }
    return true;
}

Morph Ops::box(const BoxSig& sig) {
    auto it = boxes.find(sig.name);
    if (it == boxes.end()) throw ModelError("unbound box " + sig.name);
    return it->second;
}

Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs) {
    Ops ops;
    for (auto& [atom, p] : j.at("atoms").items()) {
        Poset ps = discrete(p.at("n").get<int>());
        for (auto& pr : p.value("le", nlohmann::json::array())) {
            int a = pr.at(0).get<int>(), b = pr.at(1).get<int>();
            if (a < 0 || b < 0 || a >= ps.n || b >= ps.n) throw ModelError("order pair out of range for " + atom);
            ps.le[a][b] = 1;
        }
        for (int k = 0; k < ps.n; ++k)  // transitive closure
            for (int a = 0; a < ps.n; ++a)
                for (int b = 0; b < ps.n; ++b)
                    if (ps.le[a][k] && ps.le[k][b]) ps.le[a][b] = 1;
        if (!valid(ps)) throw ModelError("order on " + atom + " is not antisymmetric");
        ops.space[atom] = ps;
    }
    for (auto& [name, data] : j.at("boxes").items()) {
        auto s = sigs.find(name);
        if (s == sigs.end()) throw ModelError("binding for undeclared box " + name);
        Gates in = gates_of(s->second.inputs, ops.space), out = gates_of(s->second.outputs, ops.space);
        Map table = data.get<Map>();
        if (!monotone(product(in), product(out), table)) throw ModelError("box " + name + " is not monotone");
        if (!factors_through_eta(table, in, out, s->second.split))
            throw ModelError("box " + name + ": guarded outputs do not factor through eta");
        ops.boxes[name] = from_table(table, in, out);
    }
    return ops;
}

}  // namespace gtc::flat
