#include "gtc/models/tot.hpp"

#include <algorithm>
#include <map>

namespace gtc::tot {

Gates gates_of(const Object& o, const Space& space) {
    Gates g;
    for (const auto& a : o.atoms) {
        auto it = space.find(a);
        if (it == space.end()) throw ModelError("no presheaf for atom " + a);
        g.push_back(it->second);
    }
    return g;
}

std::vector<Tuple> all_tuples(const Gates& g, int stage) {
    std::vector<Tuple> out{Tuple{}};
    for (const Presheaf& p : g) {
        std::vector<Tuple> next;
        for (const Tuple& t : out)
            for (int x = 0; x < p.size(stage); ++x) {
                Tuple u = t;
                u.push_back(x);
                next.push_back(std::move(u));
            }
        out = std::move(next);
    }
    return out;
}

int tuple_index(const Gates& g, int stage, const Tuple& t) {
    int idx = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (t[k] < 0 || t[k] >= g[k].size(stage)) throw ModelError("element out of range");
        idx = idx * g[k].size(stage) + t[k];
    }
    return idx;
}

Tuple down(const Gates& g, int stage, const Tuple& t) {
    Tuple r(t.size());
    for (std::size_t k = 0; k < g.size(); ++k) r[k] = g[k].down(stage, t[k]);
    return r;
}

bool valid(const Presheaf& p) {
    if (p.sizes.empty() || static_cast<int>(p.restrict.size()) != p.stages() - 1) return false;
    for (int n = 1; n < p.stages(); ++n) {
        const auto& r = p.restrict[n - 1];
        if (static_cast<int>(r.size()) != p.sizes[n]) return false;
        for (int x : r)
            if (x < 0 || x >= p.sizes[n - 1]) return false;
    }
    return true;
}

Presheaf random_presheaf(int stages, int max_size, std::mt19937_64& rng) {
    Presheaf p;
    std::uniform_int_distribution<int> first(1, max_size);
    p.sizes.push_back(first(rng));
    for (int n = 1; n < stages; ++n) {
        int prev = p.sizes.back();
        int s = std::uniform_int_distribution<int>(prev, std::max(prev, max_size))(rng);
        // surjective restriction: hit every element once, fill the rest randomly
        std::vector<int> r(s);
        for (int x = 0; x < s; ++x) r[x] = x < prev ? x : std::uniform_int_distribution<int>(0, prev - 1)(rng);
        std::shuffle(r.begin(), r.end(), rng);
        p.sizes.push_back(s);
        p.restrict.push_back(r);
    }
    return p;
}

Morph from_table(const Table& t, const Gates& in) {
    Morph m;
    m.n_in = static_cast<int>(in.size());
    m.n_out = t.empty() || t[0].empty() ? 0 : static_cast<int>(t[0][0].size());
    m.fn = [t, in](const Tuple& x, int stage) {
        if (stage < 1 || stage > static_cast<int>(t.size())) throw ModelError("stage out of range");
        return t[stage - 1].at(tuple_index(in, stage, x));
    };
    return m;
}

Table to_table(const Morph& f, const Gates& in, int stages) {
    Table t(stages);
    for (int n = 1; n <= stages; ++n)
        for (const Tuple& x : all_tuples(in, n)) t[n - 1].push_back(f(x, n));
    return t;
}

bool natural(const Morph& f, const Gates& in, const Gates& out, int stages) {
    for (int n = 2; n <= stages; ++n)
        for (const Tuple& x : all_tuples(in, n))
            if (down(out, n, f(x, n)) != f(down(in, n, x), n - 1)) return false;
    return true;
}

bool respects_split(const Morph& f, const Gates& in, const Split& s, int stages) {
    for (int n = 1; n <= stages; ++n) {
        std::map<Tuple, Tuple> seen;  // key: unguarded inputs restricted, guarded inputs as is
        for (const Tuple& x : all_tuples(in, n)) {
            Tuple key = x;
            for (int i : gate_list(s.unguarded_in)) key[i] = in[i].down(n, x[i]);
            Tuple y = f(x, n), dpart;
            for (int j : gate_list(s.guarded_out)) dpart.push_back(y[j]);
            auto [it, fresh] = seen.emplace(key, dpart);
            if (!fresh && it->second != dpart) return false;
        }
    }
    return true;
}

Table random_box(const BoxSig& sig, const Space& space, int stages, std::mt19937_64& rng) {
    Gates in = gates_of(sig.inputs, space), out = gates_of(sig.outputs, space);
    Table t(stages);
    for (int n = 1; n <= stages; ++n) {
        std::map<std::pair<Tuple, int>, int> guarded;  // (key, output gate) -> value
        for (const Tuple& x : all_tuples(in, n)) {
            Tuple prev;
            if (n > 1) prev = t[n - 2][tuple_index(in, n - 1, down(in, n, x))];
            Tuple key = x;
            for (int i : gate_list(sig.split.unguarded_in)) key[i] = in[i].down(n, x[i]);
            Tuple y(out.size());
            for (std::size_t j = 0; j < out.size(); ++j) {
                bool g = has_gate(sig.split.guarded_out, static_cast<int>(j));
                if (g) {
                    auto it = guarded.find({key, static_cast<int>(j)});
                    if (it != guarded.end()) {
                        y[j] = it->second;
                        continue;
                    }
                }
                std::vector<int> cand;
                for (int v = 0; v < out[j].size(n); ++v)
                    if (n == 1 || out[j].down(n, v) == prev[j]) cand.push_back(v);
                y[j] = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
                if (g) guarded[{key, static_cast<int>(j)}] = y[j];
            }
            t[n - 1].push_back(y);
        }
    }
    return t;
}

Morph trace(const Morph& f, const TraceShape& s, const Gates& loop) {
    cart::Solver<int> solve = [loop](const std::function<Tuple(const Tuple&)>& step, int stage) {
        std::vector<Tuple> fixed;
        for (const Tuple& u : all_tuples(loop, stage))
            if (step(u) == u) fixed.push_back(u);
        if (fixed.size() != 1)
            throw ModelError("stage " + std::to_string(stage) + ": feedback has " + std::to_string(fixed.size()) +
                             " fixpoints");
        return fixed[0];
    };
    return cart::trace(f, s, solve);
}

std::vector<int> tot_fixpoint(const std::function<int(int, int, int)>& g, const std::vector<int>& y) {
    std::vector<int> x;
    int prev = 0;
    for (std::size_t n = 1; n <= y.size(); ++n) {
        prev = g(static_cast<int>(n), y[n - 1], prev);
        x.push_back(prev);
    }
    return x;
}

bool equal(const Morph& f, const Morph& g, const Gates& in, int stages) {
    for (int n = 1; n <= stages; ++n)
        for (const Tuple& x : all_tuples(in, n))
            if (f(x, n) != g(x, n)) return false;
    return true;
}

Morph Ops::box(const BoxSig& sig) {
    auto it = boxes.find(sig.name);
    if (it == boxes.end()) throw ModelError("unbound box " + sig.name);
    return it->second;
}

Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs) {
    Ops ops;
    ops.stages = j.value("stages", 3);
    for (auto& [atom, p] : j.at("atoms").items()) {
        Presheaf ps{p.at("sizes").get<std::vector<int>>(), p.value("restrict", std::vector<std::vector<int>>{})};
        if (!valid(ps) || ps.stages() != ops.stages) throw ModelError("malformed presheaf for atom " + atom);
        ops.space[atom] = ps;
    }
    for (auto& [name, data] : j.at("boxes").items()) {
        auto s = sigs.find(name);
        if (s == sigs.end()) throw ModelError("binding for undeclared box " + name);
        Gates in = gates_of(s->second.inputs, ops.space), out = gates_of(s->second.outputs, ops.space);
        Table t = data.get<Table>();
        if (static_cast<int>(t.size()) != ops.stages) throw ModelError("box " + name + ": wrong number of stages");
        for (int n = 1; n <= ops.stages; ++n) {
            if (t[n - 1].size() != all_tuples(in, n).size()) throw ModelError("box " + name + ": table size mismatch");
            for (const Tuple& y : t[n - 1]) tuple_index(out, n, y);
        }
        Morph f = from_table(t, in);
        if (!natural(f, in, out, ops.stages)) throw ModelError("box " + name + " is not natural");
        if (!respects_split(f, in, s->second.split, ops.stages))
            throw ModelError("box " + name + ": guarded outputs read unguarded inputs too early");
        ops.boxes[name] = f;
    }
    return ops;
}

}  // namespace gtc::tot
