#include "gtc/models/finset.hpp"

#include <numeric>

namespace gtc::finset {

namespace {

int total(const std::vector<int>& sizes) { return std::accumulate(sizes.begin(), sizes.end(), 0); }

std::vector<int> slice(const std::vector<int>& v, int from, int count) {
    return std::vector<int>(v.begin() + from, v.begin() + from + count);
}

}  // namespace

Elem Morph::operator()(const Elem& x) const { return map.at(flatten(in_sizes, x)); }

int flatten(const std::vector<int>& sizes, const Elem& e) {
    if (e.gate < 0 || e.gate >= static_cast<int>(sizes.size()) || e.value < 0 || e.value >= sizes[e.gate])
        throw ModelError("element out of range");
    int off = 0;
    for (int g = 0; g < e.gate; ++g) off += sizes[g];
    return off + e.value;
}

Elem unflatten(const std::vector<int>& sizes, int index) {
    for (int g = 0; g < static_cast<int>(sizes.size()); ++g) {
        if (index < sizes[g]) return {g, index};
        index -= sizes[g];
    }
    throw ModelError("index out of range");
}

std::vector<int> sizes_of(const Object& o, const Cards& cards) {
    std::vector<int> s;
    for (const auto& a : o.atoms) {
        auto it = cards.find(a);
        if (it == cards.end()) throw ModelError("no cardinality for atom " + a);
        s.push_back(it->second);
    }
    return s;
}

Morph identity(const std::vector<int>& sizes) {
    Morph m{sizes, sizes, {}};
    for (int i = 0; i < total(sizes); ++i) m.map.push_back(unflatten(sizes, i));
    return m;
}

Morph symmetry(const std::vector<int>& a, const std::vector<int>& b) {
    Morph m;
    m.in_sizes = a;
    m.in_sizes.insert(m.in_sizes.end(), b.begin(), b.end());
    m.out_sizes = b;
    m.out_sizes.insert(m.out_sizes.end(), a.begin(), a.end());
    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    for (int i = 0; i < total(m.in_sizes); ++i) {
        Elem e = unflatten(m.in_sizes, i);
        m.map.push_back(e.gate < na ? Elem{nb + e.gate, e.value} : Elem{e.gate - na, e.value});
    }
    return m;
}

Morph compose(const Morph& f, const Morph& g) {
    if (f.out_sizes != g.in_sizes) throw ModelError("compose: type mismatch");
    Morph m{f.in_sizes, g.out_sizes, {}};
    for (const Elem& y : f.map) m.map.push_back(g(y));
    return m;
}

Morph tensor(const Morph& f, const Morph& g) {
    Morph m;
    m.in_sizes = f.in_sizes;
    m.in_sizes.insert(m.in_sizes.end(), g.in_sizes.begin(), g.in_sizes.end());
    m.out_sizes = f.out_sizes;
    m.out_sizes.insert(m.out_sizes.end(), g.out_sizes.begin(), g.out_sizes.end());
    m.map = f.map;
    int shift = static_cast<int>(f.out_sizes.size());
    for (Elem e : g.map) m.map.push_back({e.gate + shift, e.value});
    return m;
}

std::vector<int> finset_iter(const std::vector<int>& f, int ny) {
    for (std::size_t x = 0; x < f.size(); ++x)
        if (f[x] >= ny) throw ModelError("iteration: element " + std::to_string(x) + " is sent back into the loop");
    return f;
}

Morph trace(const Morph& f, const TraceShape& s) {
    std::vector<int> A = slice(f.in_sizes, 0, s.a), U = slice(f.in_sizes, s.a, s.u),
                     B = slice(f.in_sizes, s.a + s.u, s.b);
    std::vector<int> CD = slice(f.out_sizes, 0, s.c + s.d);
    int nA = total(A), nU = total(U), nCD = total(CD);
    // h : U -> (C+D) + U
    std::vector<int> h(nU);
    for (int u = 0; u < nU; ++u) h[u] = flatten(f.out_sizes, f.map[nA + u]);
    std::vector<int> h_iter = finset_iter(h, nCD);

    Morph m;
    m.in_sizes = A;
    m.in_sizes.insert(m.in_sizes.end(), B.begin(), B.end());
    m.out_sizes = CD;
    for (int x = 0; x < total(m.in_sizes); ++x) {
        int body_x = x < nA ? x : x + nU;
        int y = flatten(f.out_sizes, f.map[body_x]);
        if (y >= nCD) y = h_iter[y - nCD];
        m.map.push_back(unflatten(CD, y));
    }
    return m;
}

bool consistent(const Morph& f, const Split& s) {
    for (std::size_t i = 0; i < f.map.size(); ++i) {
        Elem x = unflatten(f.in_sizes, static_cast<int>(i));
        if (has_gate(s.unguarded_in, x.gate) && has_gate(s.guarded_out, f.map[i].gate)) return false;
    }
    return true;
}

Cards feasible_cards(const std::vector<BoxSig>& sigs, Cards cards) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const BoxSig& sig : sigs) {
            int out_all = 0, out_ug = 0;
            for (int j = 0; j < sig.outputs.size(); ++j) {
                out_all += cards[sig.outputs.atoms[j]];
                if (!has_gate(sig.split.guarded_out, j)) out_ug += cards[sig.outputs.atoms[j]];
            }
            for (int i = 0; i < sig.inputs.size(); ++i) {
                int& c = cards[sig.inputs.atoms[i]];
                bool stuck = out_all == 0 || (has_gate(sig.split.unguarded_in, i) && out_ug == 0);
                if (c > 0 && stuck) {
                    c = 0;
                    changed = true;
                }
            }
        }
    }
    return cards;
}

Morph random_box(const BoxSig& sig, const Cards& cards, std::mt19937_64& rng) {
    Morph m{sizes_of(sig.inputs, cards), sizes_of(sig.outputs, cards), {}};
    std::vector<Elem> any, unguarded;
    for (int i = 0; i < total(m.out_sizes); ++i) {
        Elem e = unflatten(m.out_sizes, i);
        any.push_back(e);
        if (!has_gate(sig.split.guarded_out, e.gate)) unguarded.push_back(e);
    }
    for (int i = 0; i < total(m.in_sizes); ++i) {
        Elem x = unflatten(m.in_sizes, i);
        const auto& pool = has_gate(sig.split.unguarded_in, x.gate) ? unguarded : any;
        if (pool.empty()) throw ModelError("no consistent table for box " + sig.name);
        m.map.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    }
    return m;
}

Morph Ops::box(const BoxSig& sig) {
    auto it = boxes.find(sig.name);
    if (it == boxes.end()) throw ModelError("unbound box " + sig.name);
    return it->second;
}

Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs) {
    Ops ops;
    for (auto& [atom, n] : j.at("atoms").items()) ops.cards[atom] = n.get<int>();
    for (auto& [name, table] : j.at("boxes").items()) {
        auto s = sigs.find(name);
        if (s == sigs.end()) throw ModelError("binding for undeclared box " + name);
        Morph m{sizes_of(s->second.inputs, ops.cards), sizes_of(s->second.outputs, ops.cards), {}};
        for (auto& e : table) {
            Elem y{e.at(0).get<int>(), e.at(1).get<int>()};
            flatten(m.out_sizes, y);  // range check
            m.map.push_back(y);
        }
        if (static_cast<int>(m.map.size()) != total(m.in_sizes)) throw ModelError("table size mismatch for " + name);
        if (!consistent(m, s->second.split)) throw ModelError("table for " + name + " violates its split");
        ops.boxes[name] = m;
    }
    return ops;
}

nlohmann::json to_json(const Morph& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.map.size(); ++i) {
        Elem x = unflatten(m.in_sizes, static_cast<int>(i));
        rows.push_back({{"in", {x.gate, x.value}}, {"out", {m.map[i].gate, m.map[i].value}}});
    }
    return rows;
}

}  // namespace gtc::finset
