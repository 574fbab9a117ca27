#pragma once
// Finite sets under coproduct; guardedness is the vacuous one (unguarded inputs never reach guarded outputs).

#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtc/models/cartesian.hpp"

namespace gtc::finset {

using Cards = std::map<std::string, int>;

// Element of a coproduct of gates.
struct Elem {
    int gate = 0;
    int value = 0;
    auto operator<=>(const Elem&) const = default;
};

// Total function; map is indexed by flattened input elements (gate-major order).
struct Morph {
    std::vector<int> in_sizes, out_sizes;
    std::vector<Elem> map;

    Elem operator()(const Elem& x) const;
    bool operator==(const Morph&) const = default;
};

int flatten(const std::vector<int>& sizes, const Elem& e);
Elem unflatten(const std::vector<int>& sizes, int index);
std::vector<int> sizes_of(const Object& o, const Cards& cards);

Morph identity(const std::vector<int>& sizes);
Morph symmetry(const std::vector<int>& a, const std::vector<int>& b);
Morph compose(const Morph& f, const Morph& g);  // f ; g
Morph tensor(const Morph& f, const Morph& g);   // coproduct

// f : X -> Y + X with values in [0, ny) for Y and [ny, ny + |X|) for X.
// Guarded iff no value lands in X; then the iterate is the unique g with f = inl g.
std::vector<int> finset_iter(const std::vector<int>& f, int ny);

// Trace of (A+U)+B -> C+(D+U) from the iteration of its U-restriction.
Morph trace(const Morph& f, const TraceShape& s);

// Unguarded input elements must land in unguarded outputs.
bool consistent(const Morph& f, const Split& s);
// Shrink atom cardinalities until every signature admits a consistent total function.
Cards feasible_cards(const std::vector<BoxSig>& sigs, Cards cards);
Morph random_box(const BoxSig& sig, const Cards& cards, std::mt19937_64& rng);

struct Ops {
    using Morph = finset::Morph;
    Cards cards;
    std::map<std::string, finset::Morph> boxes;

    Morph box(const BoxSig& sig);
    Morph id(const Object& o) { return identity(sizes_of(o, cards)); }
    Morph sym(const Object& a, const Object& b) { return symmetry(sizes_of(a, cards), sizes_of(b, cards)); }
    Morph compose(const Morph& f, const Morph& g) { return finset::compose(f, g); }
    Morph tensor(const Morph& f, const Morph& g) { return finset::tensor(f, g); }
    Morph trace(const Morph& f, const TraceShape& s, const Object&) { return finset::trace(f, s); }
};

// {"model":"finset","atoms":{"A":2},"boxes":{"f":[[gate,value],...]}}
Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs);
nlohmann::json to_json(const Morph& m);

}  // namespace gtc::finset
