#pragma once
// Finite posets with monotone maps and the lifting monad T X = X + {bottom}.
// A map is guarded in some inputs when it factors through eta on them; the trace is a least fixpoint.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "gtc/models/cartesian.hpp"

namespace gtc::flat {

struct Poset {
    int n = 0;
    std::vector<std::vector<char>> le;  // le[a][b] = a <= b

    bool leq(int a, int b) const { return le[a][b]; }
    std::optional<int> bottom() const;
    bool operator==(const Poset&) const = default;
};

bool valid(const Poset& p);
Poset discrete(int n);
Poset chain(int n);
// Lifted poset: element 0 is bottom, eta(x) = x + 1.
Poset lift(const Poset& p);
inline int eta(int x) { return x + 1; }
// Product with gate 0 most significant.
Poset product(const std::vector<Poset>& ps);
std::vector<int> decode(const std::vector<Poset>& ps, int index);
int encode(const std::vector<Poset>& ps, const std::vector<int>& digits);
// All posets on 1..max_n elements, one per isomorphism class.
std::vector<Poset> all_posets(int max_n);

using Map = std::vector<int>;
bool monotone(const Poset& X, const Poset& Y, const Map& f);
std::vector<Map> all_monotone(const Poset& X, const Poset& Y);
Map random_monotone(const Poset& X, const Poset& Y, std::mt19937_64& rng);
// Elements in a linear extension order (each element after everything below it).
std::vector<int> linear_extension(const Poset& p);
// Least element among the fixpoints of h, if the fixpoints have one.
std::optional<int> least_fixpoint(const Poset& P, const std::function<int(int)>& h);

using Tuple = cart::Tuple<int>;
using Morph = cart::Morph<int>;
using Space = std::map<std::string, Poset>;
using Gates = std::vector<Poset>;

Gates gates_of(const Object& o, const Space& space);
Morph from_table(const Map& table, const Gates& in, const Gates& out);
// Unguarded-output part arbitrary monotone; guarded part g'(eta a, b) for a random monotone g'.
Map random_box(const BoxSig& sig, const Space& space, std::mt19937_64& rng);
// The guarded outputs admit a monotone g' on T(unguarded inputs) x guarded inputs.
bool factors_through_eta(const Map& table, const Gates& in, const Gates& out, const Split& s);

Morph trace(const Morph& f, const TraceShape& s, const Gates& loop);
bool equal(const Morph& f, const Morph& g, const Gates& in);

struct Ops {
    using Morph = flat::Morph;
    Space space;
    std::map<std::string, Morph> boxes;

    Morph box(const BoxSig& sig);
    Morph id(const Object& o) { return cart::identity<int>(o.size()); }
    Morph sym(const Object& a, const Object& b) { return cart::symmetry<int>(a.size(), b.size()); }
    Morph compose(const Morph& f, const Morph& g) { return cart::compose(f, g); }
    Morph tensor(const Morph& f, const Morph& g) { return cart::tensor(f, g); }
    Morph trace(const Morph& f, const TraceShape& s, const Object& loop) { return flat::trace(f, s, gates_of(loop, space)); }
};

// {"model":"flat","atoms":{"P":{"n":3,"le":[[0,1],[0,2]]}},"boxes":{"f":[out index per input index]}}
// "le" lists the strict covering or order pairs; reflexive-transitive closure is taken.
Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs);

}  // namespace gtc::flat
