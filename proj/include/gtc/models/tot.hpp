#pragma once
// Presheaves on the first N stages of the natural numbers (finite sets, restriction maps).
// Guarded outputs see the unguarded inputs one stage late, i.e. through next.

#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "gtc/models/cartesian.hpp"

namespace gtc::tot {

struct Presheaf {
    std::vector<int> sizes;                  // sizes[n-1] = |X(n)|
    std::vector<std::vector<int>> restrict;  // restrict[n-1][x] : X(n+1) -> X(n)

    int stages() const { return static_cast<int>(sizes.size()); }
    int size(int stage) const { return sizes[stage - 1]; }
    // X(stage) -> X(stage-1); stage 1 maps everything to the single point of the terminal stage 0
    int down(int stage, int x) const { return stage == 1 ? 0 : restrict[stage - 2][x]; }
};

using Space = std::map<std::string, Presheaf>;
using Tuple = cart::Tuple<int>;
using Morph = cart::Morph<int>;
using Gates = std::vector<Presheaf>;

Gates gates_of(const Object& o, const Space& space);
// All tuples at a stage, gate 0 most significant; tuple_index inverts it.
std::vector<Tuple> all_tuples(const Gates& g, int stage);
int tuple_index(const Gates& g, int stage, const Tuple& t);
Tuple down(const Gates& g, int stage, const Tuple& t);

Presheaf random_presheaf(int stages, int max_size, std::mt19937_64& rng);
bool valid(const Presheaf& p);

// Stage tables: table[n-1][tuple_index(input)] = output tuple.
using Table = std::vector<std::vector<Tuple>>;
Morph from_table(const Table& t, const Gates& in);
Table to_table(const Morph& f, const Gates& in, int stages);

bool natural(const Morph& f, const Gates& in, const Gates& out, int stages);
// Guarded outputs at stage n depend on unguarded inputs only through their restriction to stage n-1.
bool respects_split(const Morph& f, const Gates& in, const Split& s, int stages);
Table random_box(const BoxSig& sig, const Space& space, int stages, std::mt19937_64& rng);

// Stagewise unique fixpoint of the feedback; throws ModelError if a stage has zero or several.
Morph trace(const Morph& f, const TraceShape& s, const Gates& loop);

// Guarded recursion from a witness g : Y x X(n-1) -> X(n) with f(y, x) = g(y, x restricted):
// x(1) = g(y(1), *), x(n+1) = g(y(n+1), x(n)) along the restrictions of y.
// y is a compatible family (y[n-1] at stage n).
std::vector<int> tot_fixpoint(const std::function<int(int stage, int y, int x_prev)>& g, const std::vector<int>& y);

bool equal(const Morph& f, const Morph& g, const Gates& in, int stages);

struct Ops {
    using Morph = tot::Morph;
    Space space;
    int stages = 3;
    std::map<std::string, Morph> boxes;

    Morph box(const BoxSig& sig);
    Morph id(const Object& o) { return cart::identity<int>(o.size()); }
    Morph sym(const Object& a, const Object& b) { return cart::symmetry<int>(a.size(), b.size()); }
    Morph compose(const Morph& f, const Morph& g) { return cart::compose(f, g); }
    Morph tensor(const Morph& f, const Morph& g) { return cart::tensor(f, g); }
    Morph trace(const Morph& f, const TraceShape& s, const Object& loop) { return tot::trace(f, s, gates_of(loop, space)); }
};

// {"model":"tot","stages":3,"atoms":{"X":{"sizes":[1,2,2],"restrict":[[0,0],[0,1]]}},
//  "boxes":{"f":[[stage-1 outputs...],[stage-2 outputs...],...]}}
Ops load_bindings(const nlohmann::json& j, const SigRegistry& sigs);

}  // namespace gtc::tot
