#pragma once
// Random well-typed expressions and decorated diagrams for property tests.

#include <random>

#include "gtc/diagram.hpp"

namespace gtc {

using Rng = std::mt19937_64;

struct ExprGenConfig {
    int max_boxes = 8;
    int atom_kinds = 4;     // atoms drawn from A, B, C, D (first atom_kinds of them)
    int max_box_out = 2;
    double trace_prob = 0;  // chance of a trace node at each step (needs trace_budget)
    int trace_budget = 0;
};

// Type-directed generator. Fresh boxes get names f0, f1, ... and are recorded in sigs.
class ExprGen {
public:
    ExprGen(std::uint64_t seed, ExprGenConfig cfg);
    ExprPtr gen(const Object& dom);
    ExprPtr gen_any();  // random domain
    Object random_object(int lo, int hi);
    Split random_split(int n_in, int n_out);
    BoxSig fresh_box(const Object& in, const Object& out);
    // body ; k with k fresh and ending in the loop object, wrapped in a trace with a random annotation
    ExprPtr gen_trace(const Object& dom, int boxes);

    SigRegistry sigs;
    Rng rng;

private:
    ExprPtr gen_sized(const Object& dom, int boxes);
    ExprGenConfig cfg_;
    int fresh_ = 0;
    int traces_left_ = 0;
};

struct DiagramGenConfig {
    int max_boxes = 6;
    int max_loops = 3;
    int max_arity = 2;
    int atom_kinds = 2;
    bool ideal = true;  // only white or black boxes
};

// Random diagram: box arities, boundary sizes and a random bijection of sources onto targets.
// The claim is random as well and is written into the boundary decorations.
Diagram random_diagram(Rng& rng, const DiagramGenConfig& cfg);

// Diagrams for synthesis: ideally guarded, at most max_loops cycles, passing the path/loop condition.
Diagram random_synthesizable(Rng& rng, const DiagramGenConfig& cfg);
// Diagrams violating a synthesis hypothesis: a mixed box, an unguarded loop or an unguarded A-to-D path.
Diagram random_violating(Rng& rng, const DiagramGenConfig& cfg);

}  // namespace gtc
