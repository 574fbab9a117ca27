#pragma once
// From ideally guarded cyclic diagrams back to annotated traced expressions.

#include <optional>
#include <stdexcept>
#include <vector>

#include "gtc/guardedness.hpp"

namespace gtc {

struct BoxSets {
    std::vector<bool> U;  // boxes with an unguarded path from their inputs to a claimed-guarded output
    std::vector<bool> V;  // boxes with an unguarded path from a claimed-unguarded input to their outputs
};
BoxSets compute_UV(const Diagram& d, const Split& claim);

// A wire on some loop whose source box is outside V and whose target box is outside U.
// Smallest (source box, source port) wins.
std::optional<int> find_cut_wire(const Diagram& d, const BoxSets& uv);

// Cut a wire of a diagram whose claim is in prefix form (a unguarded inputs first, d guarded outputs last).
// The opened target becomes a new unguarded input right after the a unguarded ones,
// the opened source a new guarded output at the end.
struct OpenedDiagram {
    Diagram diagram;
    Split claim;
};
OpenedDiagram open_wire(const Diagram& d, const Split& prefix_claim, int wire);

// Trace-free expression inducing an acyclic diagram.
ExprPtr acyclic_to_expr(const Diagram& d);

// Expression for the wire permutation taking `from` (list of atoms) to target order: result position k holds
// from[perm[k]].
ExprPtr permutation_expr(const Object& from, const std::vector<int>& perm);

class SynthesisError : public std::runtime_error {
public:
    SynthesisError(const std::string& msg, Witness w) : std::runtime_error(msg), witness(std::move(w)) {}
    Witness witness;
};

// Throws SynthesisError when d is not ideally guarded or fails the path/loop condition.
ExprPtr synthesize(const Diagram& d, const Split& claim);

}  // namespace gtc
