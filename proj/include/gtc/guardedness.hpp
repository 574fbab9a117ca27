#pragma once
// Guardedness typing: path criterion on diagrams, structural derivation, annotated checking.

#include <string>
#include <vector>

#include <json.hpp>

#include "gtc/diagram.hpp"

namespace gtc {

// A passage through a box is guarded iff it enters at an unguarded input and leaves at a guarded output.
bool guarded_passage(const BoxSig& sig, int in_port, int out_port);

// reach[v][w] = an unguarded path leads from wire v to wire w (v itself included).
// Wires stand for ports: every port carries exactly one wire.
std::vector<std::vector<bool>> unguarded_reach(const Diagram& d);
// Boundary view: m[i][j] = unguarded path from boundary input i to boundary output j.
std::vector<std::vector<bool>> boundary_reach(const Diagram& d);

struct Witness {
    enum class Kind { none, path, loop, box } kind = Kind::none;
    std::vector<int> wires;  // the offending path or loop, as wire indices
    int box = -1;            // for Kind::box
    std::string text;
};

struct GeoResult {
    bool ok = true;
    Witness witness;
};

GeoResult geometric_check(const Diagram& d, const Split& claim);
// First unguarded path from a gate in `from` to a gate in `to`, as wires; empty when none exists.
std::vector<int> find_unguarded_path(const Diagram& d, GateSet from, GateSet to);
std::vector<int> find_unguarded_loop(const Diagram& d);
// True iff the listed wires form an unguarded path/loop in d (used to validate witnesses).
bool is_unguarded_walk(const Diagram& d, const std::vector<int>& wires, bool closed);
std::string render_walk(const Diagram& d, const std::vector<int>& wires);

// Maximal derivable claims of a trace-free expression; the set of derivable claims is their downward closure.
struct Claim {
    GateSet unguarded_in = 0;
    GateSet guarded_out = 0;
    bool operator==(const Claim&) const = default;
};
std::vector<Claim> derivable_splits(const Expr& e);
bool claim_in(const std::vector<Claim>& maximal, const Split& s);

struct CheckResult {
    bool ok = true;
    nlohmann::json certificate;
    Witness witness;
    std::string failed_node;
};

// Layer-by-layer check; traced subterms are opaque boxes carrying their conclusion split.
CheckResult check_annotated(const Expr& e, const Split& claim);

// Try all output splits C|D of up to three trace nodes; returns the first annotated expression that checks.
ExprPtr infer_annotations(const Expr& e, const Split& claim);

// Exhaustive search for any traced expression inducing d that checks under claim.
// Enumerates which boxes each trace node encloses, which wires it feeds back and its conclusion split.
// Identity wires passing through a trace body are never enclosed: they only add unguarded passages.
// Limited to diagrams with at most six boxes.
bool typable_by_search(const Diagram& d, const Split& claim);

}  // namespace gtc
