#pragma once
// Port graphs for (possibly cyclic) string diagrams.

#include <optional>
#include <string>
#include <vector>

#include "gtc/expr.hpp"

namespace gtc {

constexpr int kBoundary = -1;

// A wire runs from a source (boundary input or box output) to a target (box input or boundary output).
struct PortRef {
    int box = kBoundary;
    int port = 0;
    bool operator==(const PortRef&) const = default;
    auto operator<=>(const PortRef&) const = default;
};

struct Wire {
    PortRef src;
    PortRef dst;
    bool operator==(const Wire&) const = default;
};

struct BoundaryPort {
    std::string atom;
    bool guarded = false;
    bool operator==(const BoundaryPort&) const = default;
};

struct BoxInstance {
    std::string id;
    BoxSig sig;
};

struct Diagram {
    std::vector<BoxInstance> boxes;
    std::vector<Wire> wires;
    std::vector<BoundaryPort> in, out;

    int n_in() const { return static_cast<int>(in.size()); }
    int n_out() const { return static_cast<int>(out.size()); }
    // Split read off the boundary decorations.
    Split claim() const;
    void set_claim(const Split& s);
    bool ideally_guarded() const;
};

// Lookup tables from ports to wire indices.
struct WireIndex {
    std::vector<int> from_boundary;            // boundary input i -> wire
    std::vector<int> to_boundary;              // boundary output j -> wire
    std::vector<std::vector<int>> from_box;    // box b output p -> wire
    std::vector<std::vector<int>> to_box;      // box b input q -> wire
    explicit WireIndex(const Diagram& d);
    int source_wire(const PortRef& p) const;
    int target_wire(const PortRef& p) const;
};

class DiagramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every source and target carries exactly one wire and wire ends agree on atoms.
void validate(const Diagram& d);
std::string atom_of_source(const Diagram& d, const PortRef& p);
std::string atom_of_target(const Diagram& d, const PortRef& p);

// Elaborate an expression; boundary decorations follow the claim (default: nothing guarded).
Diagram elaborate(const Expr& e, const std::optional<Split>& claim = std::nullopt);

// Elaboration where each outermost trace node becomes one opaque box whose split is the node's conclusion.
struct Layer {
    Diagram diagram;
    std::vector<const Expr*> traces;  // traces[k] is box traces_box[k]
    std::vector<int> traces_box;
};
Layer elaborate_layer(const Expr& e, const std::optional<Split>& claim = std::nullopt);

bool diagram_iso(const Diagram& a, const Diagram& b);
Diagram reverse_diagram(const Diagram& d);

bool is_acyclic(const Diagram& d);
// Wires lying on some directed cycle through boxes.
std::vector<bool> loop_wires(const Diagram& d);
// Number of elementary cycles in the box graph (parallel wires counted separately), capped at limit.
int count_cycles(const Diagram& d, int limit = 1000);

std::string export_dot(const Diagram& d);
std::string export_json(const Diagram& d);
Diagram import_json(const std::string& text);

std::string describe_source(const Diagram& d, const PortRef& p);
std::string describe_target(const Diagram& d, const PortRef& p);

}  // namespace gtc
