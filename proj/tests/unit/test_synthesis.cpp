#include <doctest.h>

#include "gtc/gen.hpp"
#include "gtc/synthesis.hpp"

using namespace gtc;

namespace {
int box_named(const Diagram& d, const std::string& name) {
    for (std::size_t i = 0; i < d.boxes.size(); ++i)
        if (d.boxes[i].sig.name == name) return static_cast<int>(i);
    return -1;
}

GtcFile fixture() {
    return parse_gtc(
        "box b : A*U|I -> I|C*U\n"
        "box w : I|C -> C|I\n"
        "box v : I|A -> A|I\n"
        "let loop = tr[U : A*U|I -> I|C*U]{ b ; (w (*) id[U]) }\n"
        "let white = v ; v\n");
}
}  // namespace

TEST_CASE("U and V sets") {
    GtcFile f = fixture();
    const Expr& e = *f.lets.at("loop");
    Split claim = parse_claim("A|I -> I|C", e.dom, e.cod);
    Diagram d = elaborate(e, claim);
    BoxSets uv = compute_UV(d, claim);
    int b = box_named(d, "b"), w = box_named(d, "w");
    // w feeds the guarded output directly; b only has guarded passages
    CHECK(uv.U[w]);
    CHECK_FALSE(uv.U[b]);
    CHECK_FALSE(uv.V[w]);
    CHECK_FALSE(uv.V[b]);

    auto cut = find_cut_wire(d, uv);
    REQUIRE(cut.has_value());
    CHECK(loop_wires(d)[*cut]);
    CHECK(d.wires[*cut].src.box == b);

    Diagram white = elaborate(*f.lets.at("white"));
    BoxSets wuv = compute_UV(white, weakest_split(1, 1));
    CHECK(std::none_of(wuv.U.begin(), wuv.U.end(), [](bool x) { return x; }));
}

TEST_CASE("opening a wire") {
    GtcFile f = fixture();
    const Expr& e = *f.lets.at("loop");
    Split claim = parse_claim("A|I -> I|C", e.dom, e.cod);
    Diagram d = elaborate(e, claim);
    auto cut = find_cut_wire(d, compute_UV(d, claim));
    REQUIRE(cut.has_value());
    OpenedDiagram o = open_wire(d, claim, *cut);
    CHECK(o.diagram.n_in() == d.n_in() + 1);
    CHECK(o.diagram.n_out() == d.n_out() + 1);
    CHECK(is_acyclic(o.diagram));
    CHECK(o.claim == prefix_split(2, 0, 0, 2));
    CHECK(geometric_check(o.diagram, o.claim).ok);
}

TEST_CASE("acyclic diagrams and permutations") {
    GtcFile f = fixture();
    Diagram d = elaborate(*f.lets.at("white"));
    CHECK(diagram_iso(elaborate(*acyclic_to_expr(d)), d));
    ExprPtr p = permutation_expr(parse_object("A*B*C"), {2, 0, 1});
    CHECK(p->dom.str() == "A*B*C");
    CHECK(p->cod.str() == "C*A*B");
}

TEST_CASE("synthesis of the fixture") {
    GtcFile f = fixture();
    const Expr& e = *f.lets.at("loop");
    Split claim = parse_claim("A|I -> I|C", e.dom, e.cod);
    Diagram d = elaborate(e, claim);
    ExprPtr s = synthesize(d, claim);
    CHECK(count_traces(*s) == 1);
    CHECK(check_annotated(*s, claim).ok);
    CHECK(diagram_iso(elaborate(*s, claim), d));
    // an acyclic input needs no trace
    Diagram white = elaborate(*f.lets.at("white"));
    CHECK_FALSE(has_trace(*synthesize(white, weakest_split(1, 1))));
}

TEST_CASE("synthesis round trip on random diagrams") {
    Rng rng(41);
    DiagramGenConfig cfg;
    for (int k = 0; k < 100; ++k) {
        Diagram d = random_synthesizable(rng, cfg);
        ExprPtr e = synthesize(d, d.claim());
        CHECK(check_annotated(*e, d.claim()).ok);
        CHECK(diagram_iso(elaborate(*e, d.claim()), d));
    }
}

TEST_CASE("violations carry witnesses") {
    Rng rng(43);
    DiagramGenConfig cfg;
    for (int k = 0; k < 60; ++k) {
        Diagram d = random_violating(rng, cfg);
        try {
            synthesize(d, d.claim());
            FAIL("synthesized a violating diagram");
        } catch (const SynthesisError& e) {
            const Witness& w = e.witness;
            if (w.kind == Witness::Kind::box)
                CHECK(d.boxes[w.box].sig.kind == BoxKind::mixed);
            else
                CHECK(is_unguarded_walk(d, w.wires, w.kind == Witness::Kind::loop));
        }
    }
}
