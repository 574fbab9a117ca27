#include <doctest.h>

#include "gtc/diagram.hpp"
#include "gtc/gen.hpp"
#include "gtc/guardedness.hpp"

using namespace gtc;

namespace {
GtcFile fixture() {
    return parse_gtc(
        "box f : A|I -> B|I\n"
        "box g : C|I -> I|D\n"
        "box h : A*U|I -> I|C*U\n"
        "let chain = f ; id[B]\n"
        "let swap_after = f (*) g ; sym[B,D]\n"
        "let swap_before = sym[A,C] ; g (*) f\n"
        "let looped = tr[U : A*U|I -> I|C*U]{ h }\n");
}
}  // namespace

TEST_CASE("elaboration of a composite") {
    GtcFile file = fixture();
    Diagram d = elaborate(*file.lets.at("chain"));
    CHECK(d.boxes.size() == 1);
    // in -> f, f -> out; the identity adds no box and no extra wire
    CHECK(d.wires.size() == 2);
    CHECK(d.n_in() == 1);
    CHECK(d.n_out() == 1);
    CHECK(is_acyclic(d));
    CHECK(count_cycles(d) == 0);
    CHECK_NOTHROW(validate(d));
}

TEST_CASE("symmetry is natural up to diagram isomorphism") {
    GtcFile file = fixture();
    Diagram a = elaborate(*file.lets.at("swap_after"));
    Diagram b = elaborate(*file.lets.at("swap_before"));
    CHECK(diagram_iso(a, b));
    CHECK_FALSE(diagram_iso(a, elaborate(*file.lets.at("chain"))));
}

TEST_CASE("a trace closes one loop") {
    GtcFile file = fixture();
    Diagram d = elaborate(*file.lets.at("looped"));
    CHECK_FALSE(is_acyclic(d));
    CHECK(count_cycles(d) == 1);
    auto lw = loop_wires(d);
    CHECK(std::count(lw.begin(), lw.end(), true) == 1);
    CHECK(d.n_in() == 1);
    CHECK(d.n_out() == 1);
}

TEST_CASE("trace-free expressions elaborate to acyclic diagrams") {
    ExprGen gen(3, ExprGenConfig{});
    for (int k = 0; k < 200; ++k) CHECK(is_acyclic(elaborate(*gen.gen_any())));
}

TEST_CASE("json round trip and reversal on random diagrams") {
    Rng rng(17);
    DiagramGenConfig cfg;
    cfg.ideal = false;
    for (int k = 0; k < 200; ++k) {
        Diagram d = random_diagram(rng, cfg);
        Diagram back = import_json(export_json(d));
        CHECK(diagram_iso(d, back));
        CHECK(back.claim() == d.claim());
        Diagram r = reverse_diagram(d);
        CHECK(r.n_in() == d.n_out());
        CHECK(count_cycles(r) == count_cycles(d));
        CHECK(diagram_iso(reverse_diagram(r), d));
        // the path/loop condition is stable under rotation
        CHECK(geometric_check(d, d.claim()).ok == geometric_check(r, dual_split(d.claim())).ok);
    }
}

TEST_CASE("malformed diagrams") {
    Diagram d = elaborate(*fixture().lets.at("chain"));
    d.wires.pop_back();
    CHECK_THROWS_AS(validate(d), DiagramError);
    CHECK_THROWS(import_json("{\"boxes\": []}"));
    CHECK_THROWS(import_json("not json"));
}

TEST_CASE("dot export") {
    Diagram d = elaborate(*fixture().lets.at("looped"));
    std::string dot = export_dot(d);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("h") != std::string::npos);
}
