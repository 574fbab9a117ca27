#include <doctest.h>

#include "gtc/gen.hpp"
#include "gtc/guardedness.hpp"

using namespace gtc;

namespace {
ExprPtr expr(const char* text, const char* decls) { return parse_gtc(std::string(decls) + "let e = " + text + "\n").lets.at("e"); }
}  // namespace

TEST_CASE("reachability through single boxes") {
    // reach is reflexive; look only from boundary inputs to boundary outputs
    auto across = [](const Diagram& d, bool expect) {
        WireIndex idx(d);
        auto reach = unguarded_reach(d);
        for (int i = 0; i < d.n_in(); ++i) {
            CHECK(reach[idx.from_boundary[i]][idx.from_boundary[i]]);
            for (int j = 0; j < d.n_out(); ++j) CHECK(reach[idx.from_boundary[i]][idx.to_boundary[j]] == expect);
        }
    };
    across(elaborate(*expr("b", "box b : A*B|I -> I|C*D\n")), false);
    across(elaborate(*expr("w", "box w : I|A*B -> C*D|I\n")), true);
}

TEST_CASE("single boxes against claims") {
    ExprPtr m = expr("m", "box m : A|B -> C|D\n");
    Diagram d = elaborate(*m);
    CHECK(geometric_check(d, m->sig.split).ok);
    ExprPtr w = expr("w", "box w : I|A -> B|I\n");
    CHECK_FALSE(geometric_check(elaborate(*w), make_split(1, 1, 1, 1)).ok);
    CHECK(geometric_check(elaborate(*w), make_split(1, 1, 1, 0)).ok);
    CHECK(geometric_check(elaborate(*w), make_split(1, 1, 0, 1)).ok);
}

TEST_CASE("derivable claims of identities and boxes") {
    ExprPtr id = expr("id[A]", "");
    auto c = derivable_splits(*id);
    CHECK(claim_in(c, make_split(1, 1, 1, 0)));
    CHECK(claim_in(c, make_split(1, 1, 0, 1)));
    CHECK_FALSE(claim_in(c, make_split(1, 1, 1, 1)));

    // a mixed box: its declared split and the two claims with an empty side
    ExprPtr m = expr("m", "box m : A|B -> C|D\n");
    auto mc = derivable_splits(*m);
    CHECK(claim_in(mc, prefix_split(1, 1, 1, 1)));
    CHECK(claim_in(mc, make_split(2, 2, 0b11, 0)));
    CHECK(claim_in(mc, make_split(2, 2, 0, 0b11)));
    CHECK_FALSE(claim_in(mc, make_split(2, 2, 0b10, 0b10)));
    CHECK(mc.size() == 3);

    // a white then a black box: the black box cuts every path
    ExprPtr chain = expr("w ; b", "box w : I|A -> B|I\nbox b : B|I -> I|C\n");
    CHECK(claim_in(derivable_splits(*chain), make_split(1, 1, 1, 1)));
    CHECK_THROWS(derivable_splits(*expr("tr[U : U|I -> I|U]{ k }", "box k : U|I -> I|U\n")));
}

TEST_CASE("derivable claims coincide with the path condition") {
    ExprGenConfig cfg;
    cfg.max_boxes = 5;
    ExprGen gen(23, cfg);
    for (int k = 0; k < 300; ++k) {
        ExprPtr e = gen.gen_any();
        Diagram d = elaborate(*e);
        auto max = derivable_splits(*e);
        int n = d.n_in() + d.n_out();
        for (GateSet bits = 0; bits < gate_bit(n); ++bits) {
            Split s = make_split(d.n_in(), d.n_out(), bits & all_gates(d.n_in()), bits >> d.n_in());
            CHECK_MESSAGE(claim_in(max, s) == geometric_check(d, s).ok, print_expr(*e), " under ", s.str());
            // trace-free: the annotated checker agrees as well
            CHECK(check_annotated(*e, s).ok == claim_in(max, s));
        }
    }
}

TEST_CASE("accepted claims are closed under weakening") {
    ExprGenConfig cfg;
    cfg.trace_prob = 0.4;
    cfg.trace_budget = 2;
    ExprGen gen(29, cfg);
    int accepted = 0;
    for (int k = 0; k < 300; ++k) {
        ExprPtr e = gen.gen_any();
        Split s = gen.random_split(e->dom.size(), e->cod.size());
        if (!check_annotated(*e, s).ok) continue;
        ++accepted;
        for (int t = 0; t < 4; ++t) {
            Split w = weaken(s, gen.rng() & s.unguarded_in, gen.rng() & s.guarded_out);
            CHECK(check_annotated(*e, w).ok);
        }
    }
    CHECK(accepted > 20);
}

TEST_CASE("witnesses and certificates") {
    GtcFile f = parse_gtc(
        "box f : A|I -> I|U\n"
        "box g : I|U -> C|I\n"
        "box k : A*U|I -> I|C*U\n"
        "let traced = tr[U : A*U|I -> C|U]{ (f (*) g) ; sym[U,C] }\n"
        "let good = tr[U : A*U|I -> I|C*U]{ k }\n");
    const Expr& t = *f.lets.at("traced");
    Split claim = parse_claim("A|I -> I|C", t.dom, t.cod);
    CheckResult r = check_annotated(t, claim);
    CHECK_FALSE(r.ok);
    CHECK(r.failed_node == "/");
    CHECK(r.witness.kind == Witness::Kind::path);
    CHECK(is_unguarded_walk(elaborate_layer(t, claim).diagram, r.witness.wires, false));
    CHECK(infer_annotations(t, claim) == nullptr);

    const Expr& g = *f.lets.at("good");
    CheckResult ok = check_annotated(g, claim);
    CHECK(ok.ok);
    CHECK(ok.certificate["layers"].size() == 2);
    // a wrong annotation is repaired by inference
    ExprPtr wrong = make_trace(g.left, g.body(), 1, 1);
    CHECK_FALSE(check_annotated(*wrong, claim).ok);
    ExprPtr fixed = infer_annotations(*wrong, claim);
    REQUIRE(fixed != nullptr);
    CHECK(check_annotated(*fixed, claim).ok);
}

TEST_CASE("loops") {
    GtcFile f = parse_gtc(
        "box w : I|A*U -> C*U|I\n"
        "box b : A*U|I -> I|C*U\n"
        "let bad = tr[U : A*U|I -> C|U]{ w }\n"
        "let fine = tr[U : A*U|I -> I|C*U]{ b }\n");
    Diagram bad = elaborate(*f.lets.at("bad"));
    CHECK_FALSE(find_unguarded_loop(bad).empty());
    CHECK(is_unguarded_walk(bad, find_unguarded_loop(bad), true));
    CHECK(find_unguarded_loop(elaborate(*f.lets.at("fine"))).empty());
    CHECK_FALSE(geometric_check(bad, weakest_split(1, 1)).ok);
}

TEST_CASE("exhaustive typability") {
    GtcFile f = parse_gtc(
        "box b : A*U|I -> I|C*U\n"
        "let fine = tr[U : A*U|I -> I|C*U]{ b }\n");
    Diagram d = elaborate(*f.lets.at("fine"));
    CHECK(typable_by_search(d, prefix_split(1, 0, 0, 1)));
}
