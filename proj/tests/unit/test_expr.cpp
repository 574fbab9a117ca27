#include <doctest.h>

#include "gtc/expr.hpp"
#include "gtc/gen.hpp"

using namespace gtc;

namespace {
SigRegistry sigs() {
    SigRegistry r;
    for (const char* d : {"f : A|I -> B|I", "g : B|I -> I|C", "h : A*U|I -> C|U"}) {
        BoxSig s = parse_box_decl(d);
        r[s.name] = s;
    }
    return r;
}
}  // namespace

TEST_CASE("composition and tensor profiles") {
    auto r = sigs();
    ExprPtr e = parse_expr("f ; g", r);
    CHECK(e->kind == ExprKind::comp);
    CHECK(e->dom.str() == "A");
    CHECK(e->cod.str() == "C");
    ExprPtr t = parse_expr("f (*) id[C] ; g (*) id[C]", r);
    CHECK(t->dom.str() == "A*C");
    CHECK(t->cod.str() == "C*C");
    ExprPtr s = parse_expr("sym[A,B*C]", r);
    CHECK(s->dom.str() == "A*B*C");
    CHECK(s->cod.str() == "B*C*A");
    CHECK_THROWS(parse_expr("g ; f", r));
    CHECK_THROWS_AS(parse_expr("f ; nope", r), std::exception);
    CHECK_THROWS_AS(parse_expr("f ; (g", r), ParseError);
}

TEST_CASE("trace shape and conclusion") {
    auto r = sigs();
    ExprPtr e = parse_expr("tr[U : A*U|I -> C|U]{ h }", r);
    REQUIRE(e->kind == ExprKind::trace);
    TraceShape s = e->shape();
    CHECK(s.a == 1);
    CHECK(s.u == 1);
    CHECK(s.b == 0);
    CHECK(s.c == 1);
    CHECK(s.d == 0);
    CHECK(e->dom.str() == "A");
    CHECK(e->cod.str() == "C");
    CHECK(e->conclusion() == prefix_split(1, 0, 1, 0));
    CHECK(has_trace(*e));
    CHECK(count_traces(*e) == 1);
    CHECK(expr_equal(*e, *make_trace(parse_object("U"), make_box(r.at("h")), 1, 1)));
    // the loop object must end the body codomain
    CHECK_THROWS(parse_expr("tr[B : A*U|I -> C|U]{ h }", r));
}

TEST_CASE("printing round-trips on random expressions") {
    ExprGenConfig cfg;
    cfg.trace_prob = 0.3;
    cfg.trace_budget = 2;
    ExprGen gen(11, cfg);
    for (int k = 0; k < 300; ++k) {
        ExprPtr e = gen.gen_any();
        ExprPtr back = parse_expr(print_expr(*e), gen.sigs);
        CHECK_MESSAGE(expr_equal(*e, *back), print_expr(*e).c_str());
        CHECK(back->dom == e->dom);
        CHECK(back->cod == e->cod);
    }
}

TEST_CASE("gtc files") {
    GtcFile f = parse_gtc(
        "# comment\n"
        "box f : A|I -> B|I\n"
        "box g : B|I -> I|C   # trailing\n"
        "let both = f ; g\n"
        "let again = f ; g ; id[C]\n");
    CHECK(f.sigs.size() == 2);
    CHECK(f.order == std::vector<std::string>{"both", "again"});
    CHECK(f.lets.at("again")->dom.str() == "A");
    std::string text = print_gtc(f.sigs, {{"both", f.lets.at("both")}});
    GtcFile g = parse_gtc(text);
    CHECK(expr_equal(*g.lets.at("both"), *f.lets.at("both")));
    CHECK_THROWS_AS(parse_gtc("box f : A|I -> B|I\nlet x = f ;\n"), ParseError);
}

TEST_CASE("claims") {
    Object dom = parse_object("A*B"), cod = parse_object("C");
    CHECK(parse_claim("A|B -> I|C", dom, cod) == prefix_split(1, 1, 0, 1));
    CHECK(parse_claim("I|A*B -> C|I", dom, cod) == weakest_split(2, 1));
    CHECK_THROWS(parse_claim("A|I -> I|C", dom, cod));
}
