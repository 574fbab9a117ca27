#include <doctest.h>

#include <random>

#include "gtc/signature.hpp"

using namespace gtc;

TEST_CASE("gate sets") {
    CHECK(gate_count(0b1011) == 3);
    CHECK(gate_list(0b1010) == std::vector<int>{1, 3});
    CHECK(gate_set({0, 2}) == 0b101);
    CHECK(format_gates(0b101) == "{0,2}");
    CHECK(format_gates(0) == "{}");
    CHECK(all_gates(3) == 0b111);
    CHECK(all_gates(64) == ~GateSet{0});
    CHECK(subset_of(0b01, 0b11));
    CHECK_FALSE(subset_of(0b100, 0b011));
}

TEST_CASE("objects") {
    Object o = parse_object("A*B*A");
    CHECK(o.size() == 3);
    CHECK(o.str() == "A*B*A");
    CHECK(parse_object("I").empty());
    CHECK(Object{}.str() == "I");
    CHECK(o.slice(1, 2).str() == "B*A");
    CHECK((parse_object("A") + parse_object("B")).str() == "A*B");
    CHECK_THROWS_AS(parse_object("A**B"), ParseError);
    CHECK_FALSE(valid_atom("A B"));
    CHECK_FALSE(valid_atom(""));
    CHECK(valid_atom("X1"));
}

TEST_CASE("prefix splits") {
    Split s = prefix_split(1, 2, 1, 1);
    CHECK(s.n_in == 3);
    CHECK(s.n_out == 2);
    CHECK(s.unguarded_in == 0b001);
    CHECK(s.guarded_in() == 0b110);
    CHECK(s.guarded_out == 0b10);
    CHECK(s.unguarded_out() == 0b01);
    CHECK(is_prefix_form(s));
    CHECK_FALSE(is_prefix_form(make_split(2, 1, 0b10, 0)));
    CHECK(prefix_split(1, 1, 1, 1).str() == "{0}{1} -> {0}{1}");
}

TEST_CASE("box kinds") {
    CHECK(kind_of(prefix_split(2, 0, 0, 1)) == BoxKind::black);
    CHECK(kind_of(weakest_split(2, 1)) == BoxKind::white);
    CHECK(kind_of(prefix_split(1, 1, 0, 1)) == BoxKind::mixed);
}

TEST_CASE("weakening and duality on random splits") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        int n_in = rng() % 5, n_out = rng() % 5;
        Split s = make_split(n_in, n_out, rng() & all_gates(n_in), rng() & all_gates(n_out));
        GateSet di = rng() & s.unguarded_in, dout = rng() & s.guarded_out;
        Split w = weaken(s, di, dout);
        CHECK(claim_leq(w, s));
        CHECK(w.unguarded_in == (s.unguarded_in & ~di));
        CHECK(w.guarded_out == (s.guarded_out & ~dout));
        CHECK(weaken(s, 0, 0) == s);
        CHECK(dual_split(dual_split(s)) == s);
        if (s.guarded_in() != 0) CHECK_THROWS(weaken(s, s.guarded_in(), 0));
        Split d = dual_split(s);
        CHECK(d.n_in == s.n_out);
        CHECK(gate_count(d.unguarded_in) == gate_count(s.guarded_out));
        CHECK(gate_count(d.guarded_out) == gate_count(s.unguarded_in));
    }
}

TEST_CASE("box declarations") {
    BoxSig f = parse_box_decl("box f : A | B -> C | D*E");
    CHECK(f.name == "f");
    CHECK(f.inputs.str() == "A*B");
    CHECK(f.outputs.str() == "C*D*E");
    CHECK(f.split == prefix_split(1, 1, 1, 2));
    CHECK(f.kind == BoxKind::mixed);
    CHECK(parse_box_decl(f.decl()) == f);
    CHECK(parse_box_decl("g : A|I -> I|B").kind == BoxKind::black);
    CHECK_THROWS_AS(parse_box_decl("box f : A -> C"), ParseError);
    CHECK_THROWS_AS(format_object_split(parse_object("A*B"), parse_object("C"), make_split(2, 1, 0b10, 0)),
                    std::exception);
}
