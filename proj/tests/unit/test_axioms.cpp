#include <doctest.h>

#include "gtc/axioms.hpp"
#include "gtc/guardedness.hpp"

using namespace gtc;

TEST_CASE("names") {
    for (Axiom a : all_axioms()) CHECK(parse_axiom(axiom_name(a)) == a);
    for (ModelKind m : all_models()) CHECK(parse_model(model_name(m)) == m);
    CHECK(parse_model("A") == ModelKind::finset);
    CHECK(parse_model("E") == ModelKind::flat);
    CHECK_FALSE(parse_model("F").has_value());
    CHECK(all_axioms().size() == 8);
    CHECK(exact_model(ModelKind::tot));
    CHECK_FALSE(exact_model(ModelKind::hilbert));
}

TEST_CASE("generated instances are well formed") {
    for (Axiom a : all_axioms()) {
        auto batch = gen_axiom_instances(a, 20, 99);
        CHECK(batch.size() == 20);
        for (const auto& inst : batch) {
            CHECK(inst.lhs->dom == inst.rhs->dom);
            CHECK(inst.lhs->cod == inst.rhs->cod);
            CHECK_MESSAGE(check_annotated(*inst.lhs, inst.claim).ok, axiom_name(a), " ", print_expr(*inst.lhs));
            CHECK_MESSAGE(check_annotated(*inst.rhs, inst.claim).ok, axiom_name(a), " ", print_expr(*inst.rhs));
        }
    }
}

TEST_CASE("generation is deterministic") {
    auto a = gen_axiom_instances(Axiom::sliding1, 5, 3), b = gen_axiom_instances(Axiom::sliding1, 5, 3);
    for (int i = 0; i < 5; ++i) CHECK(expr_equal(*a[i].lhs, *b[i].lhs));
}

TEST_CASE("every axiom holds in every model") {
    for (Axiom a : all_axioms())
        for (ModelKind m : all_models())
            for (const auto& inst : gen_axiom_instances(a, 10, 5)) {
                AxiomReport r = check_axiom(inst, m, 5);
                CHECK_MESSAGE(r.pass, axiom_name(a), "/", model_name(m), " #", inst.id, " ", r.error);
                if (exact_model(m)) CHECK(r.max_dev == 0);
                else CHECK(r.max_dev <= 1e-9);
                auto j = r.to_json();
                CHECK(j["verdict"] == (r.pass ? "pass" : "fail"));
            }
}
