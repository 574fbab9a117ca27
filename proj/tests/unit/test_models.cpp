#include <doctest.h>

#include <cmath>

#include "gtc/models/finset.hpp"
#include "gtc/models/flat.hpp"
#include "gtc/models/hilbert.hpp"
#include "gtc/models/metric.hpp"
#include "gtc/models/tot.hpp"

using namespace gtc;

TEST_CASE("finset: identity, composition, coproduct") {
    using namespace finset;
    Morph id = identity({2, 1});
    CHECK(id({1, 0}) == Elem{1, 0});
    CHECK(id({0, 1}) == Elem{0, 1});
    Morph s = symmetry({2}, {1});
    CHECK(s({0, 1}) == Elem{1, 1});
    CHECK(s({1, 0}) == Elem{0, 0});
    CHECK(compose(s, symmetry({1}, {2})) == identity({2, 1}));
    Morph t = tensor(identity({1}), s);
    CHECK(t.in_sizes == std::vector<int>{1, 2, 1});
    CHECK(t({2, 0}) == Elem{1, 0});
    CHECK(flatten({2, 3}, {1, 2}) == 4);
    CHECK(unflatten({2, 3}, 4) == Elem{1, 2});
}

TEST_CASE("finset: trace follows the loop once") {
    using namespace finset;
    // A -> U -> C
    Morph f{{1, 1}, {1, 1}, {Elem{1, 0}, Elem{0, 0}}};
    Morph t = trace(f, TraceShape{1, 1, 0, 1, 0});
    CHECK(t.in_sizes == std::vector<int>{1});
    CHECK(t({0, 0}) == Elem{0, 0});
    // U -> U never leaves the loop
    Morph g{{1, 1}, {1, 1}, {Elem{0, 0}, Elem{1, 0}}};
    CHECK_THROWS_AS(trace(g, TraceShape{1, 1, 0, 1, 0}), ModelError);
    CHECK(finset_iter({1, 0}, 2) == std::vector<int>{1, 0});
    CHECK_THROWS_AS(finset_iter({0, 2}, 2), ModelError);
    CHECK(consistent(g, prefix_split(1, 1, 1, 1)));
    CHECK_FALSE(consistent(f, prefix_split(1, 1, 1, 1)));
}

TEST_CASE("hilbert: Kronecker structure") {
    using namespace hilbert;
    Mat a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    Mat k = kron(a, b);
    CHECK(k(0, 1) == 1);
    CHECK(k(3, 2) == 4);
    CHECK(k(2, 3) == 4);
    CHECK(k(1, 2) == 2);
    CHECK(k(1, 3) == 0);
    Morph s = symmetry({2}, {3});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y)
            for (int r = 0; r < 6; ++r) CHECK(s.m(r, x * 3 + y) == (r == y * 2 + x ? 1.0 : 0.0));
    CHECK(compose(s, symmetry({3}, {2})).m.isIdentity());
}

TEST_CASE("hilbert: partial trace against the index formula") {
    using namespace hilbert;
    CHECK(hs_sum_trace(Mat::Identity(2, 2), 1, 2, 1, 1, 1)(0, 0) == 2.0);
    std::mt19937_64 rng(7);
    const int A = 2, U = 3, B = 1, C = 2, D = 2;
    Mat f = random_matrix(C * D * U, A * U * B, rng);
    Mat expect = Mat::Zero(C * D, A * B);
    for (int c = 0; c < C; ++c)
        for (int d = 0; d < D; ++d)
            for (int a = 0; a < A; ++a)
                for (int b = 0; b < B; ++b)
                    for (int u = 0; u < U; ++u)
                        expect(c * D + d, a * B + b) += f((c * D + d) * U + u, (a * U + u) * B + b);
    CHECK(max_rel_dev(hs_sum_trace(f, A, U, B, C, D), expect) <= 1e-12);
    Factorization w = canonical_factorization(f, A, U, B, C, D);
    CHECK(max_rel_dev(recompose(w, A, U, B, C, D), f) <= 1e-12);
    CHECK(max_rel_dev(hs_factored_trace(w, A, U, B, C, D), expect) <= 1e-12);
    Mat q = random_orthogonal(4, rng);
    CHECK(max_rel_dev(q * q.transpose(), Mat::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("metric: Banach iteration") {
    using namespace metric;
    CHECK(banach_bound(0.5, 1.0, 1e-3) == 12);
    auto step = [](const Tuple& u) { return Tuple{{(u[0][0] + 3) / 2}}; };
    BanachResult r = banach_rec(step, {{0.0}}, 0.5, 1e-12);
    CHECK(std::abs(r.point[0][0] - 3) <= 1e-11);
    CHECK(r.iterations <= r.bound);
    // a wrong declared factor runs past the bound
    auto slow = [](const Tuple& u) { return Tuple{{0.99 * u[0][0] + 1}}; };
    CHECK_THROWS_AS(banach_rec(slow, {{0.0}}, 0.5, 1e-12), ModelError);
}

TEST_CASE("metric: trace of an averaging loop") {
    using namespace metric;
    // body Y*X -> Z*Y, both outputs (x + y) / 2; the fixpoint is y = x
    AffineSin a{Eigen::MatrixXd::Constant(2, 2, 0.5), Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2),
                Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
    Morph f = from_affine_sin(a, {1, 1}, {1, 1});
    CHECK(std::abs((*f.lip)(1, 0) - 0.5) <= 1e-12);
    Morph t = trace(f, TraceShape{0, 1, 1, 1, 0}, {1}, 1e-12);
    for (double x : {-2.0, 0.0, 3.0}) CHECK(std::abs(t({{x}})[0][0] - x) <= 1e-9);
}

namespace {
// stage n holds 0..n, where n stands for "at least n"; restriction caps at n - 1
tot::Presheaf counter() { return {{2, 3, 4}, {{0, 1, 1}, {0, 1, 2, 2}}}; }
}  // namespace

TEST_CASE("tot: successor on the counter presheaf") {
    using namespace tot;
    Presheaf p = counter();
    CHECK(valid(p));
    CHECK_FALSE(valid(Presheaf{{2, 3}, {{0, 5, 1}}}));
    Gates g{p};
    cart::Morph<int> succ{1, 1, [](const Tuple& x, int n) { return Tuple{std::min(x[0] + 1, n)}; }, std::nullopt};
    CHECK(natural(succ, g, g, 3));
    cart::Morph<int> flip{1, 1, [](const Tuple& x, int n) { return Tuple{n == 1 ? 1 - x[0] : x[0]}; }, std::nullopt};
    CHECK_FALSE(natural(flip, g, g, 3));

    // feeding the successor back: the only fixpoint at stage n is n
    cart::Morph<int> body{1, 2, [](const Tuple& x, int n) { return Tuple{x[0], std::min(x[0] + 1, n)}; }, std::nullopt};
    cart::Morph<int> t = trace(body, TraceShape{0, 1, 0, 1, 0}, g);
    for (int n = 1; n <= 3; ++n) CHECK(t({}, n) == Tuple{n});
    cart::Morph<int> echo{1, 2, [](const Tuple& x, int) { return Tuple{x[0], x[0]}; }, std::nullopt};
    CHECK_THROWS_AS(trace(echo, TraceShape{0, 1, 0, 1, 0}, g)({}, 1), ModelError);
}

TEST_CASE("flat: posets and least fixpoints") {
    using namespace flat;
    Poset c2 = chain(2);
    CHECK(c2.n == 2);
    CHECK(c2.leq(0, 1));
    CHECK_FALSE(c2.leq(1, 0));
    CHECK(all_monotone(c2, c2).size() == 3);
    CHECK(all_monotone(discrete(2), c2).size() == 4);
    CHECK(lift(discrete(1)).n == 2);
    CHECK(lift(discrete(2)).leq(0, 2));
    CHECK_FALSE(lift(discrete(2)).leq(1, 2));
    CHECK(product({c2, c2}).n == 4);
    CHECK(least_fixpoint(chain(3), [](int x) { return std::max(x, 1); }) == 1);
    CHECK(least_fixpoint(chain(3), [](int x) { return x; }) == 0);

    Gates g{c2};
    cart::Morph<int> to_top{1, 2, [](const Tuple& x, int) { return Tuple{x[0], 1}; }, std::nullopt};
    CHECK(trace(to_top, TraceShape{0, 1, 0, 1, 0}, g)({}) == Tuple{1});
    cart::Morph<int> echo{1, 2, [](const Tuple& x, int) { return Tuple{x[0], x[0]}; }, std::nullopt};
    CHECK(trace(echo, TraceShape{0, 1, 0, 1, 0}, g)({}) == Tuple{0});
}

TEST_CASE("bindings") {
    SigRegistry sigs;
    BoxSig f = parse_box_decl("f : A|I -> I|A");
    BoxSig g = parse_box_decl("g : A|I -> A|I");
    sigs[f.name] = f;
    SigRegistry plain{{g.name, g}};
    auto fs = finset::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":2},"boxes":{"g":[[0,1],[0,0]]}})"), plain);
    CHECK(fs.boxes.at("g")({0, 0}) == finset::Elem{0, 1});
    // f would send an unguarded input into a guarded output
    CHECK_THROWS(finset::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":2},"boxes":{"f":[[0,1],[0,0]]}})"), sigs));
    auto hs = hilbert::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":2},"boxes":{"g":[[1,2],[3,4]]}})"), plain);
    CHECK(hs.boxes.at("g").m(1, 0) == 3);
    CHECK_THROWS(hilbert::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":2},"boxes":{"g":[[1,2]]}})"), plain));
    // A is unguarded, the output guarded: a slope of 1 is not contractive
    CHECK_THROWS_AS(metric::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":1},"boxes":{"f":{"M":[[1]]}}})"), sigs),
                    ModelError);
    CHECK_NOTHROW(metric::load_bindings(nlohmann::json::parse(R"({"atoms":{"A":1},"boxes":{"f":{"M":[[0.5]]}}})"), sigs));
}
