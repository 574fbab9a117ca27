#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "gtc/models/hilbert.hpp"
#include "gtc/models/metric.hpp"
#include "gtc/suites.hpp"

namespace gtc::suites {

SuiteResult axiom_suite(const std::vector<ModelKind>& models, int per_axiom, std::uint64_t seed, int jobs,
                        std::vector<AxiomReport>* reports) {
    SuiteResult r{"axioms"};
    struct Task {
        const AxiomInstance* inst;
        ModelKind model;
    };
    std::vector<std::vector<AxiomInstance>> instances;
    std::vector<Task> tasks;
    for (Axiom a : all_axioms()) instances.push_back(gen_axiom_instances(a, per_axiom, seed));
    for (const auto& batch : instances)
        for (ModelKind m : models)
            for (const auto& inst : batch) tasks.push_back({&inst, m});

    std::vector<AxiomReport> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) out[k] = check_axiom(*tasks[k].inst, tasks[k].model, seed);
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    nlohmann::json summary;
    for (const AxiomReport& rep : out) {
        std::string key = std::string(axiom_name(rep.axiom)) + "/" + model_name(rep.model);
        auto& s = summary[key];
        if (s.is_null()) s = {{"instances", 0}, {"failures", 0}, {"max_dev", 0.0}};
        s["instances"] = s["instances"].get<int>() + 1;
        if (!rep.pass) s["failures"] = s["failures"].get<int>() + 1;
        s["max_dev"] = std::max(s["max_dev"].get<double>(), rep.max_dev);
        r.check(rep.pass, key + " #" + std::to_string(rep.id) + (rep.error.empty() ? "" : ": " + rep.error) +
                              " (max_dev " + std::to_string(rep.max_dev) + ")");
    }
    r.details = summary;
    if (reports) *reports = std::move(out);
    return r;
}

SuiteResult hilbert_suite(int trials, std::uint64_t seed) {
    using namespace hilbert;
    SuiteResult r{"hilbert"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(1, 2), loop(1, 3), wide(1, 3);
    double worst[4] = {0, 0, 0, 0};
    auto within = [&](int slot, const std::string& what, double dev) {
        worst[slot] = std::max(worst[slot], dev);
        r.check(dev <= kRelTol, what + " deviates by " + std::to_string(dev));
    };
    for (int t = 0; t < trials; ++t) {
        int A = small(rng), U = loop(rng), B = small(rng), C = small(rng), D = small(rng), E = wide(rng);
        Factorization w1 = random_factorization(A, U, B, C, D, E, rng);
        Mat f = recompose(w1, A, U, B, C, D);
        Factorization w2 = transform(w1, random_invertible(E, rng), A, U, D);
        Factorization w3 = canonical_factorization(f, A, U, B, C, D);
        Mat t1 = hs_factored_trace(w1, A, U, B, C, D);
        std::string tag = "trial " + std::to_string(t);

        within(0, tag + " second witness", std::max(max_rel_dev(t1, hs_factored_trace(w2, A, U, B, C, D)),
                                                    max_rel_dev(t1, hs_factored_trace(w3, A, U, B, C, D))));
        Mat sum = hs_sum_trace(f, A, U, B, C, D);
        within(1, tag + " factored vs summed", max_rel_dev(t1, sum));
        within(2, tag + " rotated basis", max_rel_dev(sum, hs_sum_trace(f, A, U, B, C, D, random_orthogonal(U, rng))));

        // trace of the transposed and swapped map against the swapped transpose of the trace
        Mat h = factor_permutation({A, U, B}, {2, 0, 1}) * f.transpose() * factor_permutation({D, U, C}, {2, 0, 1});
        Mat lhs = hs_sum_trace(h, D, U, C, B, A);
        Mat rhs = factor_permutation({A, B}, {1, 0}) * sum.transpose() * factor_permutation({D, C}, {1, 0});
        within(3, tag + " dagger", max_rel_dev(lhs, rhs));
    }

    // full trace of a 5 x 5 matrix with dyadic entries, so every summation order is exact
    Mat f(5, 5);
    std::normal_distribution<double> N(0, 1);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) f(i, j) = std::round(N(rng) * 1024) / 1024;
    double diag = 0;
    for (int i = 0; i < 5; ++i) diag += f(i, i);
    double by_sum = hs_sum_trace(f, 1, 5, 1, 1, 1)(0, 0);
    double by_factors = hs_factored_trace(canonical_factorization(f, 1, 5, 1, 1, 1), 1, 5, 1, 1, 1)(0, 0);
    r.check(by_sum == diag, "full trace by summation differs from the diagonal sum");
    r.check(by_factors == diag, "full trace through a witness differs from the diagonal sum");

    r.details = {{"trials", trials},
                 {"max_dev_witness", worst[0]},
                 {"max_dev_formulas", worst[1]},
                 {"max_dev_basis", worst[2]},
                 {"max_dev_dagger", worst[3]},
                 {"full_trace", diag}};
    return r;
}

SuiteResult banach_suite(int instances, std::uint64_t seed) {
    using namespace metric;
    SuiteResult r{"banach"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 3);
    const double tol = 1e-12;
    int max_iter = 0;
    double max_ratio = 0;
    for (int k = 0; k < instances; ++k) {
        Dims dims{{"A", dim(rng)}, {"U", dim(rng)}, {"B", dim(rng)}, {"C", dim(rng)}, {"D", dim(rng)}};
        BoxSig sig = make_sig("f", Object{{"A", "U", "B"}}, Object{{"C", "D", "U"}}, prefix_split(2, 1, 1, 2));
        auto in = dims_of(sig.inputs, dims), out = dims_of(sig.outputs, dims);
        Morph f = from_affine_sin(random_affine_sin(sig, dims, rng), in, out);
        double c = (*f.lip)(2, 1);
        Tuple x = random_point({in[0], in[2]}, rng, 3.0);
        auto step = [&](const Tuple& u) {
            Tuple y = f({x[0], u[0], x[1]});
            return Tuple{y[2]};
        };
        std::string tag = "instance " + std::to_string(k) + " (c=" + std::to_string(c) + ")";
        try {
            BanachResult b = banach_rec(step, {Vec(in[1], 0.0)}, c, tol);
            max_iter = std::max(max_iter, b.iterations);
            max_ratio = std::max(max_ratio, static_cast<double>(b.iterations) / b.bound);
            r.check(b.iterations <= b.bound, tag + ": " + std::to_string(b.iterations) + " iterations, bound " +
                                                 std::to_string(b.bound));
            r.check(sup_dist(b.point, step(b.point)) <= tol, tag + ": residual above tolerance");
        } catch (const std::exception& e) {
            r.check(false, tag + ": " + e.what());
        }
    }
    r.details = {{"instances", instances}, {"max_iterations", max_iter}, {"max_iterations_over_bound", max_ratio}};
    return r;
}

}  // namespace gtc::suites
