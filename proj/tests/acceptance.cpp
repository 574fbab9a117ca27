// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>

#include "gtc/suites.hpp"

using namespace gtc;
using namespace gtc::suites;

namespace {

struct Criterion {
    int number;
    const char* what;
    std::function<std::vector<SuiteResult>()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t seed = 20240611;
    int jobs = std::max(1u, std::thread::hardware_concurrency());
    bool verbose = argc > 1 && std::string(argv[1]) == "-v";

    std::vector<Criterion> criteria{
        {1, "derivable claims match the path condition on 1000 trace-free expressions",
         [&] { return std::vector{typing_oracle(1000, seed)}; }},
        {2, "500 accepted traced expressions satisfy the path and loop condition",
         [&] { return std::vector{annotated_soundness(500, seed)}; }},
        {3, "counterexample fixtures behave as stated", [&] { return std::vector{counterexample_fixtures()}; }},
        {4, "synthesis round trip on 200 diagrams, witnesses on 50 violating ones",
         [&] { return std::vector{synthesis_round_trip(200, 50, seed)}; }},
        {5, "8 trace axioms x 50 instances in all five models",
         [&] { return std::vector{axiom_suite(all_models(), 50, seed, jobs)}; }},
        {6, "Conway laws and their implications for finite sets and truncated presheaves",
         [&] { return std::vector{conway_finset(), conway_tot(3)}; }},
        {7, "lifting-monad correspondence on all posets with at most 3 elements",
         [&] { return std::vector{flat_bridge(3)}; }},
        {8, "finite-dimensional partial trace properties", [&] { return std::vector{hilbert_suite(200, seed)}; }},
        {9, "Banach iteration within the a-priori bound on 100 instances",
         [&] { return std::vector{banach_suite(100, seed)}; }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::vector<SuiteResult> results;
        bool ok = true;
        std::string error;
        try {
            results = c.run();
        } catch (const std::exception& e) {
            ok = false;
            error = e.what();
        }
        long checks = 0;
        for (const auto& r : results) {
            ok = ok && r.pass();
            checks += r.checks;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%ld checks, %.1fs)\n", ok ? "PASS" : "FAIL", c.number, c.what, checks, secs);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (const auto& r : results) {
            if (verbose || !r.pass()) std::printf("    %s\n", r.to_json().dump().c_str());
        }
        std::fflush(stdout);
        failed += !ok;
    }
    return failed ? 1 : 0;
}
