#pragma once
// Property suites shared by the CLI `suite` command and the acceptance binary.
// Each suite counts individual checks and keeps the first few failures.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtc/axioms.hpp"

namespace gtc::suites {

struct SuiteResult {
    explicit SuiteResult(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    long checks = 0;
    long failures = 0;
    std::vector<std::string> samples;  // first failures, for the report
    nlohmann::json details = nlohmann::json::object();

    bool pass() const { return failures == 0 && checks > 0; }
    void check(bool ok, const std::string& what);
    nlohmann::json to_json() const;
};

// Trace-free random expressions: derivable claims coincide with the path condition, claim by claim.
SuiteResult typing_oracle(int expressions, std::uint64_t seed);
// Random traced expressions accepted by check_annotated also pass the path/loop condition.
SuiteResult annotated_soundness(int accepted, std::uint64_t seed);
// The two counterexample fixtures: typing not closed under equality, and a loop no cut can type.
SuiteResult counterexample_fixtures();
// synthesize then check and elaborate, on random diagrams; violating diagrams yield a valid witness.
SuiteResult synthesis_round_trip(int good, int bad, std::uint64_t seed);

// All axioms on the given models. Reports are ordered by (axiom, model, instance) regardless of jobs.
SuiteResult axiom_suite(const std::vector<ModelKind>& models, int per_axiom, std::uint64_t seed, int jobs,
                        std::vector<AxiomReport>* reports = nullptr);

// Guarded Conway iteration laws for the coproduct model, exhaustive over sets of size <= 2.
SuiteResult conway_finset();
// Guarded Conway recursion laws for truncated presheaves, exhaustive for up to max_stages stages.
SuiteResult conway_tot(int max_stages = 3);
// Least-fixpoint recursion on pointed posets against guarded recursion through the lifting monad.
SuiteResult flat_bridge(int max_n = 3);

// Finite-dimensional partial trace: witness and basis independence, both trace formulas, dagger.
SuiteResult hilbert_suite(int trials, std::uint64_t seed);
// Banach iteration stays within the a-priori bound on random contractive feedback.
SuiteResult banach_suite(int instances, std::uint64_t seed);

}  // namespace gtc::suites
