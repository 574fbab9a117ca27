#pragma once
// Trace axiom instances as expression pairs, checked in each model.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtc/expr.hpp"

namespace gtc {

enum class Axiom { vanishing1, vanishing2, sliding1, sliding2, sliding3, superposing, tightening, yanking };
enum class ModelKind { finset, metric, tot, hilbert, flat };

const std::vector<Axiom>& all_axioms();
const std::vector<ModelKind>& all_models();
const char* axiom_name(Axiom a);
const char* model_name(ModelKind m);
std::optional<Axiom> parse_axiom(const std::string& s);
// Accepts the long names and the letters A..E.
std::optional<ModelKind> parse_model(const std::string& s);
bool exact_model(ModelKind m);

struct AxiomInstance {
    Axiom axiom;
    int id = 0;
    ExprPtr lhs, rhs;
    Split claim;  // both sides are checked against it
    SigRegistry sigs;
};

// max_width bounds the side objects A, B, C, D; loops are single atoms.
std::vector<AxiomInstance> gen_axiom_instances(Axiom axiom, int count, std::uint64_t seed, int max_width = 2);

struct AxiomReport {
    Axiom axiom;
    ModelKind model;
    std::uint64_t seed = 0;
    int id = 0;
    bool pass = false;
    double max_dev = 0;  // numeric models; 0 or 1 for exact ones
    std::string error;
    nlohmann::json to_json() const;
};

// Random bindings for every box of the instance (seeded), then both sides evaluated and compared.
AxiomReport check_axiom(const AxiomInstance& inst, ModelKind model, std::uint64_t seed);

}  // namespace gtc
