#include "gtc/axioms.hpp"

#include <random>
#include <set>

#include "gtc/guardedness.hpp"
#include "gtc/models/eval.hpp"
#include "gtc/models/finset.hpp"
#include "gtc/models/flat.hpp"
#include "gtc/models/hilbert.hpp"
#include "gtc/models/metric.hpp"
#include "gtc/models/tot.hpp"

namespace gtc {

const std::vector<Axiom>& all_axioms() {
    static const std::vector<Axiom> v{Axiom::vanishing1, Axiom::vanishing2, Axiom::sliding1,    Axiom::sliding2,
                                      Axiom::sliding3,   Axiom::superposing, Axiom::tightening, Axiom::yanking};
    return v;
}

const std::vector<ModelKind>& all_models() {
    static const std::vector<ModelKind> v{ModelKind::finset, ModelKind::metric, ModelKind::tot, ModelKind::hilbert,
                                          ModelKind::flat};
    return v;
}

const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::vanishing1: return "vanishing1";
        case Axiom::vanishing2: return "vanishing2";
        case Axiom::sliding1: return "sliding1";
        case Axiom::sliding2: return "sliding2";
        case Axiom::sliding3: return "sliding3";
        case Axiom::superposing: return "superposing";
        case Axiom::tightening: return "tightening";
        case Axiom::yanking: return "yanking";
    }
    return "?";
}

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::finset: return "finset";
        case ModelKind::metric: return "metric";
        case ModelKind::tot: return "tot";
        case ModelKind::hilbert: return "hilbert";
        case ModelKind::flat: return "flat";
    }
    return "?";
}

std::optional<Axiom> parse_axiom(const std::string& s) {
    for (Axiom a : all_axioms())
        if (s == axiom_name(a)) return a;
    return std::nullopt;
}

std::optional<ModelKind> parse_model(const std::string& s) {
    static const char* letters[] = {"A", "B", "C", "D", "E"};
    for (std::size_t k = 0; k < all_models().size(); ++k)
        if (s == model_name(all_models()[k]) || s == letters[k]) return all_models()[k];
    return std::nullopt;
}

bool exact_model(ModelKind m) { return m == ModelKind::finset || m == ModelKind::tot || m == ModelKind::flat; }

// ---------------------------------------------------------------- instance generation

namespace {

struct Builder {
    std::mt19937_64 rng;
    int max_width;
    SigRegistry sigs;
    int fresh = 0;

    Object obj(int lo, int hi) {
        static const char* pool[] = {"P", "Q"};
        Object o;
        int n = std::uniform_int_distribution<int>(lo, hi)(rng);
        for (int i = 0; i < n; ++i) o.atoms.push_back(pool[std::uniform_int_distribution<int>(0, 1)(rng)]);
        return o;
    }
    Object side() { return obj(0, max_width); }
    Object loop() { return obj(1, 1); }

    ExprPtr box(const std::string& stem, const Object& a, const Object& b, const Object& c, const Object& d) {
        std::string name = stem + std::to_string(fresh++);
        BoxSig s = make_sig(name, a + b, c + d, prefix_split(a.size(), b.size(), c.size(), d.size()));
        sigs[name] = s;
        return make_box(s);
    }
    ExprPtr any_box(const std::string& stem, const Object& in, const Object& out) {
        std::string name = stem + std::to_string(fresh++);
        GateSet ug = 0, g = 0;
        for (int i = 0; i < in.size(); ++i)
            if (std::bernoulli_distribution(0.5)(rng)) ug |= gate_bit(i);
        for (int j = 0; j < out.size(); ++j)
            if (std::bernoulli_distribution(0.5)(rng)) g |= gate_bit(j);
        BoxSig s = make_sig(name, in, out, make_split(in.size(), out.size(), ug, g));
        sigs[name] = s;
        return make_box(s);
    }
};

ExprPtr tens(std::initializer_list<ExprPtr> parts) { return tensor_all(std::vector<ExprPtr>(parts)); }

AxiomInstance build(Axiom ax, Builder& B) {
    AxiomInstance inst{ax, 0, nullptr, nullptr, {}, {}};
    Object A = B.side(), Bo = B.side(), C = B.side(), D = B.side(), U = B.loop();
    switch (ax) {
        case Axiom::vanishing1: {
            ExprPtr f = B.box("f", A, Bo, C, D);
            inst.lhs = make_trace(Object{}, f, A.size(), C.size());
            inst.rhs = f;
            break;
        }
        case Axiom::vanishing2: {
            Object V = B.loop();
            ExprPtr f = B.box("f", A + U + V, Bo, C, D + U + V);
            inst.lhs = make_trace(U + V, f, A.size(), C.size());
            inst.rhs = make_trace(U, make_trace(V, f, A.size() + U.size(), C.size()), A.size(), C.size());
            break;
        }
        case Axiom::superposing: {
            Object E = B.side(), F = B.side();
            ExprPtr f = B.box("f", A + U, Bo, C, D + U);
            ExprPtr g = B.any_box("g", E, F);
            inst.lhs = make_tensor(make_trace(U, f, A.size(), C.size()), g);
            ExprPtr body = make_comp(make_tensor(f, g), make_tensor(make_id(C + D), make_sym(U, F)));
            inst.rhs = make_trace(U, body, A.size(), C.size());
            inst.claim = prefix_split(A.size(), Bo.size() + E.size(), C.size(), D.size() + F.size());
            return inst;
        }
        case Axiom::tightening: {
            Object A2 = B.side(), B2 = B.side(), C2 = B.side(), D2 = B.side();
            ExprPtr ha = B.any_box("h", A2, A), hb = B.any_box("h", B2, Bo);
            ExprPtr gc = B.any_box("k", C, C2), gd = B.any_box("k", D, D2);
            ExprPtr f = B.box("f", A + U, Bo, C, D + U);
            ExprPtr body = make_comp(make_comp(tens({ha, make_id(U), hb}), f), tens({gc, gd, make_id(U)}));
            inst.lhs = make_trace(U, body, A2.size(), C2.size());
            inst.rhs = make_comp(make_comp(make_tensor(ha, hb), make_trace(U, f, A.size(), C.size())), make_tensor(gc, gd));
            inst.claim = prefix_split(A2.size(), B2.size(), C2.size(), D2.size());
            return inst;
        }
        case Axiom::yanking: {
            // loop input passes straight to the output, the outer input straight into the loop
            inst.lhs = make_trace(U, make_id(U + U), 0, U.size());
            inst.rhs = make_id(U);
            inst.claim = prefix_split(0, U.size(), U.size(), 0);
            return inst;
        }
        case Axiom::sliding1: {
            // g carries the guard on the loop; f has its loop input guarded
            Object U2 = B.loop();
            ExprPtr f = B.box("f", A, U + Bo, C, U2);
            ExprPtr g = B.box("g", U2, Object{}, Object{}, U);
            inst.lhs = make_trace(U, make_comp(f, make_tensor(make_id(C), g)), A.size(), C.size());
            inst.rhs = make_trace(U2, make_comp(tens({make_id(A), g, make_id(Bo)}), f), A.size(), C.size());
            inst.claim = prefix_split(A.size(), Bo.size(), C.size(), 0);
            return inst;
        }
        case Axiom::sliding2: {
            // the rotated configuration: no unguarded side input, f's new loop output unguarded
            Object U2 = B.loop();
            ExprPtr f = B.box("f", U, Bo, C + U2, D);
            ExprPtr g = B.box("g", U2, Object{}, Object{}, U);
            ExprPtr swap = make_tensor(make_id(C), make_sym(U2, D));
            inst.lhs = make_trace(U, make_comp(make_comp(f, swap), make_tensor(make_id(C + D), g)), 0, C.size());
            inst.rhs = make_trace(U2, make_comp(make_comp(make_tensor(g, make_id(Bo)), f), swap), 0, C.size());
            inst.claim = prefix_split(0, Bo.size(), C.size(), D.size());
            return inst;
        }
        case Axiom::sliding3: {
            // f guards everything it feeds back, g is arbitrary
            Object U2 = B.loop();
            ExprPtr f = B.box("f", A + U, Bo, C, D + U2);
            ExprPtr g = B.any_box("g", U2, U);
            inst.lhs = make_trace(U, make_comp(f, make_tensor(make_id(C + D), g)), A.size(), C.size());
            inst.rhs = make_trace(U2, make_comp(tens({make_id(A), g, make_id(Bo)}), f), A.size(), C.size());
            break;
        }
    }
    inst.claim = prefix_split(A.size(), Bo.size(), C.size(), D.size());
    return inst;
}

}  // namespace

std::vector<AxiomInstance> gen_axiom_instances(Axiom axiom, int count, std::uint64_t seed, int max_width) {
    Builder B{std::mt19937_64(seed * 1000003u + static_cast<int>(axiom)), max_width, {}, 0};
    std::vector<AxiomInstance> out;
    for (int k = 0; k < count; ++k) {
        B.sigs.clear();
        AxiomInstance inst = build(axiom, B);
        inst.id = k;
        inst.sigs = B.sigs;
        out.push_back(std::move(inst));
    }
    return out;
}

// ---------------------------------------------------------------- checking

nlohmann::json AxiomReport::to_json() const {
    nlohmann::json j{{"axiom", axiom_name(axiom)}, {"model", model_name(model)}, {"seed", seed}, {"instance", id},
                     {"verdict", pass ? "pass" : "fail"}, {"max_dev", max_dev}};
    if (!error.empty()) j["error"] = error;
    return j;
}

namespace {

std::set<std::string> atoms_of(const AxiomInstance& inst) {
    std::set<std::string> s;
    for (const auto& [name, sig] : inst.sigs) {
        s.insert(sig.inputs.atoms.begin(), sig.inputs.atoms.end());
        s.insert(sig.outputs.atoms.begin(), sig.outputs.atoms.end());
    }
    for (const Object* o : {&inst.lhs->dom, &inst.lhs->cod, &inst.lhs->left}) s.insert(o->atoms.begin(), o->atoms.end());
    // loop objects of trace nodes
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        s.insert(e.left.atoms.begin(), e.left.atoms.end());
        s.insert(e.right.atoms.begin(), e.right.atoms.end());
        if (e.first) walk(*e.first);
        if (e.second) walk(*e.second);
    };
    walk(*inst.lhs);
    walk(*inst.rhs);
    return s;
}

std::vector<BoxSig> sig_list(const SigRegistry& r) {
    std::vector<BoxSig> v;
    for (const auto& [n, s] : r) v.push_back(s);
    return v;
}

void check_finset(const AxiomInstance& inst, std::mt19937_64& rng, AxiomReport& rep) {
    finset::Ops ops;
    for (const auto& a : atoms_of(inst)) ops.cards[a] = std::uniform_int_distribution<int>(0, 2)(rng);
    ops.cards = finset::feasible_cards(sig_list(inst.sigs), ops.cards);
    for (const auto& [name, sig] : inst.sigs) ops.boxes[name] = finset::random_box(sig, ops.cards, rng);
    bool same = eval_expr(*inst.lhs, ops) == eval_expr(*inst.rhs, ops);
    rep.pass = same;
    rep.max_dev = same ? 0 : 1;
}

void check_metric(const AxiomInstance& inst, std::mt19937_64& rng, AxiomReport& rep) {
    metric::Ops ops;
    for (const auto& a : atoms_of(inst)) ops.dims[a] = std::uniform_int_distribution<int>(1, 2)(rng);
    for (const auto& [name, sig] : inst.sigs) {
        auto a = metric::random_affine_sin(sig, ops.dims, rng);
        ops.boxes[name] = metric::from_affine_sin(a, metric::dims_of(sig.inputs, ops.dims), metric::dims_of(sig.outputs, ops.dims));
    }
    auto l = eval_expr(*inst.lhs, ops), r = eval_expr(*inst.rhs, ops);
    auto dims = metric::dims_of(inst.lhs->dom, ops.dims);
    double dev = 0;
    for (int k = 0; k < 100; ++k) {
        auto x = metric::random_point(dims, rng);
        dev = std::max(dev, metric::max_rel_dev(l(x), r(x)));
    }
    rep.max_dev = dev;
    rep.pass = dev <= kRelTol;
}

void check_tot(const AxiomInstance& inst, std::mt19937_64& rng, AxiomReport& rep) {
    tot::Ops ops;
    ops.stages = 3;
    for (const auto& a : atoms_of(inst)) ops.space[a] = tot::random_presheaf(ops.stages, 2, rng);
    for (const auto& [name, sig] : inst.sigs)
        ops.boxes[name] = tot::from_table(tot::random_box(sig, ops.space, ops.stages, rng), tot::gates_of(sig.inputs, ops.space));
    bool same = tot::equal(eval_expr(*inst.lhs, ops), eval_expr(*inst.rhs, ops), tot::gates_of(inst.lhs->dom, ops.space),
                           ops.stages);
    rep.pass = same;
    rep.max_dev = same ? 0 : 1;
}

void check_hilbert(const AxiomInstance& inst, std::mt19937_64& rng, AxiomReport& rep) {
    hilbert::Ops ops;
    for (const auto& a : atoms_of(inst)) ops.dims[a] = std::uniform_int_distribution<int>(1, 2)(rng);
    for (const auto& [name, sig] : inst.sigs) {
        auto in = hilbert::dims_of(sig.inputs, ops.dims), out = hilbert::dims_of(sig.outputs, ops.dims);
        ops.boxes[name] = {in, out, hilbert::random_matrix(hilbert::prod(out), hilbert::prod(in), rng)};
    }
    rep.max_dev = hilbert::max_rel_dev(eval_expr(*inst.lhs, ops).m, eval_expr(*inst.rhs, ops).m);
    rep.pass = rep.max_dev <= kRelTol;
}

void check_flat(const AxiomInstance& inst, std::mt19937_64& rng, AxiomReport& rep) {
    static const std::vector<flat::Poset> posets = flat::all_posets(3);
    flat::Ops ops;
    for (const auto& a : atoms_of(inst))
        ops.space[a] = posets[std::uniform_int_distribution<std::size_t>(0, posets.size() - 1)(rng)];
    for (const auto& [name, sig] : inst.sigs)
        ops.boxes[name] = flat::from_table(flat::random_box(sig, ops.space, rng), flat::gates_of(sig.inputs, ops.space),
                                           flat::gates_of(sig.outputs, ops.space));
    bool same = flat::equal(eval_expr(*inst.lhs, ops), eval_expr(*inst.rhs, ops), flat::gates_of(inst.lhs->dom, ops.space));
    rep.pass = same;
    rep.max_dev = same ? 0 : 1;
}

}  // namespace

AxiomReport check_axiom(const AxiomInstance& inst, ModelKind model, std::uint64_t seed) {
    AxiomReport rep{inst.axiom, model, seed, inst.id, false, 0, ""};
    std::mt19937_64 rng(seed * 7919u + static_cast<std::uint64_t>(inst.id) * 131u + static_cast<int>(model));
    try {
        for (const ExprPtr& side : {inst.lhs, inst.rhs}) {
            CheckResult c = check_annotated(*side, inst.claim);
            if (!c.ok) throw ModelError("instance does not type-check: " + c.witness.text);
        }
        switch (model) {
            case ModelKind::finset: check_finset(inst, rng, rep); break;
            case ModelKind::metric: check_metric(inst, rng, rep); break;
            case ModelKind::tot: check_tot(inst, rng, rep); break;
            case ModelKind::hilbert: check_hilbert(inst, rng, rep); break;
            case ModelKind::flat: check_flat(inst, rng, rep); break;
        }
    } catch (const std::exception& e) {
        rep.pass = false;
        rep.error = e.what();
    }
    return rep;
}

}  // namespace gtc
