#include <algorithm>
#include <numeric>
#include <optional>

#include "gtc/gen.hpp"
#include "gtc/guardedness.hpp"
#include "gtc/suites.hpp"
#include "gtc/synthesis.hpp"

namespace gtc::suites {

void SuiteResult::check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (samples.size() < 5) samples.push_back(what);
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json j{{"suite", name}, {"pass", pass()}, {"checks", checks}, {"failures", failures}};
    if (!samples.empty()) j["samples"] = samples;
    if (!details.empty()) j["details"] = details;
    return j;
}

SuiteResult typing_oracle(int expressions, std::uint64_t seed) {
    SuiteResult r{"typing_oracle"};
    ExprGen gen(seed, ExprGenConfig{});
    long claims = 0;
    int max_gates = 0;
    for (int k = 0; k < expressions; ++k) {
        ExprPtr e = gen.gen_any();
        Diagram d = elaborate(*e);
        auto maximal = derivable_splits(*e);
        int n_in = d.n_in(), n_out = d.n_out(), n = n_in + n_out;
        max_gates = std::max(max_gates, n);
        bool all_agree = true;
        std::string first_bad;
        for (GateSet bits = 0; bits < gate_bit(n); ++bits) {
            Split s = make_split(n_in, n_out, bits & all_gates(n_in), bits >> n_in);
            bool derivable = claim_in(maximal, s);
            bool geometric = geometric_check(d, s).ok;
            ++claims;
            if (derivable != geometric && all_agree) {
                all_agree = false;
                first_bad = print_expr(*e) + " under " + s.str();
            }
        }
        r.check(all_agree, first_bad);
    }
    r.details = {{"expressions", expressions}, {"claims", claims}, {"max_boundary_gates", max_gates}};
    return r;
}

SuiteResult annotated_soundness(int accepted, std::uint64_t seed) {
    SuiteResult r{"annotated_soundness"};
    ExprGenConfig cfg;
    cfg.max_boxes = 6;
    cfg.trace_prob = 0.5;
    cfg.trace_budget = 3;
    ExprGen gen(seed, cfg);
    int got = 0, tried = 0, traces = 0;
    const int max_tries = accepted * 200;
    while (got < accepted && tried < max_tries) {
        ++tried;
        ExprPtr e = gen.gen_any();
        if (!has_trace(*e)) continue;
        // a few random claims; the weakest one is checked last
        std::vector<Split> claims;
        for (int t = 0; t < 6; ++t) claims.push_back(gen.random_split(e->dom.size(), e->cod.size()));
        claims.push_back(weakest_split(e->dom.size(), e->cod.size()));
        for (const Split& s : claims) {
            if (!check_annotated(*e, s).ok) continue;
            ++got;
            traces += count_traces(*e);
            GeoResult g = geometric_check(elaborate(*e, s), s);
            r.check(g.ok, print_expr(*e) + " under " + s.str() + ": " + g.witness.text);
            break;
        }
    }
    r.check(got >= accepted, "only " + std::to_string(got) + " accepted traced expressions generated");
    r.details = {{"accepted", got}, {"generated", tried}, {"trace_nodes", traces}};
    return r;
}

namespace {

// Smallest two-box single-atom diagram passing the path/loop condition that no annotated expression types.
std::optional<std::pair<Diagram, Split>> search_untypable_loop(long& examined) {
    auto obj = [&](int n) {
        Object o;
        for (int i = 0; i < n; ++i) o.atoms.push_back("X");
        return o;
    };
    for (int total = 4; total <= 8; ++total)
        for (int i0 = 1; i0 <= 2; ++i0)
            for (int o0 = 1; o0 <= 2; ++o0)
                for (int i1 = 1; i1 <= 2; ++i1)
                    for (int o1 = 1; o1 <= 2; ++o1) {
                        if (i0 + o0 + i1 + o1 != total) continue;
                        for (GateSet s0 = 0; s0 < gate_bit(i0 + o0); ++s0)
                            for (GateSet s1 = 0; s1 < gate_bit(i1 + o1); ++s1) {
                                BoxSig f = make_sig("f", obj(i0), obj(o0),
                                                    make_split(i0, o0, s0 & all_gates(i0), s0 >> i0));
                                BoxSig g = make_sig("g", obj(i1), obj(o1),
                                                    make_split(i1, o1, s1 & all_gates(i1), s1 >> i1));
                                // an ideally guarded pair is always typable
                                if (f.kind != BoxKind::mixed && g.kind != BoxKind::mixed) continue;
                                for (int n_in = 0; n_in <= 2; ++n_in) {
                                    int n_out = n_in + o0 + o1 - i0 - i1;
                                    if (n_out < 0 || n_out > 2) continue;
                                    std::vector<PortRef> sources, targets;
                                    for (int i = 0; i < n_in; ++i) sources.push_back({kBoundary, i});
                                    for (int p = 0; p < o0; ++p) sources.push_back({0, p});
                                    for (int p = 0; p < o1; ++p) sources.push_back({1, p});
                                    for (int j = 0; j < n_out; ++j) targets.push_back({kBoundary, j});
                                    for (int q = 0; q < i0; ++q) targets.push_back({0, q});
                                    for (int q = 0; q < i1; ++q) targets.push_back({1, q});
                                    std::vector<int> perm(sources.size());
                                    std::iota(perm.begin(), perm.end(), 0);
                                    do {
                                        Diagram d;
                                        d.boxes = {{"f", f}, {"g", g}};
                                        d.in.assign(n_in, {"X", false});
                                        d.out.assign(n_out, {"X", false});
                                        bool through = false;
                                        for (std::size_t t = 0; t < targets.size(); ++t) {
                                            const PortRef& s = sources[perm[t]];
                                            through |= s.box == kBoundary && targets[t].box == kBoundary;
                                            d.wires.push_back({s, targets[t]});
                                        }
                                        if (through || is_acyclic(d)) continue;
                                        for (GateSet c = 0; c < gate_bit(n_in + n_out); ++c) {
                                            Split claim = make_split(n_in, n_out, c & all_gates(n_in), c >> n_in);
                                            ++examined;
                                            if (!geometric_check(d, claim).ok) continue;
                                            if (!typable_by_search(d, claim)) {
                                                d.set_claim(claim);
                                                return std::make_pair(d, claim);
                                            }
                                        }
                                    } while (std::next_permutation(perm.begin(), perm.end()));
                                }
                            }
                    }
    return std::nullopt;
}

}  // namespace

SuiteResult counterexample_fixtures() {
    SuiteResult r{"counterexample_fixtures"};
    // Left: the loop is really a straight wire from f to g.
    GtcFile file = parse_gtc(
        "box f : A|I -> I|U\n"
        "box g : I|U -> C|I\n"
        "let traced = tr[U : A*U|I -> C|U]{ (f (*) g) ; sym[U,C] }\n"
        "let straight = f ; g\n");
    const Expr& traced = *file.lets.at("traced");
    const Expr& straight = *file.lets.at("straight");
    Split claim = parse_claim("A|I -> I|C", traced.dom, traced.cod);
    CheckResult t = check_annotated(traced, claim);
    CheckResult s = check_annotated(straight, claim);
    r.check(!t.ok, "traced form accepted");
    r.check(s.ok, "straight composite rejected");
    r.check(diagram_iso(elaborate(traced, claim), elaborate(straight, claim)), "the two forms induce different diagrams");
    r.check(!infer_annotations(traced, claim), "some annotation of the traced form checks");
    r.check(geometric_check(elaborate(traced, claim), claim).ok, "path condition fails on the common diagram");

    long examined = 0;
    auto found = search_untypable_loop(examined);
    r.check(found.has_value(), "no two-box diagram found");
    r.details["left"] = {{"traced", print_expr(traced)}, {"straight", print_expr(straight)}, {"claim", "A|I -> I|C"},
                         {"failed_node", t.failed_node}};
    if (found) {
        auto& [d, c] = *found;
        r.check(geometric_check(d, c).ok && !typable_by_search(d, c) && count_cycles(d) >= 1,
                "found diagram does not behave as required");
        // cutting any loop wire on its own leaves a violation
        bool every_cut_fails = true;
        for (std::size_t w = 0; w < d.wires.size(); ++w) {
            if (!loop_wires(d)[w] || !is_prefix_form(c)) continue;
            every_cut_fails &= !geometric_check(open_wire(d, c, static_cast<int>(w)).diagram,
                                                open_wire(d, c, static_cast<int>(w)).claim)
                                    .ok;
        }
        r.details["right"] = {{"diagram", nlohmann::json::parse(export_json(d))},
                              {"claims_examined", examined},
                              {"every_single_cut_fails", every_cut_fails}};
    }
    return r;
}

SuiteResult synthesis_round_trip(int good, int bad, std::uint64_t seed) {
    SuiteResult r{"synthesis_round_trip"};
    Rng rng(seed);
    DiagramGenConfig cfg;
    int loops = 0, traced = 0;
    for (int k = 0; k < good; ++k) {
        Diagram d = random_synthesizable(rng, cfg);
        Split claim = d.claim();
        std::string tag = "diagram " + std::to_string(k);
        try {
            ExprPtr e = synthesize(d, claim);
            loops += count_cycles(d) > 0;
            traced += count_traces(*e) > 0;
            r.check(check_annotated(*e, claim).ok, tag + ": synthesized expression does not check");
            r.check(diagram_iso(elaborate(*e, claim), d), tag + ": elaboration is not isomorphic to the input");
        } catch (const std::exception& ex) {
            r.check(false, tag + ": " + ex.what());
        }
    }
    int kinds[4] = {0, 0, 0, 0};
    for (int k = 0; k < bad; ++k) {
        Diagram d = random_violating(rng, cfg);
        std::string tag = "violating diagram " + std::to_string(k);
        try {
            synthesize(d, d.claim());
            r.check(false, tag + ": synthesized anyway");
        } catch (const SynthesisError& ex) {
            const Witness& w = ex.witness;
            ++kinds[static_cast<int>(w.kind)];
            bool valid = false;
            if (w.kind == Witness::Kind::box)
                valid = w.box >= 0 && w.box < static_cast<int>(d.boxes.size()) &&
                        d.boxes[w.box].sig.kind == BoxKind::mixed;
            else if (w.kind == Witness::Kind::loop)
                valid = is_unguarded_walk(d, w.wires, true);
            else if (w.kind == Witness::Kind::path)
                valid = is_unguarded_walk(d, w.wires, false);
            r.check(valid && !w.text.empty(), tag + ": witness does not hold: " + w.text);
        }
    }
    r.details = {{"synthesized", good},
                 {"cyclic_inputs", loops},
                 {"with_trace", traced},
                 {"violations", bad},
                 {"witness_path", kinds[1]},
                 {"witness_loop", kinds[2]},
                 {"witness_box", kinds[3]}};
    return r;
}

}  // namespace gtc::suites
