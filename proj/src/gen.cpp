#include "gtc/gen.hpp"

#include <algorithm>

#include "gtc/guardedness.hpp"

namespace gtc {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const char* kAtoms[] = {"A", "B", "C", "D"};

}  // namespace

ExprGen::ExprGen(std::uint64_t seed, ExprGenConfig cfg) : rng(seed), cfg_(cfg) {}

Object ExprGen::random_object(int lo, int hi) {
    Object o;
    int n = uniform(rng, lo, hi);
    for (int i = 0; i < n; ++i) o.atoms.push_back(kAtoms[uniform(rng, 0, std::clamp(cfg_.atom_kinds, 1, 4) - 1)]);
    return o;
}

Split ExprGen::random_split(int n_in, int n_out) {
    int mode = uniform(rng, 0, 4);
    if (mode == 0) return make_split(n_in, n_out, 0, 0);                                  // white
    if (mode == 1) return make_split(n_in, n_out, all_gates(n_in), all_gates(n_out));    // black
    GateSet ug = 0, g = 0;
    for (int i = 0; i < n_in; ++i)
        if (coin(rng, 0.5)) ug |= gate_bit(i);
    for (int j = 0; j < n_out; ++j)
        if (coin(rng, 0.5)) g |= gate_bit(j);
    return make_split(n_in, n_out, ug, g);
}

BoxSig ExprGen::fresh_box(const Object& in, const Object& out) {
    std::string name = "f" + std::to_string(fresh_++);
    BoxSig s = make_sig(name, in, out, random_split(in.size(), out.size()));
    sigs[name] = s;
    return s;
}

ExprPtr ExprGen::gen_any() {
    traces_left_ = cfg_.trace_budget;
    Object dom = random_object(0, 3);
    return gen_sized(dom, uniform(rng, 1, cfg_.max_boxes));
}

ExprPtr ExprGen::gen(const Object& dom) {
    traces_left_ = cfg_.trace_budget;
    return gen_sized(dom, uniform(rng, 1, cfg_.max_boxes));
}

ExprPtr ExprGen::gen_trace(const Object& dom, int boxes) {
    Object loop = random_object(1, coin(rng, 0.2) ? 2 : 1);
    int a = uniform(rng, 0, dom.size());
    Object body_dom = dom.slice(0, a) + loop + dom.slice(a, dom.size() - a);
    ExprPtr g = gen_sized(body_dom, std::max(0, boxes - 1));
    Object cd = random_object(0, 2);
    Object out = cd + loop;
    // bias the closing box towards a guarded feedback: unguarded inputs, guarded loop outputs
    std::string name = "f" + std::to_string(fresh_++);
    GateSet ug = 0, gout = 0;
    for (int i = 0; i < g->cod.size(); ++i)
        if (coin(rng, 0.8)) ug |= gate_bit(i);
    for (int j = 0; j < out.size(); ++j)
        if (coin(rng, j >= cd.size() ? 0.9 : 0.5)) gout |= gate_bit(j);
    BoxSig k = make_sig(name, g->cod, out, make_split(g->cod.size(), out.size(), ug, gout));
    sigs[name] = k;
    return make_trace(loop, make_comp(g, make_box(k)), a, uniform(rng, 0, cd.size()));
}

ExprPtr ExprGen::gen_sized(const Object& dom, int boxes) {
    if (boxes > 0 && traces_left_ > 0 && coin(rng, cfg_.trace_prob)) {
        --traces_left_;
        return gen_trace(dom, boxes);
    }
    if (boxes == 0) {
        int pick = uniform(rng, 0, 3);
        if (pick == 0 && dom.size() >= 2) {
            int k = uniform(rng, 1, dom.size() - 1);
            return make_sym(dom.slice(0, k), dom.slice(k, dom.size() - k));
        }
        if (pick == 1 && dom.size() >= 2) {
            int k = uniform(rng, 1, dom.size() - 1);
            return make_tensor(gen_sized(dom.slice(0, k), 0), gen_sized(dom.slice(k, dom.size() - k), 0));
        }
        return make_id(dom);
    }
    int pick = uniform(rng, 0, boxes == 1 ? 3 : 2);
    if (pick == 0) {  // composite
        int k = uniform(rng, 0, boxes);
        if (boxes == 1 && coin(rng, 0.5)) k = 1;
        ExprPtr f = gen_sized(dom, k);
        return make_comp(f, gen_sized(f->cod, boxes - k));
    }
    if (pick == 1) {  // tensor
        int split = uniform(rng, 0, dom.size());
        int k = uniform(rng, 0, boxes);
        return make_tensor(gen_sized(dom.slice(0, split), k), gen_sized(dom.slice(split, dom.size() - split), boxes - k));
    }
    if (boxes == 1 || pick == 3) {
        Object out = random_object(dom.empty() ? 1 : 0, std::max(1, cfg_.max_box_out));
        return make_box(fresh_box(dom, out));
    }
    ExprPtr f = gen_sized(dom, 1);
    return make_comp(f, gen_sized(f->cod, boxes - 1));
}

// ---------------------------------------------------------------- diagrams

Diagram random_diagram(Rng& rng, const DiagramGenConfig& cfg) {
    Diagram d;
    int n = uniform(rng, 1, cfg.max_boxes);
    std::vector<int> ins(n), outs(n);
    int total_in = 0, total_out = 0;
    for (int b = 0; b < n; ++b) {
        ins[b] = uniform(rng, 0, cfg.max_arity);
        outs[b] = uniform(rng, 0, cfg.max_arity);
        if (ins[b] + outs[b] == 0) outs[b] = 1;
        total_in += ins[b];
        total_out += outs[b];
    }
    int n_in = uniform(rng, 0, 2);
    int n_out = n_in + total_out - total_in;
    if (n_out < 0) {
        n_in -= n_out;
        n_out = 0;
    }
    std::vector<PortRef> sources, targets;
    for (int i = 0; i < n_in; ++i) sources.push_back({kBoundary, i});
    for (int b = 0; b < n; ++b)
        for (int p = 0; p < outs[b]; ++p) sources.push_back({b, p});
    for (int b = 0; b < n; ++b)
        for (int q = 0; q < ins[b]; ++q) targets.push_back({b, q});
    for (int j = 0; j < n_out; ++j) targets.push_back({kBoundary, j});
    std::shuffle(targets.begin(), targets.end(), rng);

    std::vector<std::vector<std::string>> in_atoms(n), out_atoms(n);
    for (int b = 0; b < n; ++b) {
        in_atoms[b].resize(ins[b]);
        out_atoms[b].resize(outs[b]);
    }
    d.in.resize(n_in);
    d.out.resize(n_out);
    int kinds = std::clamp(cfg.atom_kinds, 1, 4);
    for (std::size_t w = 0; w < sources.size(); ++w) {
        std::string atom = kAtoms[uniform(rng, 0, kinds - 1)];
        const PortRef& s = sources[w];
        const PortRef& t = targets[w];
        if (s.box == kBoundary) d.in[s.port].atom = atom;
        else out_atoms[s.box][s.port] = atom;
        if (t.box == kBoundary) d.out[t.port].atom = atom;
        else in_atoms[t.box][t.port] = atom;
        d.wires.push_back({s, t});
    }
    for (int b = 0; b < n; ++b) {
        Split s;
        if (cfg.ideal) {
            s = coin(rng, 0.5) ? make_split(ins[b], outs[b], 0, 0)
                               : make_split(ins[b], outs[b], all_gates(ins[b]), all_gates(outs[b]));
        } else {
            GateSet ug = 0, g = 0;
            for (int i = 0; i < ins[b]; ++i)
                if (coin(rng, 0.5)) ug |= gate_bit(i);
            for (int j = 0; j < outs[b]; ++j)
                if (coin(rng, 0.5)) g |= gate_bit(j);
            s = make_split(ins[b], outs[b], ug, g);
        }
        std::string name = "g" + std::to_string(b);
        d.boxes.push_back({"b" + std::to_string(b), make_sig(name, Object{in_atoms[b]}, Object{out_atoms[b]}, s)});
    }
    GateSet ug = 0, g = 0;
    for (int i = 0; i < n_in; ++i)
        if (coin(rng, 0.5)) ug |= gate_bit(i);
    for (int j = 0; j < n_out; ++j)
        if (coin(rng, 0.5)) g |= gate_bit(j);
    d.set_claim(make_split(n_in, n_out, ug, g));
    return d;
}

Diagram random_synthesizable(Rng& rng, const DiagramGenConfig& cfg) {
    DiagramGenConfig c = cfg;
    c.ideal = true;
    while (true) {
        Diagram d = random_diagram(rng, c);
        int loops = count_cycles(d, cfg.max_loops + 1);
        if (loops > cfg.max_loops) continue;
        if (loops == 0 && !coin(rng, 0.2)) continue;  // keep mostly cyclic cases
        if (geometric_check(d, d.claim()).ok) return d;
    }
}

Diagram random_violating(Rng& rng, const DiagramGenConfig& cfg) {
    DiagramGenConfig c = cfg;
    while (true) {
        c.ideal = coin(rng, 0.6);
        Diagram d = random_diagram(rng, c);
        if (count_cycles(d, cfg.max_loops + 1) > cfg.max_loops) continue;
        if (!d.ideally_guarded() || !geometric_check(d, d.claim()).ok) return d;
    }
}

}  // namespace gtc
