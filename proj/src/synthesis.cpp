#include "gtc/synthesis.hpp"

#include <algorithm>
#include <numeric>

namespace gtc {

BoxSets compute_UV(const Diagram& d, const Split& claim) {
    WireIndex idx(d);
    auto reach = unguarded_reach(d);
    std::size_t n = d.boxes.size();
    BoxSets r{std::vector<bool>(n, false), std::vector<bool>(n, false)};
    for (std::size_t b = 0; b < n; ++b) {
        const BoxSig& sig = d.boxes[b].sig;
        for (int q = 0; q < sig.inputs.size(); ++q)
            for (int p = 0; p < sig.outputs.size(); ++p) {
                if (guarded_passage(sig, q, p)) continue;
                int in_w = idx.to_box[b][q], out_w = idx.from_box[b][p];
                for (int j : gate_list(claim.guarded_out))
                    if (reach[out_w][idx.to_boundary[j]]) r.U[b] = true;
                for (int i : gate_list(claim.unguarded_in))
                    if (reach[idx.from_boundary[i]][in_w]) r.V[b] = true;
            }
    }
    return r;
}

std::optional<int> find_cut_wire(const Diagram& d, const BoxSets& uv) {
    auto on_loop = loop_wires(d);
    std::optional<int> best;
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        if (!on_loop[w]) continue;
        const Wire& x = d.wires[w];
        if (uv.V[x.src.box] || uv.U[x.dst.box]) continue;
        if (!best || x.src < d.wires[*best].src) best = static_cast<int>(w);
    }
    return best;
}

OpenedDiagram open_wire(const Diagram& d, const Split& claim, int wire) {
    if (!is_prefix_form(claim)) throw std::invalid_argument("open_wire needs a prefix-form claim");
    int a = gate_count(claim.unguarded_in);
    int dd = gate_count(claim.guarded_out);
    const Wire cut = d.wires[wire];
    OpenedDiagram r;
    Diagram& o = r.diagram;
    o.boxes = d.boxes;
    o.in = d.in;
    o.out = d.out;
    o.in.insert(o.in.begin() + a, BoundaryPort{atom_of_target(d, cut.dst), false});
    o.out.push_back(BoundaryPort{atom_of_source(d, cut.src), true});
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        if (static_cast<int>(w) == wire) continue;
        Wire x = d.wires[w];
        if (x.src.box == kBoundary && x.src.port >= a) ++x.src.port;
        o.wires.push_back(x);
    }
    o.wires.push_back({{kBoundary, a}, cut.dst});
    o.wires.push_back({cut.src, {kBoundary, d.n_out()}});
    r.claim = prefix_split(a + 1, d.n_in() - a, d.n_out() - dd, dd + 1);
    o.set_claim(r.claim);
    return r;
}

ExprPtr permutation_expr(const Object& from, const std::vector<int>& perm) {
    int n = from.size();
    std::vector<int> cur(n);  // cur[k] = original index currently at position k
    std::iota(cur.begin(), cur.end(), 0);
    std::vector<int> rank(n);  // target position of each original index
    for (int k = 0; k < n; ++k) rank[perm[k]] = k;
    std::vector<ExprPtr> steps;
    auto atoms = [&](int lo, int hi) {
        Object o;
        for (int k = lo; k < hi; ++k) o.atoms.push_back(from.atoms[cur[k]]);
        return o;
    };
    for (int pass = 0; pass < n; ++pass)
        for (int k = 0; k + 1 < n; ++k) {
            if (rank[cur[k]] <= rank[cur[k + 1]]) continue;
            std::vector<ExprPtr> parts;
            if (k > 0) parts.push_back(make_id(atoms(0, k)));
            parts.push_back(make_sym(atoms(k, k + 1), atoms(k + 1, k + 2)));
            if (k + 2 < n) parts.push_back(make_id(atoms(k + 2, n)));
            steps.push_back(tensor_all(parts));
            std::swap(cur[k], cur[k + 1]);
        }
    return compose_all(steps, from);
}

namespace {

// Realize moving `live` into `order`; both are lists of distinct sources.
ExprPtr reorder(const Diagram& d, const std::vector<PortRef>& live, const std::vector<PortRef>& order) {
    Object obj;
    for (const PortRef& p : live) obj.atoms.push_back(atom_of_source(d, p));
    std::vector<int> perm;
    for (const PortRef& p : order) perm.push_back(static_cast<int>(std::find(live.begin(), live.end(), p) - live.begin()));
    return permutation_expr(obj, perm);
}

}  // namespace

ExprPtr acyclic_to_expr(const Diagram& d) {
    if (!is_acyclic(d)) throw std::invalid_argument("acyclic_to_expr: diagram has a loop");
    WireIndex idx(d);
    std::size_t n = d.boxes.size();
    // longest-path layering
    std::vector<int> layer(n, 0);
    for (std::size_t round = 0; round < n; ++round)
        for (const Wire& w : d.wires)
            if (w.src.box != kBoundary && w.dst.box != kBoundary)
                layer[w.dst.box] = std::max(layer[w.dst.box], layer[w.src.box] + 1);
    int depth = n == 0 ? 0 : *std::max_element(layer.begin(), layer.end()) + 1;

    Object dom;
    std::vector<PortRef> live;
    for (int i = 0; i < d.n_in(); ++i) {
        dom.atoms.push_back(d.in[i].atom);
        live.push_back({kBoundary, i});
    }
    std::vector<ExprPtr> steps;
    for (int L = 0; L < depth; ++L) {
        std::vector<int> here;
        for (std::size_t b = 0; b < n; ++b)
            if (layer[b] == L) here.push_back(static_cast<int>(b));
        std::vector<PortRef> order;
        std::vector<bool> used(live.size(), false);
        for (int b : here)
            for (int q = 0; q < d.boxes[b].sig.inputs.size(); ++q) {
                PortRef s = d.wires[idx.to_box[b][q]].src;
                order.push_back(s);
                used[std::find(live.begin(), live.end(), s) - live.begin()] = true;
            }
        std::vector<PortRef> pass;
        for (std::size_t k = 0; k < live.size(); ++k)
            if (!used[k]) pass.push_back(live[k]);
        order.insert(order.end(), pass.begin(), pass.end());
        steps.push_back(reorder(d, live, order));

        std::vector<ExprPtr> slice;
        std::vector<PortRef> next;
        for (int b : here) {
            slice.push_back(make_box(d.boxes[b].sig));
            for (int p = 0; p < d.boxes[b].sig.outputs.size(); ++p) next.push_back({b, p});
        }
        if (!pass.empty()) {
            Object po;
            for (const PortRef& p : pass) po.atoms.push_back(atom_of_source(d, p));
            slice.push_back(make_id(po));
        }
        steps.push_back(tensor_all(slice));
        next.insert(next.end(), pass.begin(), pass.end());
        live = std::move(next);
    }
    std::vector<PortRef> order;
    for (int j = 0; j < d.n_out(); ++j) order.push_back(d.wires[idx.to_boundary[j]].src);
    steps.push_back(reorder(d, live, order));
    std::erase_if(steps, [](const ExprPtr& s) { return s->kind == ExprKind::id; });
    return compose_all(steps, dom);
}

namespace {

ExprPtr synth_prefix(const Diagram& d, const Split& claim) {
    auto loops = loop_wires(d);
    if (std::none_of(loops.begin(), loops.end(), [](bool b) { return b; })) return acyclic_to_expr(d);
    BoxSets uv = compute_UV(d, claim);
    auto w = find_cut_wire(d, uv);
    if (!w) throw SynthesisError("no loop wire runs from a box outside V to a box outside U", {});
    OpenedDiagram o = open_wire(d, claim, *w);
    ExprPtr body = synth_prefix(o.diagram, o.claim);
    Object loop{{atom_of_source(d, d.wires[*w].src)}};
    return make_trace(loop, body, gate_count(claim.unguarded_in), d.n_out() - gate_count(claim.guarded_out));
}

}  // namespace

ExprPtr synthesize(const Diagram& d, const Split& claim) {
    validate(d);
    for (std::size_t b = 0; b < d.boxes.size(); ++b)
        if (d.boxes[b].sig.kind == BoxKind::mixed) {
            Witness w{Witness::Kind::box, {}, static_cast<int>(b),
                      "box " + d.boxes[b].id + " (" + d.boxes[b].sig.name + ") is neither white nor black"};
            throw SynthesisError(w.text, w);
        }
    GeoResult g = geometric_check(d, claim);
    if (!g.ok) throw SynthesisError(g.witness.text, g.witness);

    // bring the boundary into prefix form: unguarded inputs first, guarded outputs last
    std::vector<int> in_order, out_order;
    for (int i : gate_list(claim.unguarded_in)) in_order.push_back(i);
    for (int i : gate_list(claim.guarded_in())) in_order.push_back(i);
    for (int j : gate_list(claim.unguarded_out())) out_order.push_back(j);
    for (int j : gate_list(claim.guarded_out)) out_order.push_back(j);

    Diagram core = d;
    std::vector<int> in_pos(d.n_in()), out_pos(d.n_out());
    for (int k = 0; k < d.n_in(); ++k) {
        in_pos[in_order[k]] = k;
        core.in[k] = d.in[in_order[k]];
    }
    for (int k = 0; k < d.n_out(); ++k) {
        out_pos[out_order[k]] = k;
        core.out[k] = d.out[out_order[k]];
    }
    for (Wire& w : core.wires) {
        if (w.src.box == kBoundary) w.src.port = in_pos[w.src.port];
        if (w.dst.box == kBoundary) w.dst.port = out_pos[w.dst.port];
    }
    int a = gate_count(claim.unguarded_in), dd = gate_count(claim.guarded_out);
    Split core_claim = prefix_split(a, d.n_in() - a, d.n_out() - dd, dd);
    core.set_claim(core_claim);
    ExprPtr body = synth_prefix(core, core_claim);

    Object dom, mid;
    for (const auto& p : d.in) dom.atoms.push_back(p.atom);
    for (const auto& p : core.out) mid.atoms.push_back(p.atom);
    std::vector<int> back(d.n_out());
    for (int j = 0; j < d.n_out(); ++j) back[j] = out_pos[j];
    std::vector<ExprPtr> parts;
    ExprPtr p = permutation_expr(dom, in_order);
    if (p->kind != ExprKind::id) parts.push_back(p);
    parts.push_back(body);
    ExprPtr q = permutation_expr(mid, back);
    if (q->kind != ExprKind::id) parts.push_back(q);
    return compose_all(parts, dom);
}

}  // namespace gtc
