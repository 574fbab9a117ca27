#include "gtc/guardedness.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace gtc {

using json = nlohmann::json;

bool guarded_passage(const BoxSig& sig, int in_port, int out_port) {
    return has_gate(sig.split.unguarded_in, in_port) && has_gate(sig.split.guarded_out, out_port);
}

namespace {

// Successor wires along unguarded passages.
std::vector<std::vector<int>> wire_graph(const Diagram& d, const WireIndex& idx) {
    std::vector<std::vector<int>> succ(d.wires.size());
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        const PortRef& t = d.wires[w].dst;
        if (t.box == kBoundary) continue;
        const BoxSig& sig = d.boxes[t.box].sig;
        for (int p = 0; p < sig.outputs.size(); ++p)
            if (!guarded_passage(sig, t.port, p)) succ[w].push_back(idx.from_box[t.box][p]);
    }
    return succ;
}

}  // namespace

std::vector<std::vector<bool>> unguarded_reach(const Diagram& d) {
    WireIndex idx(d);
    auto succ = wire_graph(d, idx);
    std::size_t n = d.wires.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> stack{static_cast<int>(s)};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (reach[s][v]) continue;
            reach[s][v] = true;
            for (int w : succ[v]) stack.push_back(w);
        }
    }
    return reach;
}

std::vector<std::vector<bool>> boundary_reach(const Diagram& d) {
    WireIndex idx(d);
    auto reach = unguarded_reach(d);
    std::vector<std::vector<bool>> m(d.n_in(), std::vector<bool>(d.n_out(), false));
    for (int i = 0; i < d.n_in(); ++i)
        for (int j = 0; j < d.n_out(); ++j) m[i][j] = reach[idx.from_boundary[i]][idx.to_boundary[j]];
    return m;
}

std::vector<int> find_unguarded_path(const Diagram& d, GateSet from, GateSet to) {
    WireIndex idx(d);
    auto succ = wire_graph(d, idx);
    std::vector<int> parent(d.wires.size(), -2);
    std::deque<int> queue;
    for (int i : gate_list(from)) {
        if (i >= d.n_in()) continue;
        int w = idx.from_boundary[i];
        parent[w] = -1;
        queue.push_back(w);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        const PortRef& t = d.wires[v].dst;
        if (t.box == kBoundary && has_gate(to, t.port)) {
            std::vector<int> path;
            for (int x = v; x != -1; x = parent[x]) path.push_back(x);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int w : succ[v])
            if (parent[w] == -2) {
                parent[w] = v;
                queue.push_back(w);
            }
    }
    return {};
}

std::vector<int> find_unguarded_loop(const Diagram& d) {
    WireIndex idx(d);
    auto succ = wire_graph(d, idx);
    std::size_t n = d.wires.size();
    std::vector<int> color(n, 0), parent(n, -1);
    std::vector<int> cycle;
    std::function<bool(int)> dfs = [&](int v) {
        color[v] = 1;
        for (int w : succ[v]) {
            if (color[w] == 1) {
                for (int x = v; x != w; x = parent[x]) cycle.push_back(x);
                cycle.push_back(w);
                std::reverse(cycle.begin(), cycle.end());
                return true;
            }
            if (color[w] == 0) {
                parent[w] = v;
                if (dfs(w)) return true;
            }
        }
        color[v] = 2;
        return false;
    };
    for (std::size_t v = 0; v < n; ++v)
        if (color[v] == 0 && dfs(static_cast<int>(v))) return cycle;
    return {};
}

bool is_unguarded_walk(const Diagram& d, const std::vector<int>& wires, bool closed) {
    if (wires.empty()) return false;
    WireIndex idx(d);
    std::size_t steps = closed ? wires.size() : wires.size() - 1;
    for (std::size_t k = 0; k < steps; ++k) {
        const Wire& a = d.wires[wires[k]];
        const Wire& b = d.wires[wires[(k + 1) % wires.size()]];
        if (a.dst.box == kBoundary || a.dst.box != b.src.box) return false;
        if (guarded_passage(d.boxes[a.dst.box].sig, a.dst.port, b.src.port)) return false;
    }
    return true;
}

std::string render_walk(const Diagram& d, const std::vector<int>& wires) {
    std::string s;
    for (std::size_t k = 0; k < wires.size(); ++k) {
        const Wire& w = d.wires[wires[k]];
        if (k == 0) s += describe_source(d, w.src);
        s += " -> " + describe_target(d, w.dst);
        if (w.dst.box != kBoundary && k + 1 < wires.size())
            s += " [" + d.boxes[w.dst.box].sig.name + "] " + describe_source(d, d.wires[wires[k + 1]].src);
    }
    return s;
}

GeoResult geometric_check(const Diagram& d, const Split& claim) {
    if (claim.n_in != d.n_in() || claim.n_out != d.n_out())
        throw std::invalid_argument("claim does not match the diagram boundary");
    GeoResult r;
    auto path = find_unguarded_path(d, claim.unguarded_in, claim.guarded_out);
    if (!path.empty()) {
        r.ok = false;
        r.witness = {Witness::Kind::path, path, -1, "unguarded path " + render_walk(d, path)};
        return r;
    }
    auto loop = find_unguarded_loop(d);
    if (!loop.empty()) {
        r.ok = false;
        r.witness = {Witness::Kind::loop, loop, -1, "unguarded loop " + render_walk(d, loop)};
    }
    return r;
}

// ---------------------------------------------------------------- structural derivation

namespace {

std::vector<Claim> maximal_only(std::vector<Claim> v) {
    std::sort(v.begin(), v.end(), [](const Claim& a, const Claim& b) {
        int ca = gate_count(a.unguarded_in) + gate_count(a.guarded_out);
        int cb = gate_count(b.unguarded_in) + gate_count(b.guarded_out);
        if (ca != cb) return ca > cb;
        return std::tie(a.unguarded_in, a.guarded_out) < std::tie(b.unguarded_in, b.guarded_out);
    });
    std::vector<Claim> keep;
    for (const Claim& c : v) {
        bool dominated = std::any_of(keep.begin(), keep.end(), [&](const Claim& k) {
            return subset_of(c.unguarded_in, k.unguarded_in) && subset_of(c.guarded_out, k.guarded_out);
        });
        if (!dominated) keep.push_back(c);
    }
    return keep;
}

// Wires only: each claim with S unguarded inputs may guard exactly the outputs not fed from S.
std::vector<Claim> permutation_claims(const std::vector<int>& target) {
    int n = static_cast<int>(target.size());
    if (n > 20) throw std::invalid_argument("identity/symmetry too wide for claim enumeration");
    std::vector<Claim> out;
    for (GateSet s = 0; s < (GateSet{1} << n); ++s) {
        GateSet fed = 0;
        for (int i : gate_list(s)) fed |= gate_bit(target[i]);
        out.push_back({s, all_gates(n) & ~fed});
    }
    return out;
}

struct Deriver {
    std::unordered_map<const Expr*, std::vector<Claim>> memo;

    const std::vector<Claim>& run(const Expr& e) {
        auto it = memo.find(&e);
        if (it != memo.end()) return it->second;
        std::vector<Claim> r;
        switch (e.kind) {
            case ExprKind::box: {
                // declared split plus the two vacuous claims
                const Split& s = e.sig.split;
                r = maximal_only({{s.unguarded_in, s.guarded_out}, {all_gates(s.n_in), 0}, {0, all_gates(s.n_out)}});
                break;
            }
            case ExprKind::id: {
                std::vector<int> t(e.left.size());
                for (int i = 0; i < e.left.size(); ++i) t[i] = i;
                r = permutation_claims(t);
                break;
            }
            case ExprKind::sym: {
                int m = e.left.size(), n = e.right.size();
                std::vector<int> t(m + n);
                for (int i = 0; i < m; ++i) t[i] = n + i;
                for (int i = 0; i < n; ++i) t[m + i] = i;
                r = permutation_claims(t);
                break;
            }
            case ExprKind::comp: {
                const auto& f = run(*e.first);
                const auto& g = run(*e.second);
                GateSet mid = all_gates(e.first->cod.size());
                for (const Claim& x : f)
                    for (const Claim& y : g)
                        // middle gates guarded by the first factor may be unguarded for the second
                        if (subset_of(mid & ~x.guarded_out, y.unguarded_in)) r.push_back({x.unguarded_in, y.guarded_out});
                r = maximal_only(std::move(r));
                break;
            }
            case ExprKind::tensor: {
                const auto& f = run(*e.first);
                const auto& g = run(*e.second);
                int si = e.first->dom.size(), so = e.first->cod.size();
                for (const Claim& x : f)
                    for (const Claim& y : g)
                        r.push_back({x.unguarded_in | (y.unguarded_in << si), x.guarded_out | (y.guarded_out << so)});
                r = maximal_only(std::move(r));
                break;
            }
            case ExprKind::trace: throw std::invalid_argument("derivable_splits needs a trace-free expression");
        }
        return memo[&e] = std::move(r);
    }
};

}  // namespace

std::vector<Claim> derivable_splits(const Expr& e) {
    if (e.dom.size() > kMaxGates || e.cod.size() > kMaxGates) throw std::invalid_argument("profile too wide");
    Deriver d;
    return d.run(e);
}

bool claim_in(const std::vector<Claim>& maximal, const Split& s) {
    return std::any_of(maximal.begin(), maximal.end(), [&](const Claim& c) {
        return subset_of(s.unguarded_in, c.unguarded_in) && subset_of(s.guarded_out, c.guarded_out);
    });
}

// ---------------------------------------------------------------- annotated checking

static std::string claim_text(const Object& dom, const Object& cod, const Split& s) {
    return is_prefix_form(s) ? format_object_split(dom, cod, s) : s.str();
}

namespace {

struct Checker {
    json layers = json::array();
    CheckResult result;

    bool run(const Expr& e, const Split& claim, const std::string& node) {
        Layer layer = elaborate_layer(e, claim);
        GeoResult g = geometric_check(layer.diagram, claim);
        json entry{{"node", node}, {"claim", claim_text(e.dom, e.cod, claim)}, {"ok", g.ok}};
        if (e.kind == ExprKind::trace) entry["loop"] = e.left.str();
        if (!g.ok) {
            entry["witness"] = g.witness.text;
            if (result.ok) {
                result.ok = false;
                result.witness = g.witness;
                result.failed_node = node;
            }
        }
        layers.push_back(entry);
        bool ok = g.ok;
        for (std::size_t k = 0; k < layer.traces.size(); ++k) {
            const Expr& t = *layer.traces[k];
            std::string child = node + (node == "/" ? "" : "/") + "tr" + std::to_string(k);
            ok = trace_node(t, child) && ok;
        }
        return ok;
    }

    bool trace_node(const Expr& t, const std::string& node) {
        // the body is checked against the annotation; the loop gates are unguarded in, guarded out
        const Expr& body = *t.body();
        Layer layer = elaborate_layer(body, t.annotation);
        GeoResult g = geometric_check(layer.diagram, t.annotation);
        json entry{{"node", node},
                   {"loop", t.left.str()},
                   {"claim", claim_text(body.dom, body.cod, t.annotation)},
                   {"conclusion", claim_text(t.dom, t.cod, t.conclusion())},
                   {"ok", g.ok}};
        if (!g.ok) {
            entry["witness"] = g.witness.text;
            if (result.ok) {
                result.ok = false;
                result.witness = g.witness;
                result.failed_node = node;
            }
        }
        layers.push_back(entry);
        bool ok = g.ok;
        for (std::size_t k = 0; k < layer.traces.size(); ++k)
            ok = trace_node(*layer.traces[k], node + "/tr" + std::to_string(k)) && ok;
        return ok;
    }
};

}  // namespace

CheckResult check_annotated(const Expr& e, const Split& claim) {
    if (claim.n_in != e.dom.size() || claim.n_out != e.cod.size())
        throw std::invalid_argument("claim does not match the expression profile");
    Checker c;
    c.run(e, claim, "/");
    c.result.certificate = json{{"claim", claim_text(e.dom, e.cod, claim)}, {"ok", c.result.ok}, {"layers", c.layers}};
    if (!c.result.ok) c.result.certificate["failed_node"] = c.result.failed_node;
    return c.result;
}

// ---------------------------------------------------------------- inference

namespace {

void collect_trace_nodes(const Expr& e, std::vector<const Expr*>& out) {
    switch (e.kind) {
        case ExprKind::comp:
        case ExprKind::tensor:
            collect_trace_nodes(*e.first, out);
            collect_trace_nodes(*e.second, out);
            break;
        case ExprKind::trace:
            out.push_back(&e);
            collect_trace_nodes(*e.first, out);
            break;
        default: break;
    }
}

ExprPtr rebuild(const ExprPtr& e, const std::map<const Expr*, int>& choice) {
    switch (e->kind) {
        case ExprKind::comp: return make_comp(rebuild(e->first, choice), rebuild(e->second, choice));
        case ExprKind::tensor: return make_tensor(rebuild(e->first, choice), rebuild(e->second, choice));
        case ExprKind::trace: return make_trace(e->left, rebuild(e->first, choice), e->shape().a, choice.at(e.get()));
        default: return e;
    }
}

}  // namespace

ExprPtr infer_annotations(const Expr& e, const Split& claim) {
    std::vector<const Expr*> nodes;
    collect_trace_nodes(e, nodes);
    if (nodes.size() > 3) throw std::invalid_argument("inference is limited to three trace nodes");
    // shared_ptr with a no-op deleter: the caller owns e
    ExprPtr root(&e, [](const Expr*) {});
    std::vector<int> limit;
    for (auto* t : nodes) {
        auto s = t->shape();
        limit.push_back(s.c + s.d);
    }
    std::vector<int> c(nodes.size(), 0);
    while (true) {
        std::map<const Expr*, int> choice;
        for (std::size_t k = 0; k < nodes.size(); ++k) choice[nodes[k]] = c[k];
        ExprPtr cand = rebuild(root, choice);
        if (check_annotated(*cand, claim).ok) return cand;
        std::size_t k = 0;
        while (k < c.size() && ++c[k] > limit[k]) c[k++] = 0;
        if (k == c.size()) return nullptr;
    }
}

// ---------------------------------------------------------------- exhaustive typability

namespace {

struct RegionBody {
    Diagram body;
    int crossing_in = 0, crossing_out = 0;
    std::vector<int> in_wires, out_wires;  // crossing wires of the original diagram, in boundary order
};

RegionBody region_body(const Diagram& d, const std::vector<int>& boxes, const std::vector<int>& cut) {
    RegionBody rb;
    std::vector<int> local(d.boxes.size(), -1);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        local[boxes[k]] = static_cast<int>(k);
        rb.body.boxes.push_back(d.boxes[boxes[k]]);
    }
    auto inside = [&](const PortRef& p) { return p.box != kBoundary && local[p.box] >= 0; };
    std::vector<bool> is_cut(d.wires.size(), false);
    for (int w : cut) is_cut[w] = true;
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        const Wire& x = d.wires[w];
        bool si = inside(x.src), ti = inside(x.dst);
        if (ti && !si) rb.in_wires.push_back(static_cast<int>(w));
        if (si && !ti) rb.out_wires.push_back(static_cast<int>(w));
    }
    rb.crossing_in = static_cast<int>(rb.in_wires.size());
    rb.crossing_out = static_cast<int>(rb.out_wires.size());
    for (int w : rb.in_wires) rb.body.in.push_back({atom_of_target(d, d.wires[w].dst), false});
    for (int w : cut) rb.body.in.push_back({atom_of_target(d, d.wires[w].dst), false});
    for (int w : rb.out_wires) rb.body.out.push_back({atom_of_source(d, d.wires[w].src), false});
    for (int w : cut) rb.body.out.push_back({atom_of_source(d, d.wires[w].src), false});
    auto loc = [&](const PortRef& p) { return PortRef{local[p.box], p.port}; };
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        const Wire& x = d.wires[w];
        if (inside(x.src) && inside(x.dst) && !is_cut[w]) rb.body.wires.push_back({loc(x.src), loc(x.dst)});
    }
    for (int k = 0; k < rb.crossing_in; ++k) rb.body.wires.push_back({{kBoundary, k}, loc(d.wires[rb.in_wires[k]].dst)});
    for (int k = 0; k < rb.crossing_out; ++k)
        rb.body.wires.push_back({loc(d.wires[rb.out_wires[k]].src), {kBoundary, k}});
    for (std::size_t m = 0; m < cut.size(); ++m) {
        rb.body.wires.push_back({{kBoundary, rb.crossing_in + static_cast<int>(m)}, loc(d.wires[cut[m]].dst)});
        rb.body.wires.push_back({loc(d.wires[cut[m]].src), {kBoundary, rb.crossing_out + static_cast<int>(m)}});
    }
    return rb;
}

class PlanSearch {
public:
    bool typable(const Diagram& d, const Split& claim) {
        int n = static_cast<int>(d.boxes.size());
        if (n > 6) throw std::invalid_argument("exhaustive typability search is limited to small diagrams");
        if (is_acyclic(d) && geometric_check(d, claim).ok) return true;
        // labels: 0 = plain box, r > 0 = inside region r (restricted growth numbering)
        std::vector<int> label(n, 0);
        return labelings(d, claim, label, 0, 0);
    }

private:
    bool labelings(const Diagram& d, const Split& claim, std::vector<int>& label, int pos, int used) {
        if (pos == static_cast<int>(label.size())) return used > 0 && try_regions(d, claim, label, used);
        for (int r = 0; r <= used + 1; ++r) {
            label[pos] = r;
            if (labelings(d, claim, label, pos + 1, std::max(used, r))) return true;
        }
        return false;
    }

    struct Option {
        std::vector<int> cut;
        Split conclusion;
        int crossing_in, crossing_out;
        std::vector<int> in_wires, out_wires;
    };

    bool try_regions(const Diagram& d, const Split& claim, const std::vector<int>& label, int regions) {
        std::vector<std::vector<int>> members(regions + 1);
        for (std::size_t b = 0; b < label.size(); ++b) members[label[b]].push_back(static_cast<int>(b));
        std::vector<std::vector<Option>> options(regions + 1);
        for (int r = 1; r <= regions; ++r) {
            std::vector<int> internal;
            for (std::size_t w = 0; w < d.wires.size(); ++w) {
                const Wire& x = d.wires[w];
                if (x.src.box != kBoundary && x.dst.box != kBoundary && label[x.src.box] == r &&
                    label[x.dst.box] == r)
                    internal.push_back(static_cast<int>(w));
            }
            if (internal.empty() || internal.size() > 10) return false;
            for (unsigned mask = 1; mask < (1u << internal.size()); ++mask) {
                std::vector<int> cut;
                for (std::size_t k = 0; k < internal.size(); ++k)
                    if (mask & (1u << k)) cut.push_back(internal[k]);
                RegionBody rb = region_body(d, members[r], cut);
                int ci = rb.crossing_in, co = rb.crossing_out, m = static_cast<int>(cut.size());
                for (GateSet ug = 0; ug < (GateSet{1} << ci); ++ug)
                    for (GateSet g = 0; g < (GateSet{1} << co); ++g) {
                        Split body_claim = make_split(ci + m, co + m, ug | (all_gates(ci + m) & ~all_gates(ci)),
                                                      g | (all_gates(co + m) & ~all_gates(co)));
                        if (typable(rb.body, body_claim))
                            options[r].push_back({cut, make_split(ci, co, ug, g), ci, co, rb.in_wires, rb.out_wires});
                    }
            }
            if (options[r].empty()) return false;
        }
        std::vector<std::size_t> pick(regions + 1, 0);
        while (true) {
            if (outer_ok(d, claim, label, members, options, pick)) return true;
            int r = 1;
            while (r <= regions && ++pick[r] == options[r].size()) pick[r++] = 0;
            if (r > regions) return false;
        }
    }

    bool outer_ok(const Diagram& d, const Split& claim, const std::vector<int>& label,
                  const std::vector<std::vector<int>>& members, const std::vector<std::vector<Option>>& options,
                  const std::vector<std::size_t>& pick) {
        int regions = static_cast<int>(members.size()) - 1;
        Diagram outer;
        outer.in = d.in;
        outer.out = d.out;
        std::vector<int> plain_index(d.boxes.size(), -1);
        for (int b : members[0]) {
            plain_index[b] = static_cast<int>(outer.boxes.size());
            outer.boxes.push_back(d.boxes[b]);
        }
        std::vector<int> region_box(regions + 1, -1);
        std::map<int, PortRef> src_of, dst_of;  // crossing wire -> opaque port
        for (int r = 1; r <= regions; ++r) {
            const Option& o = options[r][pick[r]];
            Object in, out;
            for (int w : o.in_wires) in.atoms.push_back(atom_of_target(d, d.wires[w].dst));
            for (int w : o.out_wires) out.atoms.push_back(atom_of_source(d, d.wires[w].src));
            region_box[r] = static_cast<int>(outer.boxes.size());
            outer.boxes.push_back({"region" + std::to_string(r), make_sig("region" + std::to_string(r), in, out, o.conclusion)});
            for (int k = 0; k < o.crossing_in; ++k) dst_of[o.in_wires[k]] = {region_box[r], k};
            for (int k = 0; k < o.crossing_out; ++k) src_of[o.out_wires[k]] = {region_box[r], k};
        }
        for (std::size_t w = 0; w < d.wires.size(); ++w) {
            const Wire& x = d.wires[w];
            int ls = x.src.box == kBoundary ? 0 : label[x.src.box];
            int lt = x.dst.box == kBoundary ? 0 : label[x.dst.box];
            if (ls > 0 && ls == lt) continue;  // internal to a region
            PortRef s = x.src, t = x.dst;
            if (ls > 0)
                s = src_of.at(static_cast<int>(w));
            else if (s.box != kBoundary)
                s.box = plain_index[s.box];
            if (lt > 0)
                t = dst_of.at(static_cast<int>(w));
            else if (t.box != kBoundary)
                t.box = plain_index[t.box];
            outer.wires.push_back({s, t});
        }
        return is_acyclic(outer) && geometric_check(outer, claim).ok;
    }
};

}  // namespace

bool typable_by_search(const Diagram& d, const Split& claim) {
    validate(d);
    return PlanSearch().typable(d, claim);
}

}  // namespace gtc
