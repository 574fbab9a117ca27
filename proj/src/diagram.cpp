#include "gtc/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

namespace gtc {

using json = nlohmann::json;

Split Diagram::claim() const {
    GateSet ug = 0, g = 0;
    for (int i = 0; i < n_in(); ++i)
        if (!in[i].guarded) ug |= gate_bit(i);
    for (int j = 0; j < n_out(); ++j)
        if (out[j].guarded) g |= gate_bit(j);
    return make_split(n_in(), n_out(), ug, g);
}

void Diagram::set_claim(const Split& s) {
    if (s.n_in != n_in() || s.n_out != n_out()) throw DiagramError("claim does not match diagram boundary");
    for (int i = 0; i < n_in(); ++i) in[i].guarded = !has_gate(s.unguarded_in, i);
    for (int j = 0; j < n_out(); ++j) out[j].guarded = has_gate(s.guarded_out, j);
}

bool Diagram::ideally_guarded() const {
    return std::all_of(boxes.begin(), boxes.end(), [](const BoxInstance& b) { return b.sig.kind != BoxKind::mixed; });
}

WireIndex::WireIndex(const Diagram& d)
    : from_boundary(d.in.size(), -1), to_boundary(d.out.size(), -1), from_box(d.boxes.size()), to_box(d.boxes.size()) {
    for (std::size_t b = 0; b < d.boxes.size(); ++b) {
        from_box[b].assign(d.boxes[b].sig.outputs.size(), -1);
        to_box[b].assign(d.boxes[b].sig.inputs.size(), -1);
    }
    auto claim_slot = [](int& slot, int w, const char* what) {
        if (slot != -1) throw DiagramError(std::string("port used by two wires: ") + what);
        slot = w;
    };
    for (int w = 0; w < static_cast<int>(d.wires.size()); ++w) {
        const Wire& x = d.wires[w];
        if (x.src.box == kBoundary) {
            if (x.src.port < 0 || x.src.port >= d.n_in()) throw DiagramError("wire source out of range");
            claim_slot(from_boundary[x.src.port], w, "boundary input");
        } else {
            if (x.src.box < 0 || x.src.box >= static_cast<int>(d.boxes.size()) || x.src.port < 0 ||
                x.src.port >= static_cast<int>(from_box[x.src.box].size()))
                throw DiagramError("wire source out of range");
            claim_slot(from_box[x.src.box][x.src.port], w, "box output");
        }
        if (x.dst.box == kBoundary) {
            if (x.dst.port < 0 || x.dst.port >= d.n_out()) throw DiagramError("wire target out of range");
            claim_slot(to_boundary[x.dst.port], w, "boundary output");
        } else {
            if (x.dst.box < 0 || x.dst.box >= static_cast<int>(d.boxes.size()) || x.dst.port < 0 ||
                x.dst.port >= static_cast<int>(to_box[x.dst.box].size()))
                throw DiagramError("wire target out of range");
            claim_slot(to_box[x.dst.box][x.dst.port], w, "box input");
        }
    }
}

int WireIndex::source_wire(const PortRef& p) const {
    return p.box == kBoundary ? from_boundary[p.port] : from_box[p.box][p.port];
}

int WireIndex::target_wire(const PortRef& p) const {
    return p.box == kBoundary ? to_boundary[p.port] : to_box[p.box][p.port];
}

std::string atom_of_source(const Diagram& d, const PortRef& p) {
    return p.box == kBoundary ? d.in[p.port].atom : d.boxes[p.box].sig.outputs.atoms[p.port];
}

std::string atom_of_target(const Diagram& d, const PortRef& p) {
    return p.box == kBoundary ? d.out[p.port].atom : d.boxes[p.box].sig.inputs.atoms[p.port];
}

void validate(const Diagram& d) {
    WireIndex idx(d);
    auto all_set = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int w) { return w >= 0; }); };
    if (!all_set(idx.from_boundary) || !all_set(idx.to_boundary)) throw DiagramError("dangling boundary port");
    for (std::size_t b = 0; b < d.boxes.size(); ++b)
        if (!all_set(idx.from_box[b]) || !all_set(idx.to_box[b]))
            throw DiagramError("dangling port on box " + d.boxes[b].id);
    for (const Wire& w : d.wires)
        if (atom_of_source(d, w.src) != atom_of_target(d, w.dst))
            throw DiagramError("wire joins " + atom_of_source(d, w.src) + " to " + atom_of_target(d, w.dst));
}

// ---------------------------------------------------------------- elaboration

namespace {

// Open fragment: wires whose boundary ends refer to the fragment's own inputs/outputs.
struct Frag {
    std::vector<Wire> wires;
    int n_in = 0, n_out = 0;
};

struct Elaborator {
    std::vector<BoxInstance> boxes;
    bool opaque = false;
    std::vector<const Expr*> traces;
    std::vector<int> traces_box;

    int add_box(const BoxSig& sig) {
        int idx = static_cast<int>(boxes.size());
        boxes.push_back({"b" + std::to_string(idx), sig});
        return idx;
    }

    Frag box_frag(int idx) {
        Frag f;
        const BoxSig& sig = boxes[idx].sig;
        f.n_in = sig.inputs.size();
        f.n_out = sig.outputs.size();
        for (int i = 0; i < f.n_in; ++i) f.wires.push_back({{kBoundary, i}, {idx, i}});
        for (int j = 0; j < f.n_out; ++j) f.wires.push_back({{idx, j}, {kBoundary, j}});
        return f;
    }

    Frag run(const Expr& e, bool top) {
        switch (e.kind) {
            case ExprKind::box: return box_frag(add_box(e.sig));
            case ExprKind::id: {
                Frag f;
                f.n_in = f.n_out = e.left.size();
                for (int i = 0; i < f.n_in; ++i) f.wires.push_back({{kBoundary, i}, {kBoundary, i}});
                return f;
            }
            case ExprKind::sym: {
                Frag f;
                int m = e.left.size(), n = e.right.size();
                f.n_in = f.n_out = m + n;
                for (int i = 0; i < m; ++i) f.wires.push_back({{kBoundary, i}, {kBoundary, n + i}});
                for (int i = 0; i < n; ++i) f.wires.push_back({{kBoundary, m + i}, {kBoundary, i}});
                return f;
            }
            case ExprKind::comp: return compose(run(*e.first, top), run(*e.second, top));
            case ExprKind::tensor: return tensor(run(*e.first, top), run(*e.second, top));
            case ExprKind::trace: {
                if (opaque && top) {
                    int idx = add_box(make_sig("trace" + std::to_string(traces.size()), e.dom, e.cod, e.conclusion()));
                    traces.push_back(&e);
                    traces_box.push_back(idx);
                    return box_frag(idx);
                }
                return trace(run(*e.first, false), e.shape());
            }
        }
        return {};
    }

    static Frag compose(const Frag& f, const Frag& g) {
        std::vector<int> g_from(g.n_in, -1);
        for (int w = 0; w < static_cast<int>(g.wires.size()); ++w)
            if (g.wires[w].src.box == kBoundary) g_from[g.wires[w].src.port] = w;
        Frag r;
        r.n_in = f.n_in;
        r.n_out = g.n_out;
        for (const Wire& w : f.wires) {
            if (w.dst.box == kBoundary)
                r.wires.push_back({w.src, g.wires[g_from[w.dst.port]].dst});
            else
                r.wires.push_back(w);
        }
        for (const Wire& w : g.wires)
            if (w.src.box != kBoundary) r.wires.push_back(w);
        return r;
    }

    static Frag tensor(const Frag& f, Frag g) {
        for (Wire& w : g.wires) {
            if (w.src.box == kBoundary) w.src.port += f.n_in;
            if (w.dst.box == kBoundary) w.dst.port += f.n_out;
        }
        Frag r;
        r.n_in = f.n_in + g.n_in;
        r.n_out = f.n_out + g.n_out;
        r.wires = f.wires;
        r.wires.insert(r.wires.end(), g.wires.begin(), g.wires.end());
        return r;
    }

    static Frag trace(const Frag& body, const TraceShape& s) {
        std::vector<int> from(body.n_in, -1);
        for (int w = 0; w < static_cast<int>(body.wires.size()); ++w)
            if (body.wires[w].src.box == kBoundary) from[body.wires[w].src.port] = w;
        auto fed = [&](const PortRef& p) { return p.box == kBoundary && p.port >= s.c + s.d; };
        Frag r;
        r.n_in = s.a + s.b;
        r.n_out = s.c + s.d;
        for (const Wire& w : body.wires) {
            if (w.src.box == kBoundary && w.src.port >= s.a && w.src.port < s.a + s.u) continue;
            Wire x = w;
            int steps = 0;
            while (fed(x.dst)) {
                int k = x.dst.port - (s.c + s.d);
                x.dst = body.wires[from[s.a + k]].dst;
                if (++steps > s.u) throw DiagramError("feedback does not terminate");
            }
            if (x.src.box == kBoundary && x.src.port >= s.a + s.u) x.src.port -= s.u;
            r.wires.push_back(x);
        }
        // loops made only of feedback wires carry no box and vanish from the diagram
        return r;
    }
};

Diagram finish(Elaborator& el, const Frag& f, const Expr& e, const std::optional<Split>& claim) {
    Diagram d;
    d.boxes = std::move(el.boxes);
    d.wires = f.wires;
    for (const auto& a : e.dom.atoms) d.in.push_back({a, false});
    for (const auto& a : e.cod.atoms) d.out.push_back({a, false});
    if (claim) d.set_claim(*claim);
    return d;
}

}  // namespace

Diagram elaborate(const Expr& e, const std::optional<Split>& claim) {
    Elaborator el;
    Frag f = el.run(e, true);
    return finish(el, f, e, claim);
}

Layer elaborate_layer(const Expr& e, const std::optional<Split>& claim) {
    Elaborator el;
    el.opaque = true;
    Frag f = el.run(e, true);
    Layer l;
    l.traces = el.traces;
    l.traces_box = el.traces_box;
    l.diagram = finish(el, f, e, claim);
    return l;
}

// ---------------------------------------------------------------- isomorphism

namespace {

struct IsoState {
    std::vector<int> fwd, bwd;
};

bool same_sig(const BoxSig& a, const BoxSig& b) {
    return a.name == b.name && a.inputs == b.inputs && a.outputs == b.outputs && a.split == b.split;
}

class IsoSearch {
public:
    IsoSearch(const Diagram& a, const Diagram& b) : a_(a), b_(b), ia_(a), ib_(b) {}

    bool run() {
        if (a_.boxes.size() != b_.boxes.size() || a_.wires.size() != b_.wires.size() || a_.in != b_.in ||
            a_.out != b_.out)
            return false;
        IsoState st{std::vector<int>(a_.boxes.size(), -1), std::vector<int>(b_.boxes.size(), -1)};
        std::vector<std::pair<int, int>> queue;
        for (int i = 0; i < a_.n_in(); ++i)
            if (!match_target(a_.wires[ia_.from_boundary[i]].dst, b_.wires[ib_.from_boundary[i]].dst, st, queue))
                return false;
        for (int j = 0; j < a_.n_out(); ++j)
            if (!match_source(a_.wires[ia_.to_boundary[j]].src, b_.wires[ib_.to_boundary[j]].src, st, queue))
                return false;
        if (!propagate(st, queue)) return false;
        return search(st);
    }

private:
    const Diagram& a_;
    const Diagram& b_;
    WireIndex ia_, ib_;

    bool assign(int x, int y, IsoState& st, std::vector<std::pair<int, int>>& queue) {
        if (st.fwd[x] == -1 && st.bwd[y] == -1) {
            if (!same_sig(a_.boxes[x].sig, b_.boxes[y].sig)) return false;
            st.fwd[x] = y;
            st.bwd[y] = x;
            queue.push_back({x, y});
            return true;
        }
        return st.fwd[x] == y;
    }

    bool match_target(const PortRef& p, const PortRef& q, IsoState& st, std::vector<std::pair<int, int>>& queue) {
        if ((p.box == kBoundary) != (q.box == kBoundary) || p.port != q.port) return false;
        return p.box == kBoundary || assign(p.box, q.box, st, queue);
    }

    bool match_source(const PortRef& p, const PortRef& q, IsoState& st, std::vector<std::pair<int, int>>& queue) {
        return match_target(p, q, st, queue);
    }

    bool propagate(IsoState& st, std::vector<std::pair<int, int>>& queue) {
        while (!queue.empty()) {
            auto [x, y] = queue.back();
            queue.pop_back();
            const BoxSig& sig = a_.boxes[x].sig;
            for (int p = 0; p < sig.outputs.size(); ++p)
                if (!match_target(a_.wires[ia_.from_box[x][p]].dst, b_.wires[ib_.from_box[y][p]].dst, st, queue))
                    return false;
            for (int q = 0; q < sig.inputs.size(); ++q)
                if (!match_source(a_.wires[ia_.to_box[x][q]].src, b_.wires[ib_.to_box[y][q]].src, st, queue))
                    return false;
        }
        return true;
    }

    bool search(IsoState& st) {
        auto it = std::find(st.fwd.begin(), st.fwd.end(), -1);
        if (it == st.fwd.end()) return true;
        int x = static_cast<int>(it - st.fwd.begin());
        for (int y = 0; y < static_cast<int>(b_.boxes.size()); ++y) {
            if (st.bwd[y] != -1 || !same_sig(a_.boxes[x].sig, b_.boxes[y].sig)) continue;
            IsoState copy = st;
            std::vector<std::pair<int, int>> queue;
            if (assign(x, y, copy, queue) && propagate(copy, queue) && search(copy)) {
                st = copy;
                return true;
            }
        }
        return false;
    }
};

}  // namespace

bool diagram_iso(const Diagram& a, const Diagram& b) {
    try {
        return IsoSearch(a, b).run();
    } catch (const DiagramError&) {
        return false;
    }
}

Diagram reverse_diagram(const Diagram& d) {
    Diagram r;
    for (const auto& b : d.boxes) r.boxes.push_back({b.id, dual_sig(b.sig)});
    for (int j = d.n_out() - 1; j >= 0; --j) r.in.push_back({d.out[j].atom, !d.out[j].guarded});
    for (int i = d.n_in() - 1; i >= 0; --i) r.out.push_back({d.in[i].atom, !d.in[i].guarded});
    for (const Wire& w : d.wires) {
        Wire x;
        // old target becomes new source
        if (w.dst.box == kBoundary)
            x.src = {kBoundary, d.n_out() - 1 - w.dst.port};
        else
            x.src = {w.dst.box, d.boxes[w.dst.box].sig.inputs.size() - 1 - w.dst.port};
        if (w.src.box == kBoundary)
            x.dst = {kBoundary, d.n_in() - 1 - w.src.port};
        else
            x.dst = {w.src.box, d.boxes[w.src.box].sig.outputs.size() - 1 - w.src.port};
        r.wires.push_back(x);
    }
    return r;
}

// ---------------------------------------------------------------- cycles

static std::vector<std::vector<int>> box_successors(const Diagram& d) {
    std::vector<std::vector<int>> succ(d.boxes.size());
    for (const Wire& w : d.wires)
        if (w.src.box != kBoundary && w.dst.box != kBoundary) succ[w.src.box].push_back(w.dst.box);
    return succ;
}

bool is_acyclic(const Diagram& d) {
    auto succ = box_successors(d);
    std::vector<int> indeg(d.boxes.size(), 0);
    for (auto& s : succ)
        for (int v : s) ++indeg[v];
    std::vector<int> stack;
    for (std::size_t v = 0; v < indeg.size(); ++v)
        if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
    std::size_t seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int w : succ[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen == d.boxes.size();
}

std::vector<bool> loop_wires(const Diagram& d) {
    auto succ = box_successors(d);
    std::size_t n = d.boxes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> stack(succ[s].begin(), succ[s].end());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (reach[s][v]) continue;
            reach[s][v] = true;
            for (int w : succ[v]) stack.push_back(w);
        }
    }
    std::vector<bool> out(d.wires.size(), false);
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
        const Wire& x = d.wires[w];
        if (x.src.box != kBoundary && x.dst.box != kBoundary) out[w] = x.src.box == x.dst.box || reach[x.dst.box][x.src.box];
    }
    return out;
}

int count_cycles(const Diagram& d, int limit) {
    auto succ = box_successors(d);
    int n = static_cast<int>(d.boxes.size());
    int count = 0;
    std::vector<bool> on_path(n, false);
    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (int w : succ[v]) {
            if (count >= limit) return;
            if (w == start) {
                ++count;
            } else if (w > start && !on_path[w]) {
                on_path[w] = true;
                dfs(start, w);
                on_path[w] = false;
            }
        }
    };
    for (int s = 0; s < n && count < limit; ++s) {
        on_path[s] = true;
        dfs(s, s);
        on_path[s] = false;
    }
    return count;
}

// ---------------------------------------------------------------- export

std::string describe_source(const Diagram& d, const PortRef& p) {
    if (p.box == kBoundary) return "in." + std::to_string(p.port);
    return d.boxes[p.box].id + ".out" + std::to_string(p.port);
}

std::string describe_target(const Diagram& d, const PortRef& p) {
    if (p.box == kBoundary) return "out." + std::to_string(p.port);
    return d.boxes[p.box].id + ".in" + std::to_string(p.port);
}

static std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '{' || c == '}' || c == '|' || c == '<' || c == '>' || c == '"') out += '\\';
        out += c;
    }
    return out;
}

std::string export_dot(const Diagram& d) {
    // filled marker = black bar on the gate (unguarded input or guarded output)
    const std::string filled = "&#9679; ", open = "&#9675; ";
    std::string s = "digraph diagram {\n  rankdir=LR;\n  node [shape=record];\n";
    if (d.n_in() > 0) {
        s += "  in [label=\"";
        for (int i = 0; i < d.n_in(); ++i)
            s += (i ? "|" : "") + std::string("<p") + std::to_string(i) + "> " + (d.in[i].guarded ? open : filled) +
                 dot_escape(d.in[i].atom);
        s += "\"];\n";
    }
    if (d.n_out() > 0) {
        s += "  out [label=\"";
        for (int j = 0; j < d.n_out(); ++j)
            s += (j ? "|" : "") + std::string("<p") + std::to_string(j) + "> " + (d.out[j].guarded ? filled : open) +
                 dot_escape(d.out[j].atom);
        s += "\"];\n";
    }
    for (std::size_t b = 0; b < d.boxes.size(); ++b) {
        const BoxSig& sig = d.boxes[b].sig;
        std::string ins, outs;
        for (int i = 0; i < sig.inputs.size(); ++i)
            ins += (i ? "|" : "") + std::string("<i") + std::to_string(i) + "> " +
                   (has_gate(sig.split.unguarded_in, i) ? filled : open) + dot_escape(sig.inputs.atoms[i]);
        for (int j = 0; j < sig.outputs.size(); ++j)
            outs += (j ? "|" : "") + std::string("<o") + std::to_string(j) + "> " +
                    (has_gate(sig.split.guarded_out, j) ? filled : open) + dot_escape(sig.outputs.atoms[j]);
        s += "  \"" + d.boxes[b].id + "\" [label=\"{{" + ins + "}|" + dot_escape(sig.name) + "|{" + outs + "}}\"";
        if (sig.kind == BoxKind::black) s += ", style=filled, fillcolor=gray30, fontcolor=white";
        s += ", tooltip=\"" + std::string(kind_name(sig.kind)) + "\"];\n";
    }
    for (const Wire& w : d.wires) {
        std::string src = w.src.box == kBoundary ? "in:p" + std::to_string(w.src.port)
                                                 : "\"" + d.boxes[w.src.box].id + "\":o" + std::to_string(w.src.port);
        std::string dst = w.dst.box == kBoundary ? "out:p" + std::to_string(w.dst.port)
                                                 : "\"" + d.boxes[w.dst.box].id + "\":i" + std::to_string(w.dst.port);
        s += "  " + src + " -> " + dst + ";\n";
    }
    return s + "}\n";
}

static json sig_json(const BoxSig& sig) {
    return json{{"name", sig.name},
                {"inputs", sig.inputs.atoms},
                {"outputs", sig.outputs.atoms},
                {"unguarded_in", gate_list(sig.split.unguarded_in)},
                {"guarded_out", gate_list(sig.split.guarded_out)}};
}

std::string export_json(const Diagram& d) {
    json j;
    j["boxes"] = json::array();
    for (const auto& b : d.boxes) j["boxes"].push_back({{"id", b.id}, {"sig", sig_json(b.sig)}});
    j["wires"] = json::array();
    for (const Wire& w : d.wires) {
        std::string src = w.src.box == kBoundary ? "in." + std::to_string(w.src.port)
                                                 : d.boxes[w.src.box].id + "." + std::to_string(w.src.port);
        std::string dst = w.dst.box == kBoundary ? "out." + std::to_string(w.dst.port)
                                                 : d.boxes[w.dst.box].id + "." + std::to_string(w.dst.port);
        j["wires"].push_back({src, dst});
    }
    j["in"] = json::array();
    for (const auto& p : d.in) j["in"].push_back({{"atom", p.atom}, {"guarded", p.guarded}});
    j["out"] = json::array();
    for (const auto& p : d.out) j["out"].push_back({{"atom", p.atom}, {"guarded", p.guarded}});
    return j.dump(2);
}

static BoxSig sig_from_json(const json& s) {
    if (s.is_string()) return parse_box_decl(s.get<std::string>());
    Object in, out;
    for (const auto& a : s.at("inputs")) in.atoms.push_back(a.get<std::string>());
    for (const auto& a : s.at("outputs")) out.atoms.push_back(a.get<std::string>());
    for (const auto& a : in.atoms)
        if (!valid_atom(a)) throw DiagramError("invalid atom '" + a + "'");
    for (const auto& a : out.atoms)
        if (!valid_atom(a)) throw DiagramError("invalid atom '" + a + "'");
    Split sp = make_split(in.size(), out.size(), gate_set(s.at("unguarded_in").get<std::vector<int>>()),
                          gate_set(s.at("guarded_out").get<std::vector<int>>()));
    return make_sig(s.at("name").get<std::string>(), in, out, sp);
}

Diagram import_json(const std::string& text) {
    Diagram d;
    try {
        json j = json::parse(text);
        std::map<std::string, int> ids;
        for (const auto& b : j.at("boxes")) {
            std::string id = b.at("id").get<std::string>();
            if (id.empty() || id == "in" || id == "out" || id.find('.') != std::string::npos || ids.count(id))
                throw DiagramError("bad or duplicate box id '" + id + "'");
            ids[id] = static_cast<int>(d.boxes.size());
            d.boxes.push_back({id, sig_from_json(b.at("sig"))});
        }
        for (const auto& p : j.at("in")) d.in.push_back({p.at("atom").get<std::string>(), p.value("guarded", false)});
        for (const auto& p : j.at("out")) d.out.push_back({p.at("atom").get<std::string>(), p.value("guarded", false)});
        auto endpoint = [&](const std::string& s, const char* boundary) -> PortRef {
            auto dot = s.rfind('.');
            if (dot == std::string::npos) throw DiagramError("bad endpoint '" + s + "'");
            std::string head = s.substr(0, dot);
            int port = std::stoi(s.substr(dot + 1));
            if (head == boundary) return {kBoundary, port};
            auto it = ids.find(head);
            if (it == ids.end()) throw DiagramError("unknown box in endpoint '" + s + "'");
            return {it->second, port};
        };
        for (const auto& w : j.at("wires")) {
            if (!w.is_array() || w.size() != 2) throw DiagramError("wire must be a [src, dst] pair");
            d.wires.push_back({endpoint(w[0].get<std::string>(), "in"), endpoint(w[1].get<std::string>(), "out")});
        }
    } catch (const json::exception& e) {
        throw DiagramError(std::string("diagram JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DiagramError(std::string("diagram JSON: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw DiagramError(std::string("diagram JSON: ") + e.what());
    }
    validate(d);
    return d;
}

}  // namespace gtc
