#include "gtc/signature.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace gtc {

int gate_count(GateSet s) { return std::popcount(s); }

std::vector<int> gate_list(GateSet s) {
    std::vector<int> out;
    for (int i = 0; s; ++i, s >>= 1)
        if (s & 1u) out.push_back(i);
    return out;
}

GateSet gate_set(const std::vector<int>& gates) {
    GateSet s = 0;
    for (int g : gates) {
        if (g < 0 || g >= kMaxGates) throw std::out_of_range("gate index out of range");
        s |= gate_bit(g);
    }
    return s;
}

std::string format_gates(GateSet s) {
    std::string out = "{";
    bool first = true;
    for (int g : gate_list(s)) {
        if (!first) out += ",";
        out += std::to_string(g);
        first = false;
    }
    return out + "}";
}

ParseError::ParseError(const std::string& msg, std::size_t p)
    : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p), detail(msg) {}

std::string Object::str() const {
    if (atoms.empty()) return "I";
    std::string out = atoms[0];
    for (std::size_t i = 1; i < atoms.size(); ++i) out += "*" + atoms[i];
    return out;
}

Object Object::slice(int from, int count) const {
    Object o;
    o.atoms.assign(atoms.begin() + from, atoms.begin() + from + count);
    return o;
}

Object operator+(const Object& a, const Object& b) {
    Object o = a;
    o.atoms.insert(o.atoms.end(), b.atoms.begin(), b.atoms.end());
    return o;
}

static bool atom_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool valid_atom(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!atom_char(c)) return false;
    return true;
}

Object parse_object(std::string_view text) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto atom = [&]() -> std::string {
        skip();
        std::size_t start = i;
        while (i < text.size() && atom_char(text[i])) ++i;
        if (start == i) throw ParseError("expected atom name", i);
        return std::string(text.substr(start, i - start));
    };
    Object o;
    skip();
    std::string first = atom();
    skip();
    if (first == "I" && i == text.size()) return o;
    if (first == "I") throw ParseError("unit I cannot be combined with other atoms", i);
    o.atoms.push_back(first);
    while (i < text.size()) {
        if (text[i] != '*') throw ParseError(std::string("unexpected character '") + text[i] + "'", i);
        ++i;
        std::string a = atom();
        if (a == "I") throw ParseError("unit I cannot be combined with other atoms", i);
        o.atoms.push_back(a);
        skip();
    }
    return o;
}

std::string Split::str() const {
    return format_gates(unguarded_in) + format_gates(guarded_in()) + " -> " + format_gates(unguarded_out()) +
           format_gates(guarded_out);
}

Split make_split(int n_in, int n_out, GateSet unguarded_in, GateSet guarded_out) {
    if (n_in < 0 || n_out < 0 || n_in > kMaxGates || n_out > kMaxGates)
        throw std::invalid_argument("gate count out of range");
    if (!subset_of(unguarded_in, all_gates(n_in)) || !subset_of(guarded_out, all_gates(n_out)))
        throw std::invalid_argument("split mentions gates outside the profile");
    return Split{n_in, n_out, unguarded_in, guarded_out};
}

Split weakest_split(int n_in, int n_out) { return make_split(n_in, n_out, 0, 0); }

Split prefix_split(int a, int b, int c, int d) {
    return make_split(a + b, c + d, all_gates(a), all_gates(c + d) & ~all_gates(c));
}

bool is_prefix_form(const Split& s) {
    int a = gate_count(s.unguarded_in);
    int d = gate_count(s.guarded_out);
    return s.unguarded_in == all_gates(a) && s.guarded_out == (all_gates(s.n_out) & ~all_gates(s.n_out - d));
}

Split weaken(const Split& s, GateSet demote_in, GateSet demote_out) {
    if (!subset_of(demote_in, s.unguarded_in)) throw std::invalid_argument("demoted input is not unguarded");
    if (!subset_of(demote_out, s.guarded_out)) throw std::invalid_argument("demoted output is not guarded");
    return Split{s.n_in, s.n_out, s.unguarded_in & ~demote_in, s.guarded_out & ~demote_out};
}

bool claim_leq(const Split& a, const Split& b) {
    return a.n_in == b.n_in && a.n_out == b.n_out && subset_of(a.unguarded_in, b.unguarded_in) &&
           subset_of(a.guarded_out, b.guarded_out);
}

static GateSet reverse_gates(GateSet s, int n) {
    GateSet r = 0;
    for (int g : gate_list(s)) r |= gate_bit(n - 1 - g);
    return r;
}

Split dual_split(const Split& s) {
    // new input j is old output n_out-1-j; it is unguarded iff the old output was guarded
    return Split{s.n_out, s.n_in, reverse_gates(s.guarded_out, s.n_out), reverse_gates(s.unguarded_in, s.n_in)};
}

const char* kind_name(BoxKind k) {
    switch (k) {
        case BoxKind::white: return "white";
        case BoxKind::black: return "black";
        default: return "mixed";
    }
}

BoxKind kind_of(const Split& s) {
    if (s.unguarded_in == all_gates(s.n_in) && s.guarded_out == all_gates(s.n_out)) return BoxKind::black;
    if (s.unguarded_in == 0 && s.guarded_out == 0) return BoxKind::white;
    return BoxKind::mixed;
}

BoxSig make_sig(std::string name, Object inputs, Object outputs, Split split) {
    if (!valid_atom(name)) throw std::invalid_argument("invalid box name '" + name + "'");
    if (split.n_in != inputs.size() || split.n_out != outputs.size())
        throw std::invalid_argument("split does not match the gate counts of box " + name);
    BoxSig sig{std::move(name), std::move(inputs), std::move(outputs), split, kind_of(split)};
    return sig;
}

BoxSig dual_sig(const BoxSig& sig) {
    Object in(sig.outputs), out(sig.inputs);
    std::reverse(in.atoms.begin(), in.atoms.end());
    std::reverse(out.atoms.begin(), out.atoms.end());
    return make_sig(sig.name, in, out, dual_split(sig.split));
}

std::string BoxSig::decl() const { return "box " + name + " : " + format_object_split(inputs, outputs, split); }

Split ObjectSplit::split() const {
    return prefix_split(ug_in.size(), g_in.size(), ug_out.size(), g_out.size());
}

static std::pair<Object, Object> parse_side(std::string_view text, std::size_t offset) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos) throw ParseError("expected '|' in split side", offset);
    if (text.find('|', bar + 1) != std::string_view::npos) throw ParseError("more than one '|'", offset + bar);
    try {
        return {parse_object(text.substr(0, bar)), parse_object(text.substr(bar + 1))};
    } catch (const ParseError& e) {
        throw ParseError("bad object in split: " + e.detail, offset + e.pos);
    }
}

ObjectSplit parse_object_split(std::string_view text) {
    auto arrow = text.find("->");
    if (arrow == std::string_view::npos) throw ParseError("expected '->' in split", 0);
    auto [a, b] = parse_side(text.substr(0, arrow), 0);
    auto [c, d] = parse_side(text.substr(arrow + 2), arrow + 2);
    return ObjectSplit{a, b, c, d};
}

std::string format_object_split(const Object& dom, const Object& cod, const Split& s) {
    if (!is_prefix_form(s)) throw std::invalid_argument("split " + s.str() + " is not in prefix form");
    int a = gate_count(s.unguarded_in);
    int c = s.n_out - gate_count(s.guarded_out);
    return dom.slice(0, a).str() + " | " + dom.slice(a, dom.size() - a).str() + " -> " + cod.slice(0, c).str() +
           " | " + cod.slice(c, cod.size() - c).str();
}

BoxSig parse_box_decl(std::string_view text) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (text.substr(i, 3) == "box" && i + 3 < text.size() && std::isspace(static_cast<unsigned char>(text[i + 3])))
        i += 3;
    skip();
    std::size_t start = i;
    while (i < text.size() && atom_char(text[i])) ++i;
    if (start == i) throw ParseError("expected box name", i);
    std::string name(text.substr(start, i - start));
    skip();
    if (i >= text.size() || text[i] != ':') throw ParseError("expected ':' after box name", i);
    ++i;
    std::string_view rest = text.substr(i);
    ObjectSplit os;
    try {
        os = parse_object_split(rest);
    } catch (const ParseError& e) {
        throw ParseError(e.detail, i + e.pos);
    }
    return make_sig(name, os.dom(), os.cod(), os.split());
}

}  // namespace gtc
