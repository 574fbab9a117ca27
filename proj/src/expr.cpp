#include "gtc/expr.hpp"

#include <cctype>
#include <sstream>

namespace gtc {

TraceShape Expr::shape() const {
    TraceShape s;
    s.u = left.size();
    s.a = gate_count(annotation.unguarded_in) - s.u;
    s.b = annotation.n_in - s.a - s.u;
    s.d = gate_count(annotation.guarded_out) - s.u;
    s.c = annotation.n_out - s.d - s.u;
    return s;
}

Split Expr::conclusion() const {
    auto s = shape();
    return prefix_split(s.a, s.b, s.c, s.d);
}

static std::shared_ptr<Expr> node(ExprKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

ExprPtr make_box(const BoxSig& sig) {
    auto e = node(ExprKind::box);
    e->sig = sig;
    e->dom = sig.inputs;
    e->cod = sig.outputs;
    return e;
}

ExprPtr make_id(const Object& obj) {
    auto e = node(ExprKind::id);
    e->left = obj;
    e->dom = e->cod = obj;
    return e;
}

ExprPtr make_sym(const Object& a, const Object& b) {
    auto e = node(ExprKind::sym);
    e->left = a;
    e->right = b;
    e->dom = a + b;
    e->cod = b + a;
    return e;
}

ExprPtr make_comp(ExprPtr first, ExprPtr second) {
    if (first->cod != second->dom)
        throw TypeError("profile mismatch at ';': " + first->cod.str() + " vs " + second->dom.str());
    auto e = node(ExprKind::comp);
    e->dom = first->dom;
    e->cod = second->cod;
    e->first = std::move(first);
    e->second = std::move(second);
    return e;
}

ExprPtr make_tensor(ExprPtr first, ExprPtr second) {
    auto e = node(ExprKind::tensor);
    e->dom = first->dom + second->dom;
    e->cod = first->cod + second->cod;
    e->first = std::move(first);
    e->second = std::move(second);
    return e;
}

ExprPtr make_trace(const Object& loop, ExprPtr body, int a, int c) {
    int u = loop.size();
    int b = body->dom.size() - a - u;
    int d = body->cod.size() - c - u;
    if (a < 0 || b < 0 || c < 0 || d < 0) throw TypeError("trace body too small for loop object " + loop.str());
    if (body->dom.slice(a, u) != loop)
        throw TypeError("trace body inputs " + body->dom.str() + " lack loop object " + loop.str() + " after " +
                        std::to_string(a) + " gates");
    if (body->cod.slice(c + d, u) != loop)
        throw TypeError("trace body outputs " + body->cod.str() + " do not end with loop object " + loop.str());
    auto e = node(ExprKind::trace);
    e->left = loop;
    e->annotation = prefix_split(a + u, b, c, d + u);
    e->dom = body->dom.slice(0, a) + body->dom.slice(a + u, b);
    e->cod = body->cod.slice(0, c + d);
    e->first = std::move(body);
    return e;
}

ExprPtr make_trace(const Object& loop, ExprPtr body, const Split& annotation) {
    if (annotation.n_in != body->dom.size() || annotation.n_out != body->cod.size())
        throw TypeError("trace annotation does not match body profile");
    if (!is_prefix_form(annotation)) throw TypeError("trace annotation is not of the trace shape");
    int u = loop.size();
    int a = gate_count(annotation.unguarded_in) - u;
    int c = annotation.n_out - gate_count(annotation.guarded_out);
    if (a < 0 || gate_count(annotation.guarded_out) < u) throw TypeError("trace annotation does not cover the loop");
    return make_trace(loop, std::move(body), a, c);
}

ExprPtr compose_all(const std::vector<ExprPtr>& parts, const Object& dom) {
    if (parts.empty()) return make_id(dom);
    ExprPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = make_comp(acc, parts[i]);
    return acc;
}

ExprPtr tensor_all(const std::vector<ExprPtr>& parts) {
    if (parts.empty()) return make_id(Object{});
    ExprPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = make_tensor(acc, parts[i]);
    return acc;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::box: return a.sig == b.sig;
        case ExprKind::id: return a.left == b.left;
        case ExprKind::sym: return a.left == b.left && a.right == b.right;
        case ExprKind::comp:
        case ExprKind::tensor: return expr_equal(*a.first, *b.first) && expr_equal(*a.second, *b.second);
        case ExprKind::trace:
            return a.left == b.left && a.annotation == b.annotation && expr_equal(*a.first, *b.first);
    }
    return false;
}

bool has_trace(const Expr& e) { return count_traces(e) > 0; }

int count_traces(const Expr& e) {
    switch (e.kind) {
        case ExprKind::comp:
        case ExprKind::tensor: return count_traces(*e.first) + count_traces(*e.second);
        case ExprKind::trace: return 1 + count_traces(*e.first);
        default: return 0;
    }
}

void collect_boxes(const Expr& e, std::vector<std::string>& names) {
    switch (e.kind) {
        case ExprKind::box: names.push_back(e.sig.name); break;
        case ExprKind::comp:
        case ExprKind::tensor:
            collect_boxes(*e.first, names);
            collect_boxes(*e.second, names);
            break;
        case ExprKind::trace: collect_boxes(*e.first, names); break;
        default: break;
    }
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { ident, semi, tensor, lparen, rparen, lbrack, rbrack, lbrace, rbrace, comma, colon, bar, star, arrow, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::ident, std::string(s.substr(st, i - st)), st});
            continue;
        }
        if (s.substr(i, 3) == "(*)") {
            out.push_back({Tok::tensor, "(*)", i});
            i += 3;
            continue;
        }
        if (s.substr(i, 2) == "->") {
            out.push_back({Tok::arrow, "->", i});
            i += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case ';': k = Tok::semi; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case '[': k = Tok::lbrack; break;
            case ']': k = Tok::rbrack; break;
            case '{': k = Tok::lbrace; break;
            case '}': k = Tok::rbrace; break;
            case ',': k = Tok::comma; break;
            case ':': k = Tok::colon; break;
            case '|': k = Tok::bar; break;
            case '*': k = Tok::star; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({k, std::string(1, c), i});
        ++i;
    }
    out.push_back({Tok::end, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const SigRegistry& sigs) : toks_(lex(text)), sigs_(sigs) {}

    ExprPtr parse_all() {
        auto e = comp();
        if (peek().kind != Tok::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    const SigRegistry& sigs_;

    const Token& peek() const { return toks_[i_]; }
    const Token& take() { return toks_[i_++]; }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
        return take();
    }

    template <class F>
    ExprPtr typed(std::size_t pos, F&& f) {
        try {
            return f();
        } catch (const TypeError& e) {
            throw ParseError(e.what(), pos);
        }
    }

    ExprPtr comp() {
        auto e = tensor();
        while (peek().kind == Tok::semi) {
            std::size_t pos = take().pos;
            auto r = tensor();
            e = typed(pos, [&] { return make_comp(e, r); });
        }
        return e;
    }

    ExprPtr tensor() {
        auto e = atom();
        while (peek().kind == Tok::tensor) {
            take();
            e = make_tensor(e, atom());
        }
        return e;
    }

    Object object() {
        Object o;
        auto first = expect(Tok::ident, "object");
        if (first.text == "I") {
            if (peek().kind == Tok::star) throw ParseError("unit I cannot be combined with other atoms", peek().pos);
            return o;
        }
        o.atoms.push_back(first.text);
        while (peek().kind == Tok::star) {
            take();
            auto a = expect(Tok::ident, "atom");
            if (a.text == "I") throw ParseError("unit I cannot be combined with other atoms", a.pos);
            o.atoms.push_back(a.text);
        }
        return o;
    }

    std::pair<Object, Object> side() {
        auto l = object();
        expect(Tok::bar, "'|'");
        auto r = object();
        return {l, r};
    }

    ExprPtr atom() {
        const Token& t = peek();
        if (t.kind == Tok::lparen) {
            take();
            auto e = comp();
            expect(Tok::rparen, "')'");
            return e;
        }
        if (t.kind != Tok::ident) throw ParseError("expected expression", t.pos);
        if (t.text == "id" && toks_[i_ + 1].kind == Tok::lbrack) {
            take();
            take();
            auto o = object();
            expect(Tok::rbrack, "']'");
            return make_id(o);
        }
        if (t.text == "sym" && toks_[i_ + 1].kind == Tok::lbrack) {
            take();
            take();
            auto a = object();
            expect(Tok::comma, "','");
            auto b = object();
            expect(Tok::rbrack, "']'");
            return make_sym(a, b);
        }
        if (t.text == "tr" && toks_[i_ + 1].kind == Tok::lbrack) return trace();
        take();
        auto it = sigs_.find(t.text);
        if (it == sigs_.end()) throw ParseError("unknown box '" + t.text + "'", t.pos);
        return make_box(it->second);
    }

    ExprPtr trace() {
        std::size_t pos = take().pos;
        take();
        auto loop = object();
        expect(Tok::colon, "':'");
        auto [p, q] = side();
        expect(Tok::arrow, "'->'");
        auto [r, s] = side();
        expect(Tok::rbrack, "']'");
        expect(Tok::lbrace, "'{'");
        auto body = comp();
        expect(Tok::rbrace, "'}'");
        int u = loop.size();
        // each side may list the loop object explicitly (A*U | B, D*U) or leave it implicit (A | B, D)
        int a;
        if (p.size() + q.size() == body->dom.size()) {
            if (p.size() < u || p.slice(p.size() - u, u) != loop || p + q != body->dom)
                throw ParseError("malformed trace annotation: inputs " + (p + q).str() + " vs body " + body->dom.str(),
                                 pos);
            a = p.size() - u;
        } else if (p.size() + q.size() + u == body->dom.size()) {
            if (p + loop + q != body->dom)
                throw ParseError("malformed trace annotation: inputs " + (p + loop + q).str() + " vs body " +
                                     body->dom.str(),
                                 pos);
            a = p.size();
        } else {
            throw ParseError("malformed trace annotation: input side does not fit body " + body->dom.str(), pos);
        }
        int c = r.size();
        if (r.size() + s.size() == body->cod.size()) {
            if (s.size() < u || r + s != body->cod)
                throw ParseError("malformed trace annotation: outputs " + (r + s).str() + " vs body " +
                                     body->cod.str(),
                                 pos);
        } else if (r.size() + s.size() + u != body->cod.size() || r + s + loop != body->cod) {
            throw ParseError("malformed trace annotation: output side does not fit body " + body->cod.str(), pos);
        }
        return typed(pos, [&] { return make_trace(loop, body, a, c); });
    }
};

}  // namespace

ExprPtr parse_expr(std::string_view text, const SigRegistry& sigs) { return Parser(text, sigs).parse_all(); }

// ---------------------------------------------------------------- printer

static int prec(const Expr& e) {
    switch (e.kind) {
        case ExprKind::comp: return 0;
        case ExprKind::tensor: return 1;
        default: return 2;
    }
}

static void print_into(const Expr& e, int min_prec, std::string& out) {
    bool paren = prec(e) < min_prec;
    if (paren) out += "(";
    switch (e.kind) {
        case ExprKind::box: out += e.sig.name; break;
        case ExprKind::id: out += "id[" + e.left.str() + "]"; break;
        case ExprKind::sym: out += "sym[" + e.left.str() + "," + e.right.str() + "]"; break;
        case ExprKind::comp:
            print_into(*e.first, 0, out);
            out += " ; ";
            print_into(*e.second, 1, out);
            break;
        case ExprKind::tensor:
            print_into(*e.first, 1, out);
            out += " (*) ";
            print_into(*e.second, 2, out);
            break;
        case ExprKind::trace: {
            auto s = e.shape();
            const Object& in = e.first->dom;
            const Object& cod = e.first->cod;
            out += "tr[" + e.left.str() + " : " + in.slice(0, s.a + s.u).str() + "|" + in.slice(s.a + s.u, s.b).str() +
                   " -> " + cod.slice(0, s.c).str() + "|" + cod.slice(s.c, s.d + s.u).str() + "]{ ";
            print_into(*e.first, 0, out);
            out += " }";
            break;
        }
    }
    if (paren) out += ")";
}

std::string print_expr(const Expr& e) {
    std::string out;
    print_into(e, 0, out);
    return out;
}

// ---------------------------------------------------------------- files

static std::string strip_comments(std::string_view text) {
    std::string out;
    bool comment = false;
    for (char c : text) {
        if (c == '#') comment = true;
        if (c == '\n') comment = false;
        out += comment ? ' ' : c;
    }
    return out;
}

static bool starts_statement(std::string_view line, std::string_view kw) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    return line.substr(i, kw.size()) == kw && i + kw.size() < line.size() &&
           std::isspace(static_cast<unsigned char>(line[i + kw.size()]));
}

GtcFile parse_gtc(std::string_view text) {
    std::string clean = strip_comments(text);
    // split into statements: each starts at a line beginning with `box` or `let`
    struct Stmt {
        std::string text;
        std::size_t offset;
    };
    std::vector<Stmt> stmts;
    std::size_t pos = 0;
    while (pos <= clean.size()) {
        std::size_t nl = clean.find('\n', pos);
        if (nl == std::string::npos) nl = clean.size();
        std::string_view line(clean.data() + pos, nl - pos);
        if (starts_statement(line, "box") || starts_statement(line, "let")) {
            stmts.push_back({std::string(line), pos});
        } else if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            if (stmts.empty()) throw ParseError("expected 'box' or 'let'", pos);
            stmts.back().text += "\n" + std::string(line);
        }
        pos = nl + 1;
    }
    GtcFile f;
    for (auto& st : stmts) {
        if (starts_statement(st.text, "box")) {
            BoxSig sig;
            try {
                sig = parse_box_decl(st.text);
            } catch (const ParseError& e) {
                throw ParseError(e.detail, st.offset + e.pos);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), st.offset);
            }
            if (sig.name == "id" || sig.name == "sym" || sig.name == "tr")
                throw ParseError("reserved box name '" + sig.name + "'", st.offset);
            if (f.sigs.count(sig.name)) throw ParseError("duplicate box '" + sig.name + "'", st.offset);
            f.sigs[sig.name] = sig;
        } else {
            std::string_view s = st.text;
            auto eq = s.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected '=' in let", st.offset);
            std::string name(s.substr(0, eq));
            auto kw = name.find("let");
            name = name.substr(kw + 3);
            name.erase(0, name.find_first_not_of(" \t"));
            name.erase(name.find_last_not_of(" \t\r") + 1);
            if (!valid_atom(name)) throw ParseError("invalid binding name '" + name + "'", st.offset);
            if (f.lets.count(name)) throw ParseError("duplicate binding '" + name + "'", st.offset);
            try {
                f.lets[name] = parse_expr(s.substr(eq + 1), f.sigs);
            } catch (const ParseError& e) {
                throw ParseError(e.detail, st.offset + eq + 1 + e.pos);
            }
            f.order.push_back(name);
        }
    }
    return f;
}

std::string print_gtc(const SigRegistry& sigs, const std::vector<std::pair<std::string, ExprPtr>>& lets) {
    std::string out;
    for (auto& [name, sig] : sigs) out += sig.decl() + "\n";
    for (auto& [name, e] : lets) out += "let " + name + " = " + print_expr(*e) + "\n";
    return out;
}

Split parse_claim(std::string_view text, const Object& dom, const Object& cod) {
    auto os = parse_object_split(text);
    if (os.dom() != dom) throw ParseError("claim inputs " + os.dom().str() + " do not match " + dom.str(), 0);
    if (os.cod() != cod) throw ParseError("claim outputs " + os.cod().str() + " do not match " + cod.str(), 0);
    return os.split();
}

}  // namespace gtc
