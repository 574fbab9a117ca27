#pragma once
// Traced morphism expressions: AST, typing, parser and printer.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gtc/signature.hpp"

namespace gtc {

enum class ExprKind { box, id, sym, comp, tensor, trace };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Sizes of a trace node: body is (A⊗U)⊗B -> C⊗(D⊗U).
struct TraceShape {
    int a = 0, u = 0, b = 0, c = 0, d = 0;
};

struct Expr {
    ExprKind kind;
    BoxSig sig;           // box
    Object left, right;   // id: left; sym: left, right; trace: left is the loop object
    ExprPtr first, second;  // comp: first ; second (diagrammatic order); tensor: first (*) second; trace: first is the body
    Split annotation;     // trace: claimed split of the body
    Object dom, cod;

    const ExprPtr& body() const { return first; }
    TraceShape shape() const;
    Split conclusion() const;  // trace: split of A⊗B -> C⊗D
};

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExprPtr make_box(const BoxSig& sig);
ExprPtr make_id(const Object& obj);
ExprPtr make_sym(const Object& a, const Object& b);
ExprPtr make_comp(ExprPtr first, ExprPtr second);
ExprPtr make_tensor(ExprPtr first, ExprPtr second);
// Body must have profile (A⊗U)⊗B -> C⊗(D⊗U) with the given sizes.
ExprPtr make_trace(const Object& loop, ExprPtr body, int a, int c);
// Annotation given as a full body split; it must have the trace shape.
ExprPtr make_trace(const Object& loop, ExprPtr body, const Split& annotation);

// Composite of a list (left-nested), or id[dom] when empty.
ExprPtr compose_all(const std::vector<ExprPtr>& parts, const Object& dom);
ExprPtr tensor_all(const std::vector<ExprPtr>& parts);

bool expr_equal(const Expr& a, const Expr& b);
bool has_trace(const Expr& e);
int count_traces(const Expr& e);
void collect_boxes(const Expr& e, std::vector<std::string>& names);

using SigRegistry = std::map<std::string, BoxSig>;

ExprPtr parse_expr(std::string_view text, const SigRegistry& sigs);
std::string print_expr(const Expr& e);

// .gtc files: box declarations and `let name = expr` bindings, '#' comments.
struct GtcFile {
    SigRegistry sigs;
    std::vector<std::string> order;
    std::map<std::string, ExprPtr> lets;
};
GtcFile parse_gtc(std::string_view text);
std::string print_gtc(const SigRegistry& sigs, const std::vector<std::pair<std::string, ExprPtr>>& lets);

// Claim text "A|B -> C|D" resolved against a profile; the objects must concatenate to dom and cod.
Split parse_claim(std::string_view text, const Object& dom, const Object& cod);

}  // namespace gtc
