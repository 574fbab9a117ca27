#pragma once
// Compositional interpretation of expressions. Ops supplies box/id/sym/compose/tensor/trace for one model.

#include "gtc/expr.hpp"

namespace gtc {

template <class Ops>
typename Ops::Morph eval_expr(const Expr& e, Ops& ops) {
    switch (e.kind) {
        case ExprKind::box: return ops.box(e.sig);
        case ExprKind::id: return ops.id(e.left);
        case ExprKind::sym: return ops.sym(e.left, e.right);
        case ExprKind::comp: return ops.compose(eval_expr(*e.first, ops), eval_expr(*e.second, ops));
        case ExprKind::tensor: return ops.tensor(eval_expr(*e.first, ops), eval_expr(*e.second, ops));
        case ExprKind::trace: return ops.trace(eval_expr(*e.first, ops), e.shape(), e.left);
    }
    throw std::logic_error("eval_expr: bad expression kind");
}

}  // namespace gtc
