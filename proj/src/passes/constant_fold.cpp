// Copyright 2026 The MiniP4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pass_impls.h"
#include "rewrite_util.h"

namespace minip4::passes {

using namespace ast;

namespace {

uint64_t mask_for(int w) { return w >= 64 ? ~0ull : ((1ull << w) - 1); }

struct Folder {
    const TypedProgram& tp;

    // Result carries the literal's width when the context gave it one; the
    // typechecker stamped every literal that flows into a sized position.
    std::optional<int> lit_width(const Expr& orig) const {
        SemType t = tp.type_of(orig);
        return t.is_bit() ? std::optional(t.width) : std::nullopt;
    }

    ExprPtr fold(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> ExprPtr { return fold_node(e, n); },
            e.node);
    }

    ExprPtr fold_node(const Expr& e, const IntLit& n) { return clone(e); (void)n; }
    ExprPtr fold_node(const Expr& e, const BoolLit& n) { return clone(e); (void)n; }
    ExprPtr fold_node(const Expr& e, const LValueExpr& n) { return clone(e); (void)n; }
    ExprPtr fold_node(const Expr& e, const IsValidExpr& n) { return clone(e); (void)n; }

    ExprPtr fold_node(const Expr& e, const SliceExpr& n) {
        ExprPtr base = fold(*n.base);
        if (const auto* lit = std::get_if<IntLit>(&base->node)) {
            if (lit->width) {
                uint64_t v = (lit->value >> n.lo) & mask_for(n.hi - n.lo + 1);
                return int_lit(v, n.hi - n.lo + 1);
            }
        }
        return make_expr(e.loc, SliceExpr{std::move(base), n.hi, n.lo});
    }

    ExprPtr fold_node(const Expr& e, const CastExpr& n) {
        ExprPtr arg = fold(*n.arg);
        if (n.target.kind == TypeRef::Kind::Bit) {
            if (const auto* lit = std::get_if<IntLit>(&arg->node))
                return int_lit(lit->value & mask_for(n.target.width), n.target.width);
            if (const auto* b = std::get_if<BoolLit>(&arg->node))
                return int_lit(b->value ? 1 : 0, n.target.width);
        } else {
            if (const auto* lit = std::get_if<IntLit>(&arg->node))
                return bool_lit(lit->value == 1);
            if (const auto* b = std::get_if<BoolLit>(&arg->node)) return bool_lit(b->value);
        }
        return make_expr(e.loc, CastExpr{n.target, std::move(arg)});
    }

    ExprPtr fold_node(const Expr& e, const UnaryExpr& n) {
        ExprPtr arg = fold(*n.arg);
        if (const auto* lit = std::get_if<IntLit>(&arg->node)) {
            std::optional<int> w = lit->width ? lit->width : lit_width(e);
            if (w) {
                uint64_t m = mask_for(*w);
                uint64_t v = n.op == UnOp::BitNot ? (~lit->value & m)
                                                  : ((~lit->value + 1) & m);
                return int_lit(v, *w);
            }
        }
        if (const auto* b = std::get_if<BoolLit>(&arg->node); b && n.op == UnOp::BoolNot)
            return bool_lit(!b->value);
        return make_expr(e.loc, UnaryExpr{n.op, std::move(arg)});
    }

    ExprPtr fold_node(const Expr& e, const TernaryExpr& n) {
        ExprPtr cond = fold(*n.cond);
        if (const auto* b = std::get_if<BoolLit>(&cond->node))
            return b->value ? fold(*n.then_arm) : fold(*n.else_arm);
        return make_expr(e.loc,
                         TernaryExpr{std::move(cond), fold(*n.then_arm), fold(*n.else_arm)});
    }

    ExprPtr fold_node(const Expr& e, const BinaryExpr& n) {
        ExprPtr lhs = fold(*n.lhs);
        ExprPtr rhs = fold(*n.rhs);
        const auto* li = std::get_if<IntLit>(&lhs->node);
        const auto* ri = std::get_if<IntLit>(&rhs->node);
        const auto* lb = std::get_if<BoolLit>(&lhs->node);
        const auto* rb = std::get_if<BoolLit>(&rhs->node);

        if (n.op == BinOp::BoolAnd || n.op == BinOp::BoolOr) {
            if (lb && rb)
                return bool_lit(n.op == BinOp::BoolAnd ? (lb->value && rb->value)
                                                       : (lb->value || rb->value));
            // short-circuit shapes with one constant side (operands are pure)
            if (lb) return n.op == BinOp::BoolAnd ? (lb->value ? std::move(rhs) : bool_lit(false))
                                                  : (lb->value ? bool_lit(true) : std::move(rhs));
            if (rb) return n.op == BinOp::BoolAnd ? (rb->value ? std::move(lhs) : bool_lit(false))
                                                  : (rb->value ? bool_lit(true) : std::move(lhs));
        } else if (li && ri) {
            // width: stamped result width for arithmetic; comparisons need the
            // common operand width.
            if (is_comparison(n.op)) {
                uint64_t a = li->value, b = ri->value;
                bool v = false;
                switch (n.op) {
                    case BinOp::Eq: v = a == b; break;
                    case BinOp::Ne: v = a != b; break;
                    case BinOp::Lt: v = a < b; break;
                    case BinOp::Le: v = a <= b; break;
                    case BinOp::Gt: v = a > b; break;
                    case BinOp::Ge: v = a >= b; break;
                    default: break;
                }
                return bool_lit(v);
            }
            if (n.op == BinOp::Concat) {
                if (li->width && ri->width) {
                    int w = *li->width + *ri->width;
                    return int_lit((li->value << *ri->width) | ri->value, w);
                }
            } else if (n.op == BinOp::Shl || n.op == BinOp::Shr) {
                std::optional<int> w = li->width ? li->width : lit_width(e);
                if (w) {
                    uint64_t amount = ri->value;
                    uint64_t v = 0;
                    if (amount < static_cast<uint64_t>(*w))
                        v = n.op == BinOp::Shl ? (li->value << amount) & mask_for(*w)
                                               : (li->value >> amount);
                    return int_lit(v, *w);
                }
            } else {
                std::optional<int> w = lit_width(e);
                if (!w && li->width) w = li->width;
                if (!w && ri->width) w = ri->width;
                if (w) {
                    uint64_t m = mask_for(*w);
                    uint64_t a = li->value, b = ri->value, v = 0;
                    switch (n.op) {
                        case BinOp::Add: v = (a + b) & m; break;
                        case BinOp::Sub: v = (a - b) & m; break;
                        case BinOp::Mul: v = (a * b) & m; break;
                        case BinOp::BitAnd: v = a & b; break;
                        case BinOp::BitOr: v = a | b; break;
                        case BinOp::BitXor: v = a ^ b; break;
                        default: break;
                    }
                    return int_lit(v, *w);
                }
            }
        }
        return make_expr(e.loc, BinaryExpr{n.op, std::move(lhs), std::move(rhs)});
    }

    // ---------------------------------------------------------- statements

    void fold_block(const Block& in, Block& out) {
        for (const auto& sp : in.stmts) fold_stmt(*sp, out);
    }

    void fold_stmt(const Stmt& s, Block& out) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    out.stmts.push_back(make_stmt(s.loc, AssignStmt{n.target, fold(*n.value)}));
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    ExprPtr cond = fold(*n.cond);
                    if (const auto* b = std::get_if<BoolLit>(&cond->node)) {
                        // keep block scoping when the branch stays
                        Block branch;
                        if (b->value) {
                            fold_block(n.then_block, branch);
                        } else if (n.else_block) {
                            fold_block(*n.else_block, branch);
                        }
                        if (!branch.stmts.empty())
                            out.stmts.push_back(make_stmt(s.loc, BlockStmt{std::move(branch)}));
                        return;
                    }
                    IfStmt folded;
                    folded.cond = std::move(cond);
                    fold_block(n.then_block, folded.then_block);
                    if (n.else_block) {
                        folded.else_block.emplace();
                        fold_block(*n.else_block, *folded.else_block);
                    }
                    out.stmts.push_back(make_stmt(s.loc, std::move(folded)));
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    BlockStmt folded;
                    fold_block(n.body, folded.body);
                    out.stmts.push_back(make_stmt(s.loc, std::move(folded)));
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    out.stmts.push_back(make_stmt(
                        s.loc, VarDeclStmt{n.type, n.name, n.init ? fold(*n.init) : nullptr}));
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    CallStmt folded{n.callee, {}};
                    for (const auto& a : n.args) folded.args.push_back(fold(*a));
                    out.stmts.push_back(make_stmt(s.loc, std::move(folded)));
                } else {
                    out.stmts.push_back(clone(s));
                }
            },
            s.node);
    }
};

}  // namespace

ast::Program pass_constant_fold(const TypedProgram& p, const BugSet&) {
    Folder folder{p};
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* v = std::get_if<LocalVarDecl>(&src.locals[li])) {
                if (v->init)
                    std::get<LocalVarDecl>(dst.locals[li]).init = folder.fold(*v->init);
            } else if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                Block folded;
                folder.fold_block(a->body, folded);
                std::get<ActionDecl>(dst.locals[li]).body = std::move(folded);
            } else {
                const auto& t = std::get<TableDecl>(src.locals[li]);
                std::get<TableDecl>(dst.locals[li]).key = folder.fold(*t.key);
            }
        }
        Block folded;
        folder.fold_block(src.apply, folded);
        dst.apply = std::move(folded);
    }
    return out;
}

}  // namespace minip4::passes
