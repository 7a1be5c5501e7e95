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

bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_u64(uint64_t v) {
    int n = 0;
    while (v > 1) {
        v >>= 1;
        ++n;
    }
    return n;
}

struct Reducer {
    const ControlIndex& idx;
    const ActionDecl* action;
    bool bug_slice_overflow;

    std::optional<int> width_of(const Expr& e) const {
        auto s = shape_of(idx, e, action);
        if (s && s->kind == ExprShape::Kind::Bit) return s->width;
        return std::nullopt;
    }

    static const IntLit* as_lit(const Expr& e) { return std::get_if<IntLit>(&e.node); }

    ExprPtr reduce(const Expr& e) {
        ExprPtr out = std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, SliceExpr>) {
                    return rematch(make_expr(e.loc, SliceExpr{reduce(*n.base), n.hi, n.lo}));
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    return make_expr(e.loc, CastExpr{n.target, reduce(*n.arg)});
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    return make_expr(e.loc, UnaryExpr{n.op, reduce(*n.arg)});
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return rematch(make_expr(
                        e.loc, BinaryExpr{n.op, reduce(*n.lhs), reduce(*n.rhs)}));
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    return make_expr(e.loc, TernaryExpr{reduce(*n.cond), reduce(*n.then_arm),
                                                        reduce(*n.else_arm)});
                } else {
                    return clone(e);
                }
            },
            e.node);
        return out;
    }

    // Applies local rewrites until the node shape stops matching. Children
    // are already reduced.
    ExprPtr rematch(ExprPtr e) {
        while (true) {
            if (auto* b = std::get_if<BinaryExpr>(&e->node)) {
                const IntLit* ll = as_lit(*b->lhs);
                const IntLit* rl = as_lit(*b->rhs);
                auto width = [&]() { return width_of(*e); };
                switch (b->op) {
                    case BinOp::Mul:
                        if (rl && rl->value == 1) { e = std::move(b->lhs); continue; }
                        if (ll && ll->value == 1) { e = std::move(b->rhs); continue; }
                        if ((rl && rl->value == 0) || (ll && ll->value == 0)) {
                            if (auto w = width()) { e = int_lit(0, *w); }
                            break;
                        }
                        if (rl && is_power_of_two(rl->value)) {
                            e = make_expr(e->loc,
                                          BinaryExpr{BinOp::Shl, std::move(b->lhs),
                                                     int_lit(log2_u64(rl->value))});
                            continue;
                        }
                        if (ll && is_power_of_two(ll->value)) {
                            e = make_expr(e->loc,
                                          BinaryExpr{BinOp::Shl, std::move(b->rhs),
                                                     int_lit(log2_u64(ll->value))});
                            continue;
                        }
                        break;
                    case BinOp::Add:
                        if (rl && rl->value == 0) { e = std::move(b->lhs); continue; }
                        if (ll && ll->value == 0) { e = std::move(b->rhs); continue; }
                        break;
                    case BinOp::Sub:
                        if (rl && rl->value == 0) { e = std::move(b->lhs); continue; }
                        break;
                    case BinOp::BitAnd:
                        if ((rl && rl->value == 0) || (ll && ll->value == 0)) {
                            if (auto w = width()) e = int_lit(0, *w);
                            break;
                        }
                        if (auto w = width()) {
                            uint64_t full = *w >= 64 ? ~0ull : ((1ull << *w) - 1);
                            if (rl && rl->value == full) { e = std::move(b->lhs); continue; }
                            if (ll && ll->value == full) { e = std::move(b->rhs); continue; }
                        }
                        break;
                    case BinOp::BitOr:
                    case BinOp::BitXor:
                        if (rl && rl->value == 0) { e = std::move(b->lhs); continue; }
                        if (ll && ll->value == 0) { e = std::move(b->rhs); continue; }
                        break;
                    case BinOp::Shl:
                    case BinOp::Shr:
                        if (rl && rl->value == 0) { e = std::move(b->lhs); continue; }
                        if (rl && rl->value > 0) {
                            if (auto w = width_of(*b->lhs);
                                w && rl->value >= static_cast<uint64_t>(*w)) {
                                e = int_lit(0, *w);
                                break;
                            }
                        }
                        break;
                    default: break;
                }
            }
            if (auto* sl = std::get_if<SliceExpr>(&e->node)) {
                if (auto* inner = std::get_if<SliceExpr>(&sl->base->node)) {
                    int hi = inner->lo + sl->hi;
                    int lo = inner->lo + sl->lo;
                    e = make_expr(e->loc, SliceExpr{std::move(inner->base), hi, lo});
                    continue;
                }
                if (auto* shr = std::get_if<BinaryExpr>(&sl->base->node);
                    shr && shr->op == BinOp::Shr) {
                    if (const IntLit* amt = as_lit(*shr->rhs)) {
                        auto w = width_of(*shr->lhs);
                        int hi = sl->hi + static_cast<int>(amt->value);
                        int lo = sl->lo + static_cast<int>(amt->value);
                        // narrowing a shifted read to a direct slice; the
                        // rewrite is only meaning-preserving when the new
                        // range stays inside the operand
                        bool in_range = w && hi < *w;
                        if (in_range || bug_slice_overflow) {
                            e = make_expr(e->loc, SliceExpr{std::move(shr->lhs), hi, lo});
                            continue;
                        }
                    }
                }
            }
            break;
        }
        return e;
    }

    void reduce_block(const Block& in, Block& out) {
        for (const auto& sp : in.stmts) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, AssignStmt>) {
                        out.stmts.push_back(
                            make_stmt(sp->loc, AssignStmt{n.target, reduce(*n.value)}));
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        IfStmt r;
                        r.cond = reduce(*n.cond);
                        reduce_block(n.then_block, r.then_block);
                        if (n.else_block) {
                            r.else_block.emplace();
                            reduce_block(*n.else_block, *r.else_block);
                        }
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                    } else if constexpr (std::is_same_v<T, BlockStmt>) {
                        BlockStmt r;
                        reduce_block(n.body, r.body);
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                    } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                        out.stmts.push_back(make_stmt(
                            sp->loc,
                            VarDeclStmt{n.type, n.name, n.init ? reduce(*n.init) : nullptr}));
                    } else if constexpr (std::is_same_v<T, CallStmt>) {
                        CallStmt r{n.callee, {}};
                        for (const auto& a : n.args) r.args.push_back(reduce(*a));
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                    } else {
                        out.stmts.push_back(clone(*sp));
                    }
                },
                sp->node);
        }
    }
};

}  // namespace

ast::Program pass_strength_reduce(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "SR-SLICE-OVERFLOW");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        ControlIndex idx(p, src);
        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* v = std::get_if<LocalVarDecl>(&src.locals[li])) {
                if (v->init) {
                    Reducer rd{idx, nullptr, bug};
                    std::get<LocalVarDecl>(dst.locals[li]).init = rd.reduce(*v->init);
                }
            } else if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                Reducer rd{idx, a, bug};
                Block body;
                rd.reduce_block(a->body, body);
                std::get<ActionDecl>(dst.locals[li]).body = std::move(body);
            } else {
                const auto& t = std::get<TableDecl>(src.locals[li]);
                Reducer rd{idx, nullptr, bug};
                std::get<TableDecl>(dst.locals[li]).key = rd.reduce(*t.key);
            }
        }
        Reducer rd{idx, nullptr, bug};
        Block apply;
        rd.reduce_block(src.apply, apply);
        dst.apply = std::move(apply);
    }
    return out;
}

}  // namespace minip4::passes
