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

#include <functional>

#include "pass_impls.h"
#include "rewrite_util.h"

namespace minip4::passes {

using namespace ast;

namespace {

// Hoists conditional operators out of compound expressions into fresh
// temporaries assigned via if/else, evaluation order preserved. A ternary
// that forms the entire right-hand side of an assignment or initializer is
// the canonical mux form and stays put.
struct Hoister {
    const TypedProgram& tp;
    const ControlIndex& idx;
    const ActionDecl* action;
    FreshNames& names;
    int& temp_counter;
    bool bug_miss_under_binary;

    std::vector<StmtPtr>* prelude = nullptr;

    ExprPtr rewrite(const Expr& e, bool root_rhs, bool parent_is_binary) {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, TernaryExpr>) {
                    ExprPtr cond = rewrite(*n.cond, false, false);
                    ExprPtr a = rewrite(*n.then_arm, false, false);
                    ExprPtr b = rewrite(*n.else_arm, false, false);
                    if (root_rhs || (bug_miss_under_binary && parent_is_binary)) {
                        return make_expr(e.loc,
                                         TernaryExpr{std::move(cond), std::move(a), std::move(b)});
                    }
                    return hoist(e, std::move(cond), std::move(a), std::move(b));
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    ExprPtr lhs = rewrite(*n.lhs, false, true);
                    ExprPtr rhs = rewrite(*n.rhs, false, true);
                    return make_expr(e.loc, BinaryExpr{n.op, std::move(lhs), std::move(rhs)});
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    return make_expr(e.loc, UnaryExpr{n.op, rewrite(*n.arg, false, false)});
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    return make_expr(e.loc, CastExpr{n.target, rewrite(*n.arg, false, false)});
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    return make_expr(e.loc,
                                     SliceExpr{rewrite(*n.base, false, false), n.hi, n.lo});
                } else {
                    return clone(e);
                }
            },
            e.node);
    }

    ExprPtr hoist(const Expr& orig, ExprPtr cond, ExprPtr a, ExprPtr b) {
        TypeRef temp_type;
        SemType t = tp.type_of(orig);
        if (t.is_bit()) {
            temp_type = TypeRef::bit(t.width);
        } else if (t.is_bool()) {
            temp_type = TypeRef::boolean();
        } else {
            auto s = shape_of(idx, orig, action);
            MINIP4_CHECK(s.has_value() && s->kind != ExprShape::Kind::Untyped,
                         "cannot determine hoisted ternary type");
            temp_type = s->kind == ExprShape::Kind::Bit ? TypeRef::bit(s->width)
                                                        : TypeRef::boolean();
        }
        std::string name = names.fresh("_t" + std::to_string(temp_counter++));
        prelude->push_back(make_stmt(orig.loc, VarDeclStmt{temp_type, name, nullptr}));
        LValue target;
        target.path = {name};
        IfStmt sel;
        sel.cond = std::move(cond);
        sel.then_block.stmts.push_back(make_stmt(orig.loc, AssignStmt{target, std::move(a)}));
        sel.else_block.emplace();
        sel.else_block->stmts.push_back(make_stmt(orig.loc, AssignStmt{target, std::move(b)}));
        prelude->push_back(make_stmt(orig.loc, std::move(sel)));
        return lvalue_expr(target);
    }

    Block rewrite_block(const Block& in) {
        Block out;
        for (const auto& sp : in.stmts) {
            std::vector<StmtPtr> pre;
            prelude = &pre;
            StmtPtr rewritten = rewrite_stmt(*sp);
            prelude = nullptr;
            for (auto& p : pre) out.stmts.push_back(std::move(p));
            out.stmts.push_back(std::move(rewritten));
        }
        return out;
    }

    StmtPtr rewrite_stmt(const Stmt& s) {
        return std::visit(
            [&](const auto& n) -> StmtPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    return make_stmt(s.loc, AssignStmt{n.target, rewrite(*n.value, true, false)});
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    IfStmt out;
                    out.cond = rewrite(*n.cond, false, false);
                    out.then_block = rewrite_block(n.then_block);
                    if (n.else_block) out.else_block = rewrite_block(*n.else_block);
                    return make_stmt(s.loc, std::move(out));
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    return make_stmt(s.loc, BlockStmt{rewrite_block(n.body)});
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    return make_stmt(s.loc,
                                     VarDeclStmt{n.type, n.name,
                                                 n.init ? rewrite(*n.init, true, false) : nullptr});
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    CallStmt out{n.callee, {}};
                    for (const auto& a : n.args)
                        out.args.push_back(rewrite(*a, false, false));
                    return make_stmt(s.loc, std::move(out));
                } else {
                    return clone(s);
                }
            },
            s.node);
    }
};

// Postcondition: outside of table keys, the only conditional operators left
// are bare assignment right-hand sides.
void check_no_nested_ternary(const Program& p) {
    std::function<void(const Expr&, bool)> check_expr = [&](const Expr& e, bool root_rhs) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, TernaryExpr>) {
                    MINIP4_CHECK(root_rhs,
                                 "SideEffectOrder postcondition: conditional operator "
                                 "survives inside a compound expression");
                    check_expr(*n.cond, false);
                    check_expr(*n.then_arm, false);
                    check_expr(*n.else_arm, false);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    check_expr(*n.lhs, false);
                    check_expr(*n.rhs, false);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    check_expr(*n.arg, false);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    check_expr(*n.arg, false);
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    check_expr(*n.base, false);
                }
            },
            e.node);
    };
    std::function<void(const Block&)> check_block = [&](const Block& b) {
        for (const auto& sp : b.stmts) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, AssignStmt>) {
                        check_expr(*n.value, true);
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        check_expr(*n.cond, false);
                        check_block(n.then_block);
                        if (n.else_block) check_block(*n.else_block);
                    } else if constexpr (std::is_same_v<T, BlockStmt>) {
                        check_block(n.body);
                    } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                        if (n.init) check_expr(*n.init, true);
                    } else if constexpr (std::is_same_v<T, CallStmt>) {
                        for (const auto& a : n.args) check_expr(*a, false);
                    }
                },
                sp->node);
        }
    };
    for (const auto& c : p.controls) {
        for (const auto& local : c.locals) {
            if (const auto* a = std::get_if<ActionDecl>(&local)) check_block(a->body);
        }
        check_block(c.apply);
    }
}

}  // namespace

ast::Program pass_side_effect_order(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "SEO-MISS-TERNARY");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        ControlIndex idx(p, src);
        FreshNames names(src);
        int temp_counter = 0;
        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                Hoister h{p, idx, a, names, temp_counter, bug};
                std::get<ActionDecl>(dst.locals[li]).body = h.rewrite_block(a->body);
            }
            // table keys and initializers of control-level declarations have
            // no statement context to hoist into; they stay as parsed
        }
        Hoister h{p, idx, nullptr, names, temp_counter, bug};
        dst.apply = h.rewrite_block(src.apply);
    }
    check_no_nested_ternary(out);
    return out;
}

}  // namespace minip4::passes
