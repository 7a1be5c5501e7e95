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

// Rewrites if/else whose branches contain only assignments into mux
// assignments: t = cond ? then_value : else_value. Branches are processed
// innermost-first, so nested ifs become mux assignments before the outer if
// is considered. Conversion is conservative: any read/write interference
// between branch statements keeps the if as-is.
struct Predicator {
    const ControlIndex& idx;
    const ActionDecl* action;
    bool bug_unguarded_mux;

    Block rewrite_block(const Block& in) {
        Block out;
        for (const auto& sp : in.stmts) {
            if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                IfStmt r;
                r.cond = clone(*f->cond);
                r.then_block = rewrite_block(f->then_block);
                if (f->else_block) r.else_block = rewrite_block(*f->else_block);
                if (!try_convert(sp->loc, r, out)) {
                    out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                }
                continue;
            }
            if (const auto* b = std::get_if<BlockStmt>(&sp->node)) {
                out.stmts.push_back(make_stmt(sp->loc, BlockStmt{rewrite_block(b->body)}));
                continue;
            }
            out.stmts.push_back(clone(*sp));
        }
        return out;
    }

    struct TargetInfo {
        LValue lvalue;
        BitRange range;
        const Expr* then_rhs = nullptr;
        const Expr* else_rhs = nullptr;
    };

    bool try_convert(SourceLoc loc, const IfStmt& f, Block& out) {
        std::vector<const AssignStmt*> then_assigns, else_assigns;
        if (!only_assigns(f.then_block, then_assigns)) return false;
        if (f.else_block && !only_assigns(*f.else_block, else_assigns)) return false;
        if (then_assigns.empty() && else_assigns.empty()) {
            return true;  // empty if: drop it (condition is pure)
        }

        std::vector<TargetInfo> targets;
        std::vector<BitRange> written;
        auto add = [&](const AssignStmt* a, bool is_then) -> bool {
            auto r = idx.resolve(a->target, action);
            if (!r || !r->type.is_bit()) return false;  // bool targets: bail
            BitRange range{r->leaf_path, r->hi, r->lo};
            for (auto& t : targets) {
                if (t.range.leaf == range.leaf && t.range.hi == range.hi &&
                    t.range.lo == range.lo) {
                    const Expr*& slot = is_then ? t.then_rhs : t.else_rhs;
                    if (slot) return false;  // same target written twice in a branch
                    slot = a->value.get();
                    return true;
                }
                if (t.range.overlaps(range)) return false;  // partial overlap: bail
            }
            TargetInfo info;
            info.lvalue = a->target;
            info.range = range;
            (is_then ? info.then_rhs : info.else_rhs) = a->value.get();
            targets.push_back(std::move(info));
            written.push_back(range);
            return true;
        };
        for (const auto* a : then_assigns)
            if (!add(a, true)) return false;
        for (const auto* a : else_assigns)
            if (!add(a, false)) return false;

        // neither the condition nor any branch expression may read anything
        // either branch writes
        std::vector<BitRange> reads;
        collect_reads(idx, *f.cond, action, reads);
        for (const auto* a : then_assigns) collect_reads(idx, *a->value, action, reads);
        for (const auto* a : else_assigns) collect_reads(idx, *a->value, action, reads);
        for (const auto& rd : reads)
            for (const auto& wr : written)
                if (rd.overlaps(wr)) return false;

        for (const auto& t : targets) {
            ExprPtr then_val = t.then_rhs ? clone(*t.then_rhs) : lvalue_expr(t.lvalue);
            ExprPtr else_val = t.else_rhs ? clone(*t.else_rhs) : lvalue_expr(t.lvalue);
            const Expr* sole = t.then_rhs && !t.else_rhs ? t.then_rhs
                               : !t.then_rhs && t.else_rhs ? t.else_rhs
                                                           : nullptr;
            if (bug_unguarded_mux && sole && std::holds_alternative<TernaryExpr>(sole->node)) {
                // already-predicated assignments are assumed guarded and get
                // hoisted out without the outer condition
                out.stmts.push_back(make_stmt(loc, AssignStmt{t.lvalue, clone(*sole)}));
                continue;
            }
            ExprPtr mux = make_expr(loc, TernaryExpr{clone(*f.cond), std::move(then_val),
                                                     std::move(else_val)});
            out.stmts.push_back(make_stmt(loc, AssignStmt{t.lvalue, std::move(mux)}));
        }
        return true;
    }

    static bool only_assigns(const Block& b, std::vector<const AssignStmt*>& out) {
        for (const auto& sp : b.stmts) {
            const auto* a = std::get_if<AssignStmt>(&sp->node);
            if (!a) return false;
            out.push_back(a);
        }
        return true;
    }
};

}  // namespace

ast::Program pass_predicate(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "PRED-NESTED-IF");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        ControlIndex idx(p, src);
        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                Predicator pred{idx, a, bug};
                std::get<ActionDecl>(dst.locals[li]).body = pred.rewrite_block(a->body);
            }
        }
        Predicator pred{idx, nullptr, bug};
        dst.apply = pred.rewrite_block(src.apply);
    }
    return out;
}

}  // namespace minip4::passes
