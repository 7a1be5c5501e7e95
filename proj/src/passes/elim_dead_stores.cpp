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

// Removes assignments that are certainly overwritten before any read, within
// one straight-line statement run. Anything with control flow (if, call,
// apply, exit, validity changes) is a barrier. A store to a slice implicitly
// reads the rest of the leaf (the other bits survive the write), which is
// exactly the subtlety the seeded DSE-SLICE-ALIAS variant drops: it treats a
// later slice store as overwriting the whole variable.
struct DeadStoreScan {
    const ControlIndex& idx;
    const ActionDecl* action;
    bool bug_slice_alias;

    std::optional<BitRange> target_range(const AssignStmt& a) const {
        auto r = idx.resolve(a.target, action);
        if (!r || !r->type.is_bit()) return std::nullopt;
        return BitRange{r->leaf_path, r->hi, r->lo};
    }

    std::optional<BitRange> leaf_full_range(const AssignStmt& a) const {
        LValue base = a.target;
        base.slice.reset();
        auto r = idx.resolve(base, action);
        if (!r || !r->type.is_bit()) return std::nullopt;
        return BitRange{r->leaf_path, r->hi, r->lo};
    }

    // true when statement j's reads touch `range`
    bool reads_touch(const Stmt& s, const BitRange& range) const {
        std::vector<BitRange> reads;
        if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
            collect_reads(idx, *a->value, action, reads);
            if (a->target.slice && !bug_slice_alias) {
                // implicit read of the uncovered leaf bits
                if (auto full = leaf_full_range(*a); full) {
                    auto tr = target_range(*a);
                    if (tr) {
                        if (tr->hi < full->hi)
                            reads.push_back({full->leaf, full->hi, tr->hi + 1});
                        if (tr->lo > full->lo)
                            reads.push_back({full->leaf, tr->lo - 1, full->lo});
                    }
                }
            }
        } else if (const auto* v = std::get_if<VarDeclStmt>(&s.node)) {
            if (v->init) collect_reads(idx, *v->init, action, reads);
        }
        for (const auto& rd : reads)
            if (rd.overlaps(range)) return true;
        return false;
    }

    bool is_barrier(const Stmt& s) const {
        return !std::holds_alternative<AssignStmt>(s.node) &&
               !std::holds_alternative<VarDeclStmt>(s.node);
    }

    // one pass over a statement list; returns indices of dead assignments
    std::vector<bool> find_dead(const std::vector<StmtPtr>& stmts) const {
        std::vector<bool> dead(stmts.size(), false);
        for (size_t i = 0; i < stmts.size(); ++i) {
            const auto* store = std::get_if<AssignStmt>(&stmts[i]->node);
            if (!store) continue;
            auto range = target_range(*store);
            if (!range) continue;
            for (size_t j = i + 1; j < stmts.size(); ++j) {
                if (dead[j]) continue;
                if (is_barrier(*stmts[j])) break;
                if (reads_touch(*stmts[j], *range)) break;
                const auto* later = std::get_if<AssignStmt>(&stmts[j]->node);
                if (!later) continue;
                auto later_range = bug_slice_alias ? leaf_full_range(*later)
                                                   : target_range(*later);
                if (!later_range) continue;
                if (later_range->covers(*range)) {
                    dead[i] = true;
                    break;
                }
            }
        }
        return dead;
    }

    Block rewrite_block(const Block& in) const {
        // delete-until-stable so chains of dead stores fall in one pass run
        std::vector<StmtPtr> stmts;
        for (const auto& sp : in.stmts) stmts.push_back(clone(*sp));
        while (true) {
            std::vector<bool> dead = find_dead(stmts);
            bool any = false;
            std::vector<StmtPtr> kept;
            for (size_t i = 0; i < stmts.size(); ++i) {
                if (dead[i]) {
                    any = true;
                    continue;
                }
                kept.push_back(std::move(stmts[i]));
            }
            stmts = std::move(kept);
            if (!any) break;
        }
        Block out;
        for (auto& sp : stmts) {
            if (auto* f = std::get_if<IfStmt>(&sp->node)) {
                IfStmt r;
                r.cond = clone(*f->cond);
                r.then_block = rewrite_block(f->then_block);
                if (f->else_block) r.else_block = rewrite_block(*f->else_block);
                out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
            } else if (auto* b = std::get_if<BlockStmt>(&sp->node)) {
                out.stmts.push_back(make_stmt(sp->loc, BlockStmt{rewrite_block(b->body)}));
            } else {
                out.stmts.push_back(std::move(sp));
            }
        }
        return out;
    }
};

}  // namespace

ast::Program pass_elim_dead_stores(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "DSE-SLICE-ALIAS");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        ControlIndex idx(p, src);
        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                DeadStoreScan scan{idx, a, bug};
                std::get<ActionDecl>(dst.locals[li]).body = scan.rewrite_block(a->body);
            }
        }
        DeadStoreScan scan{idx, nullptr, bug};
        dst.apply = scan.rewrite_block(src.apply);
    }
    return out;
}

}  // namespace minip4::passes
