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
#include <unordered_set>

#include "pass_impls.h"
#include "rewrite_util.h"

namespace minip4::passes {

using namespace ast;

namespace {

// Splices direct calls to parameter-less actions into the caller. Locals
// declared in the spliced body are renamed to keep the control-wide
// namespace collision-free. Parameterized actions are left for
// RemoveActionParams.
struct Inliner {
    const ControlDecl& control;
    FreshNames& names;
    int& inline_counter;
    std::unordered_set<std::string> table_referenced;
    std::map<std::string, const ActionDecl*> actions;
    std::unordered_set<std::string> still_called;

    const ActionDecl* find_action(const std::string& name) const {
        auto it = actions.find(name);
        return it == actions.end() ? nullptr : it->second;
    }

    Block rewrite_block(const Block& in) {
        Block out;
        for (const auto& sp : in.stmts) {
            if (const auto* call = std::get_if<CallStmt>(&sp->node)) {
                if (call->callee == kNoActionName && call->args.empty()) {
                    continue;  // a no-op call disappears
                }
                const ActionDecl* a = find_action(call->callee);
                if (a && a->params.empty()) {
                    out.stmts.push_back(make_stmt(sp->loc, BlockStmt{splice(*a)}));
                    continue;
                }
                if (a) still_called.insert(a->name);
                out.stmts.push_back(clone(*sp));
                continue;
            }
            if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                IfStmt r;
                r.cond = clone(*f->cond);
                r.then_block = rewrite_block(f->then_block);
                if (f->else_block) r.else_block = rewrite_block(*f->else_block);
                out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
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

    Block splice(const ActionDecl& a) {
        Block body = clone(a.body);
        // rename body-local declarations
        std::map<std::string, std::string> renames;
        std::function<void(const Block&)> collect = [&](const Block& b) {
            for (const auto& sp : b.stmts) {
                if (const auto* v = std::get_if<VarDeclStmt>(&sp->node)) {
                    renames[v->name] =
                        names.fresh("_i" + std::to_string(inline_counter++));
                } else if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                    collect(f->then_block);
                    if (f->else_block) collect(*f->else_block);
                } else if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                    collect(blk->body);
                }
            }
        };
        collect(body);
        if (!renames.empty()) rename_decls(body, renames);
        return body;
    }
};

}  // namespace

ast::Program pass_inline_calls(const TypedProgram& p, const BugSet&) {
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        FreshNames names(src);
        int counter = 0;
        Inliner inliner{src, names, counter, {}, {}, {}};
        for (const auto& local : src.locals) {
            if (const auto* a = std::get_if<ActionDecl>(&local)) {
                inliner.actions[a->name] = a;
            } else if (const auto* t = std::get_if<TableDecl>(&local)) {
                for (const auto& name : t->actions) inliner.table_referenced.insert(name);
                inliner.table_referenced.insert(t->default_action);
            }
        }
        dst.apply = inliner.rewrite_block(src.apply);

        // Drop parameter-less actions whose only callers were inlined.
        std::vector<ControlLocal> kept;
        for (size_t li = 0; li < dst.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                bool removable = a->params.empty() && !inliner.table_referenced.count(a->name) &&
                                 !inliner.still_called.count(a->name);
                if (removable) continue;
            }
            kept.push_back(std::move(dst.locals[li]));
        }
        dst.locals = std::move(kept);
    }
    return out;
}

}  // namespace minip4::passes
