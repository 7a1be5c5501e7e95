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

// Rewrites parameterized actions into parameter-less per-call-site clones:
// tmp_<param> locals, copy-in before the body, copy-out at every exit point.
// Exit statements respect copy-in/copy-out, so the write-back precedes them.
struct SiteRewriter {
    FreshNames& names;
    bool bug_skip_copyout_on_exit;

    struct Clone {
        std::string source_action;
        ActionDecl decl;
    };

    Clone make_clone(const ActionDecl& action, const CallStmt& call, int site,
                     bool multiple_sites) {
        Clone out;
        out.source_action = action.name;
        out.decl.name = multiple_sites ? names.fresh(action.name + "_" + std::to_string(site))
                                       : action.name;
        out.decl.loc = action.loc;

        std::map<std::string, std::string> renames;
        std::vector<StmtPtr> copy_in;
        std::vector<StmtPtr> copy_out;
        for (size_t i = 0; i < action.params.size(); ++i) {
            const Param& prm = action.params[i];
            std::string tmp = names.fresh("tmp_" + prm.name);
            renames[prm.name] = tmp;
            if (prm.direction == Direction::Out) {
                // stays uninitialized, as the parameter itself would
                copy_in.push_back(make_stmt(action.loc, VarDeclStmt{prm.type, tmp, nullptr}));
            } else {
                copy_in.push_back(
                    make_stmt(action.loc, VarDeclStmt{prm.type, tmp, clone(*call.args[i])}));
            }
            if (prm.direction != Direction::In) {
                auto lv = expr_as_lvalue(*call.args[i]);
                MINIP4_CHECK(lv.has_value(), "inout argument must be an lvalue");
                LValue read_back;
                read_back.path = {tmp};
                copy_out.push_back(
                    make_stmt(action.loc, AssignStmt{*lv, lvalue_expr(read_back)}));
            }
        }

        Block body = clone(action.body);
        rename_decls(body, renames);
        if (!bug_skip_copyout_on_exit) insert_copyout_before_exits(body, copy_out);

        Block full;
        for (auto& s : copy_in) full.stmts.push_back(std::move(s));
        for (auto& s : body.stmts) full.stmts.push_back(std::move(s));
        for (const auto& s : copy_out) full.stmts.push_back(clone(*s));
        out.decl.body = std::move(full);
        return out;
    }

    static void insert_copyout_before_exits(Block& b, const std::vector<StmtPtr>& copy_out) {
        for (auto& sp : b.stmts) {
            if (std::holds_alternative<ExitStmt>(sp->node)) {
                Block wrapper;
                for (const auto& c : copy_out) wrapper.stmts.push_back(clone(*c));
                wrapper.stmts.push_back(make_stmt(sp->loc, ExitStmt{}));
                sp = make_stmt(sp->loc, BlockStmt{std::move(wrapper)});
            } else if (auto* f = std::get_if<IfStmt>(&sp->node)) {
                insert_copyout_before_exits(f->then_block, copy_out);
                if (f->else_block) insert_copyout_before_exits(*f->else_block, copy_out);
            } else if (auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                insert_copyout_before_exits(blk->body, copy_out);
            }
        }
    }
};

}  // namespace

ast::Program pass_remove_action_params(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "RAP-EXIT-SKIP-COPYOUT");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];

        std::map<std::string, const ActionDecl*> parameterized;
        for (const auto& local : src.locals) {
            if (const auto* a = std::get_if<ActionDecl>(&local)) {
                if (!a->params.empty()) parameterized[a->name] = a;
            }
        }
        if (parameterized.empty()) continue;

        FreshNames names(src);
        SiteRewriter rewriter{names, bug};
        std::map<std::string, int> site_counts;
        std::map<std::string, int> total_sites;

        // count sites first so single-site actions keep their name
        std::function<void(const Block&)> count = [&](const Block& b) {
            for (const auto& sp : b.stmts) {
                if (const auto* call = std::get_if<CallStmt>(&sp->node)) {
                    if (parameterized.count(call->callee)) ++total_sites[call->callee];
                } else if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                    count(f->then_block);
                    if (f->else_block) count(*f->else_block);
                } else if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                    count(blk->body);
                }
            }
        };
        count(src.apply);

        std::vector<SiteRewriter::Clone> new_actions;
        std::function<Block(const Block&)> rewrite = [&](const Block& in) -> Block {
            Block outb;
            for (const auto& sp : in.stmts) {
                if (const auto* call = std::get_if<CallStmt>(&sp->node);
                    call && parameterized.count(call->callee)) {
                    const ActionDecl& action = *parameterized.at(call->callee);
                    int site = site_counts[call->callee]++;
                    auto cl = rewriter.make_clone(action, *call, site,
                                                  total_sites[call->callee] > 1);
                    outb.stmts.push_back(
                        make_stmt(sp->loc, CallStmt{cl.decl.name, {}}));
                    new_actions.push_back(std::move(cl));
                    continue;
                }
                if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                    IfStmt r;
                    r.cond = clone(*f->cond);
                    r.then_block = rewrite(f->then_block);
                    if (f->else_block) r.else_block = rewrite(*f->else_block);
                    outb.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                    continue;
                }
                if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                    outb.stmts.push_back(make_stmt(sp->loc, BlockStmt{rewrite(blk->body)}));
                    continue;
                }
                outb.stmts.push_back(clone(*sp));
            }
            return outb;
        };
        Block new_apply = rewrite(src.apply);

        // Replace parameterized action declarations with their clones, in
        // place, preserving declaration order for everything else.
        std::vector<ControlLocal> locals;
        for (size_t li = 0; li < dst.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li]);
                a && !a->params.empty()) {
                for (auto& cl : new_actions) {
                    if (cl.source_action == a->name) locals.push_back(std::move(cl.decl));
                }
                continue;  // uncalled parameterized actions are dropped
            }
            locals.push_back(std::move(dst.locals[li]));
        }
        dst.locals = std::move(locals);
        dst.apply = std::move(new_apply);
    }
    return out;
}

}  // namespace minip4::passes
