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

// Local copy/constant propagation within straight-line runs. Facts are
// "leaf == literal" or "leaf == other leaf"; they die on overwrites of either
// side, on control flow, and on validity changes. Header-field facts are only
// created while the header is statically valid: a value written to an invalid
// header's field does not define later reads. The CP-INVALID-HDR variant
// skips those validity conditions, which is precisely how it manufactures
// defined values out of undefined reads.
struct Propagator {
    const ControlIndex& idx;
    const ActionDecl* action;
    bool bug_ignore_validity;

    enum class Validity { Valid, Invalid, Unknown };

    struct Fact {
        BitRange target;                  // always a full leaf
        ExprPtr value;                    // IntLit / BoolLit / LValueExpr
        std::optional<BitRange> source;   // set when value is an lvalue read
        std::optional<std::string> target_header;
        std::optional<std::string> source_header;
    };

    std::vector<Fact> facts;
    std::map<std::string, Validity> validity;

    void reset_facts() { facts.clear(); }

    void barrier() {
        facts.clear();
        for (auto& [h, v] : validity) v = Validity::Unknown;
    }

    Validity validity_of(const std::string& header) const {
        auto it = validity.find(header);
        return it == validity.end() ? Validity::Unknown : it->second;
    }

    void kill_overlapping(const BitRange& written) {
        facts.erase(std::remove_if(facts.begin(), facts.end(),
                                   [&](const Fact& f) {
                                       if (f.target.overlaps(written)) return true;
                                       return f.source && f.source->overlaps(written);
                                   }),
                    facts.end());
    }

    void kill_header(const std::string& header) {
        facts.erase(std::remove_if(facts.begin(), facts.end(),
                                   [&](const Fact& f) {
                                       return (f.target_header && *f.target_header == header) ||
                                              (f.source_header && *f.source_header == header);
                                   }),
                    facts.end());
    }

    const Fact* fact_for(const BitRange& read) const {
        for (const auto& f : facts) {
            if (f.target.leaf == read.leaf && f.target.hi == read.hi && f.target.lo == read.lo)
                return &f;
        }
        return nullptr;
    }

    // Substitutes known full-leaf reads in an expression.
    ExprPtr substitute(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, LValueExpr>) {
                    auto r = idx.resolve(n.lvalue, action);
                    if (r && r->type.is_bit() && !n.lvalue.slice) {
                        const Fact* f = fact_for({r->leaf_path, r->hi, r->lo});
                        if (f) return clone(*f->value);
                    }
                    return clone(e);
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    return make_expr(e.loc, SliceExpr{substitute(*n.base), n.hi, n.lo});
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    return make_expr(e.loc, CastExpr{n.target, substitute(*n.arg)});
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    return make_expr(e.loc, UnaryExpr{n.op, substitute(*n.arg)});
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return make_expr(e.loc,
                                     BinaryExpr{n.op, substitute(*n.lhs), substitute(*n.rhs)});
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    return make_expr(e.loc, TernaryExpr{substitute(*n.cond),
                                                        substitute(*n.then_arm),
                                                        substitute(*n.else_arm)});
                } else {
                    return clone(e);
                }
            },
            e.node);
    }

    void learn_from_assign(const LValue& target, const Expr& rhs) {
        auto r = idx.resolve(target, action);
        if (!r || !r->type.is_bit()) return;
        BitRange written{r->leaf_path, r->hi, r->lo};
        kill_overlapping(written);
        if (target.slice) return;  // partial writes define no whole-leaf fact
        if (r->owning_header && !bug_ignore_validity &&
            validity_of(*r->owning_header) != Validity::Valid)
            return;

        Fact f;
        f.target = written;
        f.target_header = r->owning_header;
        if (const auto* lit = std::get_if<IntLit>(&rhs.node)) {
            if (!lit->width) return;  // untyped literal: width context unclear
            f.value = clone(rhs);
        } else if (std::holds_alternative<BoolLit>(rhs.node)) {
            f.value = clone(rhs);
        } else if (const auto* lv = std::get_if<LValueExpr>(&rhs.node)) {
            if (lv->lvalue.slice) return;
            auto src = idx.resolve(lv->lvalue, action);
            if (!src || !src->type.is_bit()) return;
            if (src->leaf_path == r->leaf_path) return;  // self copy
            if (src->owning_header && !bug_ignore_validity &&
                validity_of(*src->owning_header) != Validity::Valid)
                return;  // reading an invalid header is undefined
            f.value = clone(rhs);
            f.source = BitRange{src->leaf_path, src->hi, src->lo};
            f.source_header = src->owning_header;
        } else {
            return;
        }
        facts.push_back(std::move(f));
    }

    Block rewrite_block(const Block& in) {
        Block out;
        for (const auto& sp : in.stmts) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, AssignStmt>) {
                        ExprPtr rhs = substitute(*n.value);
                        const Expr& learned = *rhs;
                        out.stmts.push_back(make_stmt(sp->loc, AssignStmt{n.target, std::move(rhs)}));
                        learn_from_assign(n.target,
                                          *std::get<AssignStmt>(out.stmts.back()->node).value);
                        (void)learned;
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        IfStmt r;
                        r.cond = substitute(*n.cond);
                        // branch bodies propagate from the pre-branch facts
                        auto saved_facts = snapshot();
                        r.then_block = rewrite_block(n.then_block);
                        restore(saved_facts);
                        if (n.else_block) {
                            r.else_block = rewrite_block(*n.else_block);
                            restore(saved_facts);
                        }
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                        // conservative join: forget everything either branch
                        // might have changed
                        barrier();
                    } else if constexpr (std::is_same_v<T, BlockStmt>) {
                        BlockStmt r{rewrite_block(n.body)};
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                    } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                        ExprPtr init = n.init ? substitute(*n.init) : nullptr;
                        out.stmts.push_back(
                            make_stmt(sp->loc, VarDeclStmt{n.type, n.name, std::move(init)}));
                        const auto& decl = std::get<VarDeclStmt>(out.stmts.back()->node);
                        if (decl.init) {
                            LValue lv;
                            lv.path = {n.name};
                            learn_from_assign(lv, *decl.init);
                        }
                    } else if constexpr (std::is_same_v<T, CallStmt>) {
                        CallStmt r{n.callee, {}};
                        for (const auto& a : n.args) {
                            // writable argument slots are not reads
                            bool writable_slot = false;
                            if (auto it = idx.tp().arg_writable.find(a.get());
                                it != idx.tp().arg_writable.end())
                                writable_slot = it->second;
                            r.args.push_back(writable_slot ? clone(*a) : substitute(*a));
                        }
                        out.stmts.push_back(make_stmt(sp->loc, std::move(r)));
                        barrier();  // the callee may touch anything in scope
                    } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                        out.stmts.push_back(clone(*sp));
                        barrier();
                    } else if constexpr (std::is_same_v<T, ExitStmt>) {
                        out.stmts.push_back(clone(*sp));
                        barrier();
                    } else {  // SetValidityStmt
                        out.stmts.push_back(clone(*sp));
                        auto r = idx.resolve(n.header, action);
                        if (r && r->type.kind == SemType::Kind::Header) {
                            kill_header(r->leaf_path);
                            validity[r->leaf_path] =
                                n.make_valid ? Validity::Valid : Validity::Invalid;
                        }
                    }
                },
                sp->node);
        }
        return out;
    }

    struct Snapshot {
        std::vector<Fact> facts;
        std::map<std::string, Validity> validity;
    };
    Snapshot snapshot() const {
        Snapshot s;
        for (const auto& f : facts) {
            Fact c;
            c.target = f.target;
            c.value = clone(*f.value);
            c.source = f.source;
            c.target_header = f.target_header;
            c.source_header = f.source_header;
            s.facts.push_back(std::move(c));
        }
        s.validity = validity;
        return s;
    }
    void restore(const Snapshot& s) {
        facts.clear();
        for (const auto& f : s.facts) {
            Fact c;
            c.target = f.target;
            c.value = clone(*f.value);
            c.source = f.source;
            c.target_header = f.target_header;
            c.source_header = f.source_header;
            facts.push_back(std::move(c));
        }
        validity = s.validity;
    }
};

}  // namespace

ast::Program pass_copy_prop(const TypedProgram& p, const BugSet& bugs) {
    bool bug = bug_active(bugs, "CP-INVALID-HDR");
    Program out = clone(p.program);
    for (size_t ci = 0; ci < p.program.controls.size(); ++ci) {
        const ControlDecl& src = p.program.controls[ci];
        ControlDecl& dst = out.controls[ci];
        ControlIndex idx(p, src);

        auto initial_validity = [&]() {
            std::map<std::string, Propagator::Validity> v;
            for (const auto& prm : src.params) {
                SemType t = p.resolve_type(prm.type);
                for (const auto& h : headers_in_type(p, prm.name, t)) {
                    v[h] = prm.direction == Direction::Out ? Propagator::Validity::Invalid
                                                           : Propagator::Validity::Valid;
                }
            }
            return v;
        };

        for (size_t li = 0; li < src.locals.size(); ++li) {
            if (const auto* a = std::get_if<ActionDecl>(&src.locals[li])) {
                Propagator prop{idx, a, bug};
                // action bodies run from unknown callsite state
                for (auto& [h, v] : prop.validity) v = Propagator::Validity::Unknown;
                std::get<ActionDecl>(dst.locals[li]).body = prop.rewrite_block(a->body);
            }
        }
        Propagator prop{idx, nullptr, bug};
        prop.validity = initial_validity();
        dst.apply = prop.rewrite_block(src.apply);
    }
    return out;
}

}  // namespace minip4::passes
