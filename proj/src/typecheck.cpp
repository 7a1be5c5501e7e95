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

#include "minip4/typecheck.h"

#include <algorithm>
#include <unordered_set>

namespace minip4 {

using namespace ast;

SemType TypedProgram::resolve_type(const TypeRef& t) const {
    switch (t.kind) {
        case TypeRef::Kind::Bit: return SemType::bit(t.width);
        case TypeRef::Kind::Bool: return SemType::boolean();
        case TypeRef::Kind::Named: {
            if (auto it = headers.find(t.name); it != headers.end())
                return {SemType::Kind::Header, 0, it->second, nullptr};
            if (auto it = structs.find(t.name); it != structs.end())
                return {SemType::Kind::Struct, 0, nullptr, it->second};
            return SemType::error();
        }
    }
    return SemType::error();
}

std::vector<LeafField> flatten_type(const TypedProgram& tp, const std::string& root,
                                    const SemType& type) {
    std::vector<LeafField> out;
    std::function<void(const std::string&, const SemType&, const std::optional<std::string>&)>
        walk = [&](const std::string& path, const SemType& t,
                   const std::optional<std::string>& owner) {
            switch (t.kind) {
                case SemType::Kind::Bit:
                    out.push_back({path, t.width, owner});
                    break;
                case SemType::Kind::Header:
                    for (const auto& f : t.header->fields)
                        out.push_back({path + "." + f.name, f.type.width, path});
                    break;
                case SemType::Kind::Struct:
                    for (const auto& f : t.strct->fields)
                        walk(path + "." + f.name, tp.resolve_type(f.type), owner);
                    break;
                default:
                    break;
            }
        };
    walk(root, type, std::nullopt);
    return out;
}

std::vector<std::string> headers_in_type(const TypedProgram& tp, const std::string& root,
                                         const SemType& type) {
    std::vector<std::string> out;
    std::function<void(const std::string&, const SemType&)> walk =
        [&](const std::string& path, const SemType& t) {
            if (t.kind == SemType::Kind::Header) {
                out.push_back(path);
            } else if (t.kind == SemType::Kind::Struct) {
                for (const auto& f : t.strct->fields)
                    walk(path + "." + f.name, tp.resolve_type(f.type));
            }
        };
    walk(root, type);
    return out;
}

std::optional<LValue> expr_as_lvalue(const Expr& e) {
    if (const auto* lv = std::get_if<LValueExpr>(&e.node)) return lv->lvalue;
    if (const auto* sl = std::get_if<SliceExpr>(&e.node)) {
        if (const auto* base = std::get_if<LValueExpr>(&sl->base->node)) {
            if (base->lvalue.slice) return std::nullopt;  // slice of slice
            LValue out = base->lvalue;
            out.slice = {sl->hi, sl->lo};
            return out;
        }
    }
    return std::nullopt;
}

namespace {

struct ScopeEntry {
    SemType type;
    bool writable = false;
};

class Typechecker {
  public:
    explicit Typechecker(TypedProgram& tp) : tp_(tp) {}

    Diagnostics run() {
        collect_type_decls();
        check_controls();
        check_package();
        return std::move(diags_);
    }

  private:
    TypedProgram& tp_;
    Diagnostics diags_;
    // innermost scope last; one frame per block
    std::vector<std::unordered_map<std::string, ScopeEntry>> scopes_;
    const ControlDecl* control_ = nullptr;
    bool in_action_body_ = false;

    void error(SourceLoc loc, std::string code, std::string msg) {
        diags_.push_back({loc, Severity::Error, std::move(code), std::move(msg)});
    }
    void type_error(SourceLoc loc, std::string msg) {
        error(loc, "TypeError", std::move(msg));
    }

    // ------------------------------------------------------ declarations --

    void collect_type_decls() {
        std::unordered_set<std::string> names;
        for (const auto& td : tp_.program.type_decls) {
            std::visit(
                [&](const auto& d) {
                    using T = std::decay_t<decltype(d)>;
                    if (!names.insert(d.name).second)
                        type_error(d.loc, "duplicate type name '" + d.name + "'");
                    std::unordered_set<std::string> fieldnames;
                    for (const auto& f : d.fields) {
                        if (!fieldnames.insert(f.name).second)
                            type_error(f.loc, "duplicate field '" + f.name + "' in '" + d.name + "'");
                    }
                    if constexpr (std::is_same_v<T, HeaderDecl>) {
                        tp_.headers[d.name] = &d;
                    } else {
                        tp_.structs[d.name] = &d;
                    }
                },
                td);
        }
        // Resolve struct field types; reject cycles (struct containing itself).
        for (const auto& td : tp_.program.type_decls) {
            if (const auto* s = std::get_if<StructDecl>(&td)) {
                std::unordered_set<std::string> trail{s->name};
                check_struct_fields(*s, trail);
            }
        }
    }

    void check_struct_fields(const StructDecl& s, std::unordered_set<std::string>& trail) {
        for (const auto& f : s.fields) {
            if (f.type.kind != TypeRef::Kind::Named) continue;
            if (tp_.headers.count(f.type.name)) continue;
            auto it = tp_.structs.find(f.type.name);
            if (it == tp_.structs.end()) {
                type_error(f.loc, "unknown type '" + f.type.name + "'");
                continue;
            }
            if (!trail.insert(f.type.name).second) {
                type_error(f.loc, "recursive struct '" + f.type.name + "'");
                continue;
            }
            check_struct_fields(*it->second, trail);
            trail.erase(f.type.name);
        }
    }

    void check_package() {
        std::unordered_set<std::string> seen;
        for (const auto& name : tp_.program.package) {
            if (!tp_.program.find_control(name))
                type_error({}, "package references unknown control '" + name + "'");
            if (!seen.insert(name).second)
                type_error({}, "package references control '" + name + "' twice");
        }
    }

    void check_controls() {
        std::unordered_set<std::string> names;
        for (const auto& c : tp_.program.controls) {
            if (!names.insert(c.name).second)
                type_error(c.loc, "duplicate control '" + c.name + "'");
            check_control(c);
        }
    }

    SemType resolve_or_error(const TypeRef& t, SourceLoc loc) {
        SemType st = tp_.resolve_type(t);
        if (st.is_error())
            type_error(loc, "unknown type '" + t.name + "'");
        return st;
    }

    void check_control(const ControlDecl& c) {
        control_ = &c;
        scopes_.clear();
        scopes_.emplace_back();

        for (const auto& prm : c.params) {
            SemType st = resolve_or_error(prm.type, prm.loc);
            if (st.is_bool()) {
                type_error(prm.loc, "control parameters cannot be bool");
                st = SemType::error();
            }
            if (!declare(prm.name, {st, prm.direction != Direction::In}, prm.loc)) continue;
        }

        // Control-scope locals, actions, tables, in declaration order.
        std::unordered_map<std::string, const ActionDecl*> actions;
        std::unordered_set<std::string> tables;
        for (const auto& local : c.locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
                check_var_decl(v->type, v->name, v->init.get(), v->loc);
            } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
                if (actions.count(a->name) || a->name == kNoActionName)
                    type_error(a->loc, "duplicate action '" + a->name + "'");
                actions[a->name] = a;
                check_action(*a);
            } else {
                const auto& t = std::get<TableDecl>(local);
                if (!tables.insert(t.name).second)
                    type_error(t.loc, "duplicate table '" + t.name + "'");
                check_table(t, actions);
            }
        }

        in_action_body_ = false;
        check_block(c.apply, /*inside_action=*/false, actions, tables);
        scopes_.pop_back();
        control_ = nullptr;
    }

    void check_action(const ActionDecl& a) {
        scopes_.emplace_back();
        for (const auto& prm : a.params) {
            SemType st = resolve_or_error(prm.type, prm.loc);
            if (!st.is_bit()) {
                type_error(prm.loc, "action parameters must have type bit<N>");
                st = SemType::error();
            }
            declare(prm.name, {st, prm.direction != Direction::In}, prm.loc);
        }
        in_action_body_ = true;
        check_block(a.body, /*inside_action=*/true, {}, {});
        in_action_body_ = false;
        scopes_.pop_back();
    }

    void check_table(const TableDecl& t,
                     const std::unordered_map<std::string, const ActionDecl*>& actions) {
        SemType key = check_expr(*t.key);
        if (key.kind == SemType::Kind::UntypedInt)
            type_error(t.loc, "table key must have a sized bit type");
        else if (!key.is_bit() && !key.is_error())
            type_error(t.loc, "table key must be a bit expression");

        std::unordered_set<std::string> listed;
        for (const auto& name : t.actions) {
            if (!listed.insert(name).second)
                type_error(t.loc, "action '" + name + "' listed twice in table '" + t.name + "'");
            if (name == kNoActionName) continue;
            auto it = actions.find(name);
            if (it == actions.end()) {
                type_error(t.loc, "table '" + t.name + "' references unknown action '" + name + "'");
            } else if (!it->second->params.empty()) {
                type_error(t.loc, "table-invoked action '" + name + "' must not have parameters");
            }
        }
        if (t.default_action != kNoActionName && !listed.count(t.default_action))
            type_error(t.loc, "default_action '" + t.default_action +
                                  "' is not among the table's actions");
    }

    // ------------------------------------------------------------ scopes --

    bool declare(const std::string& name, ScopeEntry entry, SourceLoc loc) {
        for (const auto& frame : scopes_) {
            if (frame.count(name)) {
                type_error(loc, "redeclaration of '" + name + "'");
                return false;
            }
        }
        scopes_.back()[name] = std::move(entry);
        return true;
    }

    const ScopeEntry* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    // -------------------------------------------------------- statements --

    void check_var_decl(const TypeRef& type, const std::string& name, const Expr* init,
                        SourceLoc loc) {
        SemType st = resolve_or_error(type, loc);
        if (!st.is_bit() && !st.is_bool() && !st.is_error()) {
            type_error(loc, "variables must have type bit<N> or bool");
            st = SemType::error();
        }
        if (init) {
            SemType rhs = check_expr(*init);
            coerce_to(*init, rhs, st, loc);
        }
        declare(name, {st, true}, loc);
    }

    void check_block(const Block& b, bool inside_action,
                     const std::unordered_map<std::string, const ActionDecl*>& actions,
                     const std::unordered_set<std::string>& tables) {
        scopes_.emplace_back();
        for (const auto& sp : b.stmts) check_stmt(*sp, inside_action, actions, tables);
        scopes_.pop_back();
    }

    void check_stmt(const Stmt& s, bool inside_action,
                    const std::unordered_map<std::string, const ActionDecl*>& actions,
                    const std::unordered_set<std::string>& tables) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    check_assign(n, s.loc);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    SemType ct = check_expr(*n.cond);
                    if (!ct.is_bool() && !ct.is_error())
                        type_error(n.cond->loc, "if condition must be bool");
                    check_block(n.then_block, inside_action, actions, tables);
                    if (n.else_block) check_block(*n.else_block, inside_action, actions, tables);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    check_block(n.body, inside_action, actions, tables);
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    check_var_decl(n.type, n.name, n.init.get(), s.loc);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    if (inside_action) {
                        type_error(s.loc, "calls are not allowed inside action bodies");
                        return;
                    }
                    check_call(n, actions, s.loc);
                } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                    if (inside_action) {
                        type_error(s.loc, "tables cannot be applied inside action bodies");
                        return;
                    }
                    if (!tables.count(n.table))
                        type_error(s.loc, "apply of unknown table '" + n.table + "'");
                } else if constexpr (std::is_same_v<T, ExitStmt>) {
                    // always well-typed
                } else {  // SetValidityStmt
                    ResolvedLValue r;
                    if (!resolve_lvalue(n.header, r)) return;
                    if (r.type.kind != SemType::Kind::Header) {
                        type_error(n.header.loc, "setValid/setInvalid requires a header");
                        return;
                    }
                    if (!r.writable)
                        type_error(n.header.loc, "cannot change validity through an 'in' parameter");
                }
            },
            s.node);
    }

    void check_assign(const AssignStmt& a, SourceLoc loc) {
        ResolvedLValue r;
        if (!resolve_lvalue(a.target, r)) return;
        SemType target_type;
        if (r.type.is_bit()) {
            target_type = SemType::bit(r.access_width());
        } else if (r.type.is_bool()) {
            if (a.target.slice) {
                type_error(loc, "cannot slice a bool");
                return;
            }
            target_type = SemType::boolean();
        } else if (!r.type.is_error()) {
            type_error(loc, "assignment target must be a bit or bool lvalue");
            return;
        } else {
            return;
        }
        if (!r.writable) {
            type_error(loc, "cannot assign to read-only lvalue '" + a.target.to_string() + "'");
            return;
        }
        SemType rhs = check_expr(*a.value);
        coerce_to(*a.value, rhs, target_type, loc);
    }

    void check_call(const CallStmt& call,
                    const std::unordered_map<std::string, const ActionDecl*>& actions,
                    SourceLoc loc) {
        if (call.callee == kNoActionName) {
            if (!call.args.empty()) type_error(loc, "NoAction takes no arguments");
            return;
        }
        auto it = actions.find(call.callee);
        if (it == actions.end()) {
            type_error(loc, "call of unknown action '" + call.callee + "'");
            return;
        }
        const ActionDecl& a = *it->second;
        if (call.args.size() != a.params.size()) {
            type_error(loc, "action '" + a.name + "' expects " + std::to_string(a.params.size()) +
                                " argument(s), got " + std::to_string(call.args.size()));
            return;
        }
        for (size_t i = 0; i < call.args.size(); ++i) {
            const Param& prm = a.params[i];
            const Expr& arg = *call.args[i];
            SemType pt = tp_.resolve_type(prm.type);
            SemType at = check_expr(arg);
            if (prm.direction == Direction::In) {
                coerce_to(arg, at, pt, arg.loc);
                tp_.arg_writable[&arg] = false;
                continue;
            }
            // inout/out arguments must be writable lvalues of exactly the
            // parameter's type.
            auto lv = expr_as_lvalue(arg);
            bool writable = false;
            if (lv) {
                // reuse the resolution recorded while checking the expression
                if (const auto* inner = std::get_if<LValueExpr>(&arg.node)) {
                    const ResolvedLValue* rr = tp_.resolved(inner->lvalue);
                    writable = rr && rr->writable;
                } else if (const auto* sl = std::get_if<SliceExpr>(&arg.node)) {
                    const auto& base = std::get<LValueExpr>(sl->base->node);
                    const ResolvedLValue* rr = tp_.resolved(base.lvalue);
                    writable = rr && rr->writable;
                }
            }
            if (!lv || !writable) {
                type_error(arg.loc, "argument for '" + std::string(to_string(prm.direction)) +
                                        "' parameter '" + prm.name + "' must be a writable lvalue");
                tp_.arg_writable[&arg] = false;
                continue;
            }
            tp_.arg_writable[&arg] = true;
            if (!at.is_error() && !(at.is_bit() && pt.is_bit() && at.width == pt.width))
                type_error(arg.loc, "argument type does not match parameter '" + prm.name + "'");
        }
    }

    // ------------------------------------------------------- expressions --

    SemType record(const Expr& e, SemType t) {
        tp_.expr_types[&e] = t;
        return t;
    }

    bool resolve_lvalue(const LValue& lv, ResolvedLValue& out) {
        const ScopeEntry* entry = lookup(lv.path[0]);
        if (!entry) {
            type_error(lv.loc, "unknown name '" + lv.path[0] + "'");
            return false;
        }
        SemType cur = entry->type;
        if (cur.is_error()) return false;
        std::string path = lv.path[0];
        std::optional<std::string> owner;
        for (size_t i = 1; i < lv.path.size(); ++i) {
            const std::string& member = lv.path[i];
            if (cur.kind == SemType::Kind::Struct) {
                const FieldDecl* f = find_field(cur.strct->fields, member);
                if (!f) {
                    type_error(lv.loc, "no field '" + member + "' in struct '" + cur.strct->name + "'");
                    return false;
                }
                cur = tp_.resolve_type(f->type);
            } else if (cur.kind == SemType::Kind::Header) {
                const FieldDecl* f = find_field(cur.header->fields, member);
                if (!f) {
                    type_error(lv.loc, "no field '" + member + "' in header '" + cur.header->name + "'");
                    return false;
                }
                owner = path;
                cur = SemType::bit(f->type.width);
            } else {
                type_error(lv.loc, "'" + path + "' has no members");
                return false;
            }
            path += "." + member;
            if (cur.is_error()) return false;
        }
        out.leaf_path = path;
        out.type = cur;
        out.writable = entry->writable;
        out.owning_header = owner;
        if (cur.is_bit()) {
            out.hi = cur.width - 1;
            out.lo = 0;
            if (lv.slice) {
                auto [hi, lo] = *lv.slice;
                if (!(0 <= lo && lo <= hi && hi < cur.width)) {
                    type_error(lv.loc, "slice [" + std::to_string(hi) + ":" + std::to_string(lo) +
                                           "] out of range for bit<" + std::to_string(cur.width) + ">");
                    return false;
                }
                out.hi = hi;
                out.lo = lo;
            }
        } else if (lv.slice) {
            type_error(lv.loc, "cannot slice a non-bit lvalue");
            return false;
        }
        tp_.lvalues[&lv] = out;
        return true;
    }

    static const FieldDecl* find_field(const std::vector<FieldDecl>& fields,
                                       const std::string& name) {
        for (const auto& f : fields)
            if (f.name == name) return &f;
        return nullptr;
    }

    // Gives an untyped subtree the width its context demands.
    void stamp_width(const Expr& e, int w) {
        SemType t = tp_.expr_types.count(&e) ? tp_.expr_types[&e] : SemType::error();
        if (t.kind != SemType::Kind::UntypedInt) return;
        record(e, SemType::bit(w));
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, BinaryExpr>) {
                    if (n.op == BinOp::Shl || n.op == BinOp::Shr) {
                        stamp_width(*n.lhs, w);  // shift amount keeps its own type
                    } else {
                        stamp_width(*n.lhs, w);
                        stamp_width(*n.rhs, w);
                    }
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    stamp_width(*n.arg, w);
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    stamp_width(*n.then_arm, w);
                    stamp_width(*n.else_arm, w);
                }
            },
            e.node);
    }

    // Checks that `have` can be used where `want` is required, stamping
    // untyped literals. Reports a TypeError otherwise.
    void coerce_to(const Expr& e, SemType have, SemType want, SourceLoc loc) {
        if (have.is_error() || want.is_error()) return;
        if (want.is_bit()) {
            if (have.kind == SemType::Kind::UntypedInt) {
                stamp_width(e, want.width);
                return;
            }
            if (have.is_bit() && have.width == want.width) return;
            if (have.is_bit())
                type_error(loc, "width mismatch: bit<" + std::to_string(have.width) +
                                    "> vs bit<" + std::to_string(want.width) +
                                    "> (insert an explicit cast)");
            else
                type_error(loc, "expected a bit<" + std::to_string(want.width) + "> expression");
            return;
        }
        if (want.is_bool()) {
            if (!have.is_bool()) type_error(loc, "expected a bool expression");
            return;
        }
        type_error(loc, "invalid context for this expression");
    }

    bool is_const_int(const Expr& e) const {
        return std::holds_alternative<IntLit>(e.node);
    }

    SemType check_expr(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> SemType {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    return record(e, n.width ? SemType::bit(*n.width) : SemType::untyped());
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return record(e, SemType::boolean());
                } else if constexpr (std::is_same_v<T, LValueExpr>) {
                    ResolvedLValue r;
                    if (!resolve_lvalue(n.lvalue, r)) return record(e, SemType::error());
                    if (r.type.is_bit()) return record(e, SemType::bit(r.access_width()));
                    if (r.type.is_bool()) return record(e, SemType::boolean());
                    type_error(e.loc, "cannot read a whole header or struct");
                    return record(e, SemType::error());
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    SemType bt = check_expr(*n.base);
                    if (bt.is_error()) return record(e, SemType::error());
                    if (bt.kind == SemType::Kind::UntypedInt) {
                        type_error(e.loc, "cannot slice an untyped literal");
                        return record(e, SemType::error());
                    }
                    if (!bt.is_bit()) {
                        type_error(e.loc, "slice requires a bit expression");
                        return record(e, SemType::error());
                    }
                    if (!(0 <= n.lo && n.lo <= n.hi && n.hi < bt.width)) {
                        type_error(e.loc, "slice [" + std::to_string(n.hi) + ":" +
                                              std::to_string(n.lo) + "] out of range for bit<" +
                                              std::to_string(bt.width) + ">");
                        return record(e, SemType::error());
                    }
                    return record(e, SemType::bit(n.hi - n.lo + 1));
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    SemType at = check_expr(*n.arg);
                    if (n.target.kind == TypeRef::Kind::Bit) {
                        int w = n.target.width;
                        if (at.kind == SemType::Kind::UntypedInt) stamp_width(*n.arg, w);
                        else if (at.is_bool() && w != 1) {
                            type_error(e.loc, "bool casts only to bit<1>");
                            return record(e, SemType::error());
                        } else if (!at.is_bit() && !at.is_bool() && !at.is_error()) {
                            type_error(e.loc, "invalid cast operand");
                            return record(e, SemType::error());
                        }
                        return record(e, SemType::bit(w));
                    }
                    // (bool) cast
                    if (!at.is_error() && !(at.is_bit() && at.width == 1) && !at.is_bool()) {
                        type_error(e.loc, "only bit<1> casts to bool");
                        return record(e, SemType::error());
                    }
                    return record(e, SemType::boolean());
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    SemType at = check_expr(*n.arg);
                    if (at.is_error()) return record(e, SemType::error());
                    switch (n.op) {
                        case UnOp::BoolNot:
                            if (!at.is_bool()) {
                                type_error(e.loc, "operator ! requires bool");
                                return record(e, SemType::error());
                            }
                            return record(e, SemType::boolean());
                        case UnOp::BitNot:
                            if (at.kind == SemType::Kind::UntypedInt) {
                                type_error(e.loc, "operator ~ requires a sized operand");
                                return record(e, SemType::error());
                            }
                            [[fallthrough]];
                        case UnOp::Neg:
                            if (at.is_bit()) return record(e, SemType::bit(at.width));
                            if (at.kind == SemType::Kind::UntypedInt)
                                return record(e, SemType::untyped());
                            type_error(e.loc, "operator requires a bit operand");
                            return record(e, SemType::error());
                    }
                    return record(e, SemType::error());
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return record(e, check_binary(e, n));
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    SemType ct = check_expr(*n.cond);
                    if (!ct.is_bool() && !ct.is_error())
                        type_error(n.cond->loc, "ternary condition must be bool");
                    SemType a = check_expr(*n.then_arm);
                    SemType b = check_expr(*n.else_arm);
                    if (a.is_error() || b.is_error()) return record(e, SemType::error());
                    if (a.is_bool() && b.is_bool()) return record(e, SemType::boolean());
                    if (a.is_bit() && b.is_bit()) {
                        if (a.width != b.width) {
                            type_error(e.loc, "ternary arms have different widths");
                            return record(e, SemType::error());
                        }
                        return record(e, SemType::bit(a.width));
                    }
                    if (a.is_bit() && b.kind == SemType::Kind::UntypedInt) {
                        stamp_width(*n.else_arm, a.width);
                        return record(e, SemType::bit(a.width));
                    }
                    if (b.is_bit() && a.kind == SemType::Kind::UntypedInt) {
                        stamp_width(*n.then_arm, b.width);
                        return record(e, SemType::bit(b.width));
                    }
                    if (a.kind == SemType::Kind::UntypedInt && b.kind == SemType::Kind::UntypedInt)
                        return record(e, SemType::untyped());
                    type_error(e.loc, "ternary arms have incompatible types");
                    return record(e, SemType::error());
                } else {  // IsValidExpr
                    ResolvedLValue r;
                    if (!resolve_lvalue(n.header, r)) return record(e, SemType::error());
                    if (r.type.kind != SemType::Kind::Header) {
                        type_error(e.loc, "isValid() requires a header");
                        return record(e, SemType::error());
                    }
                    return record(e, SemType::boolean());
                }
            },
            e.node);
    }

    SemType check_binary(const Expr& e, const BinaryExpr& n) {
        SemType lt = check_expr(*n.lhs);
        SemType rt = check_expr(*n.rhs);
        if (lt.is_error() || rt.is_error()) return SemType::error();

        auto untyped = [](const SemType& t) { return t.kind == SemType::Kind::UntypedInt; };

        if (n.op == BinOp::BoolAnd || n.op == BinOp::BoolOr) {
            if (!lt.is_bool() || !rt.is_bool()) {
                type_error(e.loc, std::string("operator ") + to_string(n.op) + " requires bool operands");
                return SemType::error();
            }
            return SemType::boolean();
        }
        if (n.op == BinOp::Shl || n.op == BinOp::Shr) {
            // Shift amounts may be any bit type or a literal; what matters is
            // the shiftee's width. An untyped shiftee with a non-constant
            // amount has no inferable width.
            if (!rt.is_bit() && !untyped(rt)) {
                type_error(n.rhs->loc, "shift amount must be a bit expression or literal");
                return SemType::error();
            }
            if (lt.is_bit()) return SemType::bit(lt.width);
            if (untyped(lt)) {
                if (is_const_int(*n.rhs)) return SemType::untyped();
                error(e.loc, "ShiftWidthError",
                      "cannot infer the width of an untyped literal shifted by a "
                      "run-time value");
                return SemType::error();
            }
            type_error(e.loc, "shift requires a bit operand");
            return SemType::error();
        }
        if (n.op == BinOp::Concat) {
            if (!lt.is_bit() || !rt.is_bit()) {
                type_error(e.loc, "++ requires sized bit operands");
                return SemType::error();
            }
            if (lt.width + rt.width > 64) {
                type_error(e.loc, "concatenation wider than 64 bits");
                return SemType::error();
            }
            return SemType::bit(lt.width + rt.width);
        }
        if (is_comparison(n.op)) {
            bool eqop = n.op == BinOp::Eq || n.op == BinOp::Ne;
            if (eqop && lt.is_bool() && rt.is_bool()) return SemType::boolean();
            if (lt.is_bit() && rt.is_bit()) {
                if (lt.width != rt.width) {
                    type_error(e.loc, "comparison of different widths (insert an explicit cast)");
                    return SemType::error();
                }
                return SemType::boolean();
            }
            if (lt.is_bit() && untyped(rt)) { stamp_width(*n.rhs, lt.width); return SemType::boolean(); }
            if (rt.is_bit() && untyped(lt)) { stamp_width(*n.lhs, rt.width); return SemType::boolean(); }
            if (untyped(lt) && untyped(rt)) return SemType::boolean();
            type_error(e.loc, std::string("invalid operands to ") + to_string(n.op));
            return SemType::error();
        }
        // arithmetic / bitwise
        if (lt.is_bit() && rt.is_bit()) {
            if (lt.width != rt.width) {
                type_error(e.loc, "width mismatch in '" + std::string(to_string(n.op)) +
                                      "' (insert an explicit cast)");
                return SemType::error();
            }
            return SemType::bit(lt.width);
        }
        if (lt.is_bit() && untyped(rt)) { stamp_width(*n.rhs, lt.width); return SemType::bit(lt.width); }
        if (rt.is_bit() && untyped(lt)) { stamp_width(*n.lhs, rt.width); return SemType::bit(rt.width); }
        if (untyped(lt) && untyped(rt)) return SemType::untyped();
        type_error(e.loc, std::string("invalid operands to ") + to_string(n.op));
        return SemType::error();
    }
};

}  // namespace

TypecheckResult typecheck(Program p) {
    TypecheckResult result;
    TypedProgram tp;
    tp.program = std::move(p);
    Typechecker checker(tp);
    result.diags = checker.run();
    if (!has_error(result.diags)) result.typed = std::move(tp);
    return result;
}

}  // namespace minip4
