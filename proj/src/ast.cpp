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

#include "minip4/ast.h"

#include <algorithm>

namespace minip4::ast {

bool operator==(const TypeRef& a, const TypeRef& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TypeRef::Kind::Bit: return a.width == b.width;
        case TypeRef::Kind::Bool: return true;
        case TypeRef::Kind::Named: return a.name == b.name;
    }
    return false;
}

std::string LValue::base_string() const {
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += path[i];
    }
    return out;
}

std::string LValue::to_string() const {
    std::string out = base_string();
    if (slice) out += "[" + std::to_string(slice->first) + ":" + std::to_string(slice->second) + "]";
    return out;
}

bool is_comparison(BinOp op) {
    switch (op) {
        case BinOp::Eq:
        case BinOp::Ne:
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return true;
        default: return false;
    }
}

bool is_bool_op(BinOp op) { return op == BinOp::BoolAnd || op == BinOp::BoolOr; }

const char* to_string(UnOp op) {
    switch (op) {
        case UnOp::BitNot: return "~";
        case UnOp::BoolNot: return "!";
        case UnOp::Neg: return "-";
    }
    return "?";
}

const char* to_string(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::BitAnd: return "&";
        case BinOp::BitOr: return "|";
        case BinOp::BitXor: return "^";
        case BinOp::Shl: return "<<";
        case BinOp::Shr: return ">>";
        case BinOp::Concat: return "++";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::BoolAnd: return "&&";
        case BinOp::BoolOr: return "||";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::In: return "in";
        case Direction::InOut: return "inout";
        case Direction::Out: return "out";
    }
    return "?";
}

ExprPtr make_expr(SourceLoc loc, decltype(Expr::node) node) {
    auto e = std::make_unique<Expr>();
    e->loc = loc;
    e->node = std::move(node);
    return e;
}

ExprPtr int_lit(uint64_t value, std::optional<int> width) {
    return make_expr({}, IntLit{value, width});
}

ExprPtr bool_lit(bool value) { return make_expr({}, BoolLit{value}); }

ExprPtr lvalue_expr(LValue lv) { return make_expr(lv.loc, LValueExpr{std::move(lv)}); }

StmtPtr make_stmt(SourceLoc loc, decltype(Stmt::node) node) {
    auto s = std::make_unique<Stmt>();
    s->loc = loc;
    s->node = std::move(node);
    return s;
}

const ControlDecl* Program::find_control(const std::string& name) const {
    for (const auto& c : controls)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> Program::pipeline() const {
    if (!package.empty()) return package;
    std::vector<std::string> out;
    out.reserve(controls.size());
    for (const auto& c : controls) out.push_back(c.name);
    return out;
}

// ----------------------------------------------------------------- clone ---

ExprPtr clone(const Expr& e) {
    auto cp = [](const ExprPtr& p) { return p ? clone(*p) : nullptr; };
    decltype(Expr::node) node = std::visit(
        [&](const auto& n) -> decltype(Expr::node) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>) return IntLit{n};
            else if constexpr (std::is_same_v<T, BoolLit>) return BoolLit{n};
            else if constexpr (std::is_same_v<T, LValueExpr>) return LValueExpr{n.lvalue};
            else if constexpr (std::is_same_v<T, SliceExpr>)
                return SliceExpr{cp(n.base), n.hi, n.lo};
            else if constexpr (std::is_same_v<T, CastExpr>) return CastExpr{n.target, cp(n.arg)};
            else if constexpr (std::is_same_v<T, UnaryExpr>) return UnaryExpr{n.op, cp(n.arg)};
            else if constexpr (std::is_same_v<T, BinaryExpr>)
                return BinaryExpr{n.op, cp(n.lhs), cp(n.rhs)};
            else if constexpr (std::is_same_v<T, TernaryExpr>)
                return TernaryExpr{cp(n.cond), cp(n.then_arm), cp(n.else_arm)};
            else
                return IsValidExpr{n.header};
        },
        e.node);
    return make_expr(e.loc, std::move(node));
}

Block clone(const Block& b) {
    Block out;
    out.stmts.reserve(b.stmts.size());
    for (const auto& s : b.stmts) out.stmts.push_back(clone(*s));
    return out;
}

StmtPtr clone(const Stmt& s) {
    auto cp = [](const ExprPtr& p) { return p ? clone(*p) : nullptr; };
    decltype(Stmt::node) node = std::visit(
        [&](const auto& n) -> decltype(Stmt::node) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AssignStmt>)
                return AssignStmt{n.target, cp(n.value)};
            else if constexpr (std::is_same_v<T, IfStmt>) {
                IfStmt out{cp(n.cond), clone(n.then_block), std::nullopt};
                if (n.else_block) out.else_block = clone(*n.else_block);
                return out;
            } else if constexpr (std::is_same_v<T, BlockStmt>)
                return BlockStmt{clone(n.body)};
            else if constexpr (std::is_same_v<T, VarDeclStmt>)
                return VarDeclStmt{n.type, n.name, cp(n.init)};
            else if constexpr (std::is_same_v<T, CallStmt>) {
                CallStmt out{n.callee, {}};
                out.args.reserve(n.args.size());
                for (const auto& a : n.args) out.args.push_back(clone(*a));
                return out;
            } else if constexpr (std::is_same_v<T, ApplyStmt>)
                return ApplyStmt{n.table};
            else if constexpr (std::is_same_v<T, ExitStmt>)
                return ExitStmt{};
            else
                return SetValidityStmt{n.header, n.make_valid};
        },
        s.node);
    return make_stmt(s.loc, std::move(node));
}

Program clone(const Program& p) {
    Program out;
    out.type_decls = p.type_decls;  // value types, no owning pointers
    out.package = p.package;
    out.controls.reserve(p.controls.size());
    for (const auto& c : p.controls) {
        ControlDecl cc;
        cc.name = c.name;
        cc.params = c.params;
        cc.loc = c.loc;
        cc.apply = clone(c.apply);
        for (const auto& local : c.locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
                cc.locals.push_back(
                    LocalVarDecl{v->type, v->name, v->init ? clone(*v->init) : nullptr, v->loc});
            } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
                cc.locals.push_back(ActionDecl{a->name, a->params, clone(a->body), a->loc});
            } else {
                const auto& t = std::get<TableDecl>(local);
                cc.locals.push_back(
                    TableDecl{t.name, clone(*t.key), t.actions, t.default_action, t.loc});
            }
        }
        out.controls.push_back(std::move(cc));
    }
    return out;
}

// --------------------------------------------------------------- deep_eq ---

static bool eq_lvalue(const LValue& a, const LValue& b) {
    return a.path == b.path && a.slice == b.slice;
}

bool deep_eq(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, IntLit>)
                return x.value == y.value && x.width == y.width;
            else if constexpr (std::is_same_v<T, BoolLit>)
                return x.value == y.value;
            else if constexpr (std::is_same_v<T, LValueExpr>)
                return eq_lvalue(x.lvalue, y.lvalue);
            else if constexpr (std::is_same_v<T, SliceExpr>)
                return x.hi == y.hi && x.lo == y.lo && deep_eq(*x.base, *y.base);
            else if constexpr (std::is_same_v<T, CastExpr>)
                return x.target == y.target && deep_eq(*x.arg, *y.arg);
            else if constexpr (std::is_same_v<T, UnaryExpr>)
                return x.op == y.op && deep_eq(*x.arg, *y.arg);
            else if constexpr (std::is_same_v<T, BinaryExpr>)
                return x.op == y.op && deep_eq(*x.lhs, *y.lhs) && deep_eq(*x.rhs, *y.rhs);
            else if constexpr (std::is_same_v<T, TernaryExpr>)
                return deep_eq(*x.cond, *y.cond) && deep_eq(*x.then_arm, *y.then_arm) &&
                       deep_eq(*x.else_arm, *y.else_arm);
            else
                return eq_lvalue(x.header, y.header);
        },
        a.node);
}

bool deep_eq(const Block& a, const Block& b) {
    if (a.stmts.size() != b.stmts.size()) return false;
    for (size_t i = 0; i < a.stmts.size(); ++i)
        if (!deep_eq(*a.stmts[i], *b.stmts[i])) return false;
    return true;
}

bool deep_eq(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, AssignStmt>)
                return eq_lvalue(x.target, y.target) && deep_eq(*x.value, *y.value);
            else if constexpr (std::is_same_v<T, IfStmt>) {
                if (!deep_eq(*x.cond, *y.cond)) return false;
                if (!deep_eq(x.then_block, y.then_block)) return false;
                if (x.else_block.has_value() != y.else_block.has_value()) return false;
                return !x.else_block || deep_eq(*x.else_block, *y.else_block);
            } else if constexpr (std::is_same_v<T, BlockStmt>)
                return deep_eq(x.body, y.body);
            else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                if (!(x.type == y.type) || x.name != y.name) return false;
                if ((x.init == nullptr) != (y.init == nullptr)) return false;
                return !x.init || deep_eq(*x.init, *y.init);
            } else if constexpr (std::is_same_v<T, CallStmt>) {
                if (x.callee != y.callee || x.args.size() != y.args.size()) return false;
                for (size_t i = 0; i < x.args.size(); ++i)
                    if (!deep_eq(*x.args[i], *y.args[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<T, ApplyStmt>)
                return x.table == y.table;
            else if constexpr (std::is_same_v<T, ExitStmt>)
                return true;
            else
                return eq_lvalue(x.header, y.header) && x.make_valid == y.make_valid;
        },
        a.node);
}

static bool eq_fields(const std::vector<FieldDecl>& a, const std::vector<FieldDecl>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || !(a[i].type == b[i].type)) return false;
    return true;
}

static bool eq_params(const std::vector<Param>& a, const std::vector<Param>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || a[i].direction != b[i].direction ||
            !(a[i].type == b[i].type))
            return false;
    return true;
}

bool deep_eq(const Program& a, const Program& b) {
    if (a.type_decls.size() != b.type_decls.size()) return false;
    for (size_t i = 0; i < a.type_decls.size(); ++i) {
        if (a.type_decls[i].index() != b.type_decls[i].index()) return false;
        bool ok = std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                const auto& y = std::get<T>(b.type_decls[i]);
                return x.name == y.name && eq_fields(x.fields, y.fields);
            },
            a.type_decls[i]);
        if (!ok) return false;
    }
    if (a.package != b.package) return false;
    if (a.controls.size() != b.controls.size()) return false;
    for (size_t i = 0; i < a.controls.size(); ++i) {
        const auto& x = a.controls[i];
        const auto& y = b.controls[i];
        if (x.name != y.name || !eq_params(x.params, y.params)) return false;
        if (x.locals.size() != y.locals.size()) return false;
        for (size_t j = 0; j < x.locals.size(); ++j) {
            if (x.locals[j].index() != y.locals[j].index()) return false;
            bool ok = std::visit(
                [&](const auto& l) -> bool {
                    using T = std::decay_t<decltype(l)>;
                    const auto& r = std::get<T>(y.locals[j]);
                    if constexpr (std::is_same_v<T, LocalVarDecl>) {
                        if (!(l.type == r.type) || l.name != r.name) return false;
                        if ((l.init == nullptr) != (r.init == nullptr)) return false;
                        return !l.init || deep_eq(*l.init, *r.init);
                    } else if constexpr (std::is_same_v<T, ActionDecl>) {
                        return l.name == r.name && eq_params(l.params, r.params) &&
                               deep_eq(l.body, r.body);
                    } else {
                        return l.name == r.name && deep_eq(*l.key, *r.key) &&
                               l.actions == r.actions && l.default_action == r.default_action;
                    }
                },
                x.locals[j]);
            if (!ok) return false;
        }
        if (!deep_eq(x.apply, y.apply)) return false;
    }
    return true;
}

}  // namespace minip4::ast
