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

#include "rewrite_util.h"

#include <functional>

namespace minip4::passes {

using namespace ast;

ControlIndex::ControlIndex(const TypedProgram& tp, const ControlDecl& control)
    : tp_(tp), control_(control) {
    for (const auto& prm : control.params)
        names_[prm.name] = {prm.type, prm.direction != Direction::In};
    std::function<void(const Block&)> scan_block = [&](const Block& b) {
        for (const auto& sp : b.stmts) {
            if (const auto* v = std::get_if<VarDeclStmt>(&sp->node)) {
                names_[v->name] = {v->type, true};
            } else if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                scan_block(f->then_block);
                if (f->else_block) scan_block(*f->else_block);
            } else if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                scan_block(blk->body);
            }
        }
    };
    for (const auto& local : control.locals) {
        if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
            names_[v->name] = {v->type, true};
        } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
            scan_block(a->body);
        }
    }
    scan_block(control.apply);
}

std::optional<ResolvedLValue> ControlIndex::resolve(const LValue& lv,
                                                    const ActionDecl* action) const {
    ast::TypeRef root_type;
    bool writable = false;
    bool found = false;
    if (action) {
        for (const auto& prm : action->params) {
            if (prm.name == lv.path[0]) {
                root_type = prm.type;
                writable = prm.direction != Direction::In;
                found = true;
                break;
            }
        }
    }
    if (!found) {
        auto it = names_.find(lv.path[0]);
        if (it == names_.end()) return std::nullopt;
        root_type = it->second.type;
        writable = it->second.writable;
    }

    SemType cur = tp_.resolve_type(root_type);
    std::string path = lv.path[0];
    std::optional<std::string> owner;
    for (size_t i = 1; i < lv.path.size(); ++i) {
        const std::string& member = lv.path[i];
        const FieldDecl* f = nullptr;
        if (cur.kind == SemType::Kind::Struct) {
            for (const auto& fd : cur.strct->fields)
                if (fd.name == member) f = &fd;
            if (!f) return std::nullopt;
            cur = tp_.resolve_type(f->type);
        } else if (cur.kind == SemType::Kind::Header) {
            for (const auto& fd : cur.header->fields)
                if (fd.name == member) f = &fd;
            if (!f) return std::nullopt;
            owner = path;
            cur = SemType::bit(f->type.width);
        } else {
            return std::nullopt;
        }
        path += "." + member;
    }
    ResolvedLValue out;
    out.leaf_path = path;
    out.type = cur;
    out.writable = writable;
    out.owning_header = owner;
    if (cur.is_bit()) {
        out.hi = cur.width - 1;
        out.lo = 0;
        if (lv.slice) {
            if (!(0 <= lv.slice->second && lv.slice->second <= lv.slice->first &&
                  lv.slice->first < cur.width))
                return std::nullopt;
            out.hi = lv.slice->first;
            out.lo = lv.slice->second;
        }
    } else if (lv.slice) {
        return std::nullopt;
    }
    return out;
}

std::optional<ExprShape> shape_of(const ControlIndex& idx, const Expr& e,
                                  const ActionDecl* action) {
    using K = ExprShape::Kind;
    return std::visit(
        [&](const auto& n) -> std::optional<ExprShape> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                if (n.width) return ExprShape{K::Bit, *n.width};
                return ExprShape{K::Untyped, 0};
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                return ExprShape{K::Bool, 0};
            } else if constexpr (std::is_same_v<T, LValueExpr>) {
                auto r = idx.resolve(n.lvalue, action);
                if (!r) return std::nullopt;
                if (r->type.is_bit()) return ExprShape{K::Bit, r->access_width()};
                if (r->type.is_bool()) return ExprShape{K::Bool, 0};
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                return ExprShape{K::Bit, n.hi - n.lo + 1};
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                if (n.target.kind == TypeRef::Kind::Bit) return ExprShape{K::Bit, n.target.width};
                return ExprShape{K::Bool, 0};
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                if (n.op == UnOp::BoolNot) return ExprShape{K::Bool, 0};
                return shape_of(idx, *n.arg, action);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                if (is_comparison(n.op) || is_bool_op(n.op)) return ExprShape{K::Bool, 0};
                if (n.op == BinOp::Concat) {
                    auto l = shape_of(idx, *n.lhs, action);
                    auto r = shape_of(idx, *n.rhs, action);
                    if (!l || !r || l->kind != K::Bit || r->kind != K::Bit) return std::nullopt;
                    return ExprShape{K::Bit, l->width + r->width};
                }
                if (n.op == BinOp::Shl || n.op == BinOp::Shr) return shape_of(idx, *n.lhs, action);
                auto l = shape_of(idx, *n.lhs, action);
                if (l && l->kind == K::Bit) return l;
                auto r = shape_of(idx, *n.rhs, action);
                if (r && r->kind == K::Bit) return r;
                return l ? l : r;
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                auto a = shape_of(idx, *n.then_arm, action);
                if (a && a->kind != K::Untyped) return a;
                return shape_of(idx, *n.else_arm, action);
            } else {  // IsValidExpr
                return ExprShape{K::Bool, 0};
            }
        },
        e.node);
}

void collect_reads(const ControlIndex& idx, const Expr& e, const ActionDecl* action,
                   std::vector<BitRange>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LValueExpr>) {
                auto r = idx.resolve(n.lvalue, action);
                if (r && r->type.is_bit()) out.push_back({r->leaf_path, r->hi, r->lo});
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                collect_reads(idx, *n.base, action, out);
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                collect_reads(idx, *n.arg, action, out);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                collect_reads(idx, *n.arg, action, out);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                collect_reads(idx, *n.lhs, action, out);
                collect_reads(idx, *n.rhs, action, out);
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                collect_reads(idx, *n.cond, action, out);
                collect_reads(idx, *n.then_arm, action, out);
                collect_reads(idx, *n.else_arm, action, out);
            }
            // literals and isValid read no field bits
        },
        e.node);
}

FreshNames::FreshNames(const ControlDecl& control) {
    for (const auto& prm : control.params) used_.insert(prm.name);
    std::function<void(const Block&)> scan_block = [&](const Block& b) {
        for (const auto& sp : b.stmts) {
            if (const auto* v = std::get_if<VarDeclStmt>(&sp->node)) {
                used_.insert(v->name);
            } else if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                scan_block(f->then_block);
                if (f->else_block) scan_block(*f->else_block);
            } else if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) {
                scan_block(blk->body);
            }
        }
    };
    for (const auto& local : control.locals) {
        if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
            used_.insert(v->name);
        } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
            used_.insert(a->name);
            for (const auto& prm : a->params) used_.insert(prm.name);
            scan_block(a->body);
        } else {
            used_.insert(std::get<TableDecl>(local).name);
        }
    }
    scan_block(control.apply);
}

std::string FreshNames::fresh(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int i = 1;; ++i) {
        std::string name = base + "_" + std::to_string(i);
        if (used_.insert(name).second) return name;
    }
}

void rename_in_expr(Expr& e, const std::map<std::string, std::string>& renames) {
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LValueExpr>) {
                auto it = renames.find(n.lvalue.path[0]);
                if (it != renames.end()) n.lvalue.path[0] = it->second;
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                rename_in_expr(*n.base, renames);
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                rename_in_expr(*n.arg, renames);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                rename_in_expr(*n.arg, renames);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                rename_in_expr(*n.lhs, renames);
                rename_in_expr(*n.rhs, renames);
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                rename_in_expr(*n.cond, renames);
                rename_in_expr(*n.then_arm, renames);
                rename_in_expr(*n.else_arm, renames);
            } else if constexpr (std::is_same_v<T, IsValidExpr>) {
                auto it = renames.find(n.header.path[0]);
                if (it != renames.end()) n.header.path[0] = it->second;
            }
        },
        e.node);
}

void rename_decls(Block& b, const std::map<std::string, std::string>& renames) {
    for (auto& sp : b.stmts) {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    auto it = renames.find(n.target.path[0]);
                    if (it != renames.end()) n.target.path[0] = it->second;
                    rename_in_expr(*n.value, renames);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    rename_in_expr(*n.cond, renames);
                    rename_decls(n.then_block, renames);
                    if (n.else_block) rename_decls(*n.else_block, renames);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    rename_decls(n.body, renames);
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    auto it = renames.find(n.name);
                    if (it != renames.end()) n.name = it->second;
                    if (n.init) rename_in_expr(*n.init, renames);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    for (auto& a : n.args) rename_in_expr(*a, renames);
                } else if constexpr (std::is_same_v<T, SetValidityStmt>) {
                    auto it = renames.find(n.header.path[0]);
                    if (it != renames.end()) n.header.path[0] = it->second;
                }
            },
            sp->node);
    }
}

bool is_const_int(const Expr& e) { return std::holds_alternative<IntLit>(e.node); }
bool is_const_bool(const Expr& e) { return std::holds_alternative<BoolLit>(e.node); }

}  // namespace minip4::passes
