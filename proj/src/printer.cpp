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

#include "minip4/printer.h"

#include <sstream>

namespace minip4 {
namespace {

using namespace ast;

// Binding strength; larger binds tighter. Matches the parser's ladder.
int binop_prec(BinOp op) {
    switch (op) {
        case BinOp::BoolOr: return 1;
        case BinOp::BoolAnd: return 2;
        case BinOp::BitOr: return 3;
        case BinOp::BitXor: return 4;
        case BinOp::BitAnd: return 5;
        case BinOp::Eq:
        case BinOp::Ne: return 6;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 7;
        case BinOp::Shl:
        case BinOp::Shr: return 8;
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Concat: return 9;
        case BinOp::Mul: return 10;
    }
    return 0;
}
constexpr int kTernaryPrec = 0;
constexpr int kUnaryPrec = 11;
constexpr int kPostfixPrec = 12;
constexpr int kPrimaryPrec = 13;

int expr_prec(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TernaryExpr>) return kTernaryPrec;
            else if constexpr (std::is_same_v<T, BinaryExpr>) return binop_prec(n.op);
            else if constexpr (std::is_same_v<T, UnaryExpr>) return kUnaryPrec;
            else if constexpr (std::is_same_v<T, CastExpr>) return kUnaryPrec;
            else if constexpr (std::is_same_v<T, SliceExpr>) return kPostfixPrec;
            else return kPrimaryPrec;
        },
        e.node);
}

std::string type_str(const TypeRef& t) {
    switch (t.kind) {
        case TypeRef::Kind::Bit: return "bit<" + std::to_string(t.width) + ">";
        case TypeRef::Kind::Bool: return "bool";
        case TypeRef::Kind::Named: return t.name;
    }
    return "?";
}

void print_expr_into(const Expr& e, int min_prec, std::string& out);

void print_child(const Expr& e, int min_prec, std::string& out) {
    bool parens = expr_prec(e) < min_prec;
    if (parens) out += '(';
    print_expr_into(e, 0, out);
    if (parens) out += ')';
}

void print_expr_into(const Expr& e, int /*min_prec*/, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                if (n.width) out += std::to_string(*n.width) + "w";
                out += std::to_string(n.value);
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                out += n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, LValueExpr>) {
                out += n.lvalue.to_string();
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                print_child(*n.base, kPostfixPrec, out);
                out += "[" + std::to_string(n.hi) + ":" + std::to_string(n.lo) + "]";
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                out += "(" + type_str(n.target) + ") ";
                print_child(*n.arg, kUnaryPrec, out);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                out += to_string(n.op);
                print_child(*n.arg, kUnaryPrec, out);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                int p = binop_prec(n.op);
                print_child(*n.lhs, p, out);
                out += std::string(" ") + to_string(n.op) + " ";
                print_child(*n.rhs, p + 1, out);
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                print_child(*n.cond, kTernaryPrec + 1, out);
                out += " ? ";
                print_expr_into(*n.then_arm, 0, out);
                out += " : ";
                print_child(*n.else_arm, kTernaryPrec, out);
            } else {  // IsValidExpr
                out += n.header.to_string() + ".isValid()";
            }
        },
        e.node);
}

void indent_to(std::string& out, int indent) { out.append(indent * 4, ' '); }

void print_block_into(const Block& b, int indent, std::string& out);

void print_stmt_into(const Stmt& s, int indent, std::string& out) {
    indent_to(out, indent);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AssignStmt>) {
                out += n.target.to_string() + " = ";
                print_expr_into(*n.value, 0, out);
                out += ";\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                out += "if (";
                print_expr_into(*n.cond, 0, out);
                out += ") ";
                print_block_into(n.then_block, indent, out);
                if (n.else_block) {
                    out += " else ";
                    print_block_into(*n.else_block, indent, out);
                }
                out += "\n";
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                print_block_into(n.body, indent, out);
                out += "\n";
            } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                out += type_str(n.type) + " " + n.name;
                if (n.init) {
                    out += " = ";
                    print_expr_into(*n.init, 0, out);
                }
                out += ";\n";
            } else if constexpr (std::is_same_v<T, CallStmt>) {
                out += n.callee + "(";
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print_expr_into(*n.args[i], 0, out);
                }
                out += ");\n";
            } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                out += n.table + ".apply();\n";
            } else if constexpr (std::is_same_v<T, ExitStmt>) {
                out += "exit;\n";
            } else {  // SetValidityStmt
                out += n.header.to_string() +
                       (n.make_valid ? ".setValid();\n" : ".setInvalid();\n");
            }
        },
        s.node);
}

void print_block_into(const Block& b, int indent, std::string& out) {
    if (b.stmts.empty()) {
        out += "{ }";
        return;
    }
    out += "{\n";
    for (const auto& s : b.stmts) print_stmt_into(*s, indent + 1, out);
    indent_to(out, indent);
    out += "}";
}

void print_params(const std::vector<Param>& params, std::string& out) {
    out += "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += std::string(to_string(params[i].direction)) + " " + type_str(params[i].type) +
               " " + params[i].name;
    }
    out += ")";
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::string out;
    print_expr_into(e, 0, out);
    return out;
}

std::string print_stmt(const Stmt& s, int indent) {
    std::string out;
    print_stmt_into(s, indent, out);
    return out;
}

std::string print_program(const Program& p) {
    std::string out;
    for (const auto& td : p.type_decls) {
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                out += std::is_same_v<T, HeaderDecl> ? "header " : "struct ";
                out += d.name + " {\n";
                for (const auto& f : d.fields) {
                    indent_to(out, 1);
                    out += type_str(f.type) + " " + f.name + ";\n";
                }
                out += "}\n\n";
            },
            td);
    }
    for (const auto& c : p.controls) {
        out += "control " + c.name;
        print_params(c.params, out);
        out += " {\n";
        for (const auto& local : c.locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
                indent_to(out, 1);
                out += type_str(v->type) + " " + v->name;
                if (v->init) {
                    out += " = ";
                    print_expr_into(*v->init, 0, out);
                }
                out += ";\n";
            } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
                indent_to(out, 1);
                out += "action " + a->name;
                print_params(a->params, out);
                out += " ";
                print_block_into(a->body, 1, out);
                out += "\n";
            } else {
                const auto& t = std::get<TableDecl>(local);
                indent_to(out, 1);
                out += "table " + t.name + " {\n";
                indent_to(out, 2);
                out += "key = ";
                print_expr_into(*t.key, 0, out);
                out += " : exact;\n";
                indent_to(out, 2);
                out += "actions = {\n";
                for (const auto& name : t.actions) {
                    indent_to(out, 3);
                    out += name + "();\n";
                }
                indent_to(out, 2);
                out += "}\n";
                indent_to(out, 2);
                out += "default_action = " + t.default_action + "();\n";
                indent_to(out, 1);
                out += "}\n";
            }
        }
        indent_to(out, 1);
        out += "apply ";
        print_block_into(c.apply, 1, out);
        out += "\n}\n\n";
    }
    if (!p.package.empty()) {
        out += "package main(";
        for (size_t i = 0; i < p.package.size(); ++i) {
            if (i) out += ", ";
            out += p.package[i];
        }
        out += ");\n";
    }
    return out;
}

uint64_t content_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace minip4
