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

#ifndef MINIP4_AST_H_
#define MINIP4_AST_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minip4/diag.h"

// MiniP4 abstract syntax. Trees are plain value types: deep_eq/clone work
// structurally and ignore source locations.

namespace minip4::ast {

// ---------------------------------------------------------------- types ----

struct TypeRef {
    enum class Kind { Bit, Bool, Named };
    Kind kind = Kind::Bit;
    int width = 0;     // Bit only, 1..64
    std::string name;  // Named only

    static TypeRef bit(int w) { return {Kind::Bit, w, {}}; }
    static TypeRef boolean() { return {Kind::Bool, 0, {}}; }
    static TypeRef named(std::string n) { return {Kind::Named, 0, std::move(n)}; }
};

bool operator==(const TypeRef& a, const TypeRef& b);

// --------------------------------------------------------------- lvalues ---

// Dotted path with an optional closed bit range [hi:lo], e.g. h.eth_type[15:8].
struct LValue {
    std::vector<std::string> path;
    std::optional<std::pair<int, int>> slice;  // {hi, lo}
    SourceLoc loc;

    std::string base_string() const;  // path joined with '.'
    std::string to_string() const;    // includes the slice, if any
};

// ----------------------------------------------------------- expressions ---

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class UnOp { BitNot, BoolNot, Neg };
enum class BinOp {
    Add, Sub, Mul,
    BitAnd, BitOr, BitXor,
    Shl, Shr,
    Concat,
    Eq, Ne, Lt, Le, Gt, Ge,
    BoolAnd, BoolOr,
};

bool is_comparison(BinOp op);
bool is_bool_op(BinOp op);
const char* to_string(UnOp op);
const char* to_string(BinOp op);

struct IntLit {
    uint64_t value = 0;
    std::optional<int> width;  // nullopt: untyped literal
};
struct BoolLit {
    bool value = false;
};
struct LValueExpr {
    LValue lvalue;
};
struct SliceExpr {
    ExprPtr base;
    int hi = 0;
    int lo = 0;
};
struct CastExpr {
    TypeRef target;  // bit<N> or bool
    ExprPtr arg;
};
struct UnaryExpr {
    UnOp op;
    ExprPtr arg;
};
struct BinaryExpr {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct TernaryExpr {
    ExprPtr cond;
    ExprPtr then_arm;
    ExprPtr else_arm;
};
struct IsValidExpr {
    LValue header;
};

struct Expr {
    SourceLoc loc;
    std::variant<IntLit, BoolLit, LValueExpr, SliceExpr, CastExpr, UnaryExpr, BinaryExpr,
                 TernaryExpr, IsValidExpr>
        node;

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(node);
    }
    template <typename T>
    T& as() {
        return std::get<T>(node);
    }
};

ExprPtr make_expr(SourceLoc loc, decltype(Expr::node) node);
ExprPtr int_lit(uint64_t value, std::optional<int> width = std::nullopt);
ExprPtr bool_lit(bool value);
ExprPtr lvalue_expr(LValue lv);

// ------------------------------------------------------------ statements ---

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> stmts;
};

struct AssignStmt {
    LValue target;
    ExprPtr value;
};
struct IfStmt {
    ExprPtr cond;
    Block then_block;
    std::optional<Block> else_block;
};
struct BlockStmt {
    Block body;
};
struct VarDeclStmt {
    TypeRef type;  // bit<N> or bool
    std::string name;
    ExprPtr init;  // may be null
};
struct CallStmt {
    std::string callee;
    std::vector<ExprPtr> args;
};
struct ApplyStmt {
    std::string table;
};
struct ExitStmt {};
struct SetValidityStmt {
    LValue header;
    bool make_valid = false;
};

struct Stmt {
    SourceLoc loc;
    std::variant<AssignStmt, IfStmt, BlockStmt, VarDeclStmt, CallStmt, ApplyStmt, ExitStmt,
                 SetValidityStmt>
        node;

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(node);
    }
    template <typename T>
    T& as() {
        return std::get<T>(node);
    }
};

StmtPtr make_stmt(SourceLoc loc, decltype(Stmt::node) node);

// ---------------------------------------------------------- declarations ---

enum class Direction { In, InOut, Out };
const char* to_string(Direction d);

struct Param {
    std::string name;
    Direction direction = Direction::In;
    TypeRef type;
    SourceLoc loc;
};

struct ActionDecl {
    std::string name;
    std::vector<Param> params;  // bit-typed only
    Block body;
    SourceLoc loc;
};

struct TableDecl {
    std::string name;
    ExprPtr key;                       // exact match kind only
    std::vector<std::string> actions;  // 1-based action ids by position
    std::string default_action;       // listed action or "NoAction"
    SourceLoc loc;
};

struct LocalVarDecl {
    TypeRef type;
    std::string name;
    ExprPtr init;  // may be null
    SourceLoc loc;
};

using ControlLocal = std::variant<LocalVarDecl, ActionDecl, TableDecl>;

struct ControlDecl {
    std::string name;
    std::vector<Param> params;
    std::vector<ControlLocal> locals;
    Block apply;
    SourceLoc loc;
};

struct FieldDecl {
    std::string name;
    TypeRef type;  // headers: bit<N> only; structs: bit<N> or named
    SourceLoc loc;
};

struct HeaderDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    SourceLoc loc;
};

struct StructDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    SourceLoc loc;
};

using TypeDecl = std::variant<HeaderDecl, StructDecl>;

struct Program {
    std::vector<TypeDecl> type_decls;
    std::vector<ControlDecl> controls;
    std::vector<std::string> package;  // empty: all controls in order

    const ControlDecl* find_control(const std::string& name) const;
    // Pipeline blocks: the package if declared, else all controls in order.
    std::vector<std::string> pipeline() const;
};

// ------------------------------------------------------------- utilities ---

ExprPtr clone(const Expr& e);
StmtPtr clone(const Stmt& s);
Block clone(const Block& b);
Program clone(const Program& p);

bool deep_eq(const Expr& a, const Expr& b);
bool deep_eq(const Stmt& a, const Stmt& b);
bool deep_eq(const Block& a, const Block& b);
bool deep_eq(const Program& a, const Program& b);

// Name of the implicitly declared no-op action available to every table.
inline const char* kNoActionName = "NoAction";

}  // namespace minip4::ast

#endif  // MINIP4_AST_H_
