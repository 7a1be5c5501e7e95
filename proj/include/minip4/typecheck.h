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

#ifndef MINIP4_TYPECHECK_H_
#define MINIP4_TYPECHECK_H_

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "minip4/ast.h"
#include "minip4/diag.h"

namespace minip4 {

struct SemType {
    enum class Kind { Bit, Bool, UntypedInt, Header, Struct, Error };
    Kind kind = Kind::Error;
    int width = 0;                             // Bit
    const ast::HeaderDecl* header = nullptr;   // Header
    const ast::StructDecl* strct = nullptr;    // Struct

    static SemType bit(int w) { return {Kind::Bit, w, nullptr, nullptr}; }
    static SemType boolean() { return {Kind::Bool, 0, nullptr, nullptr}; }
    static SemType untyped() { return {Kind::UntypedInt, 0, nullptr, nullptr}; }
    static SemType error() { return {Kind::Error, 0, nullptr, nullptr}; }

    bool is_bit() const { return kind == Kind::Bit; }
    bool is_bool() const { return kind == Kind::Bool; }
    bool is_error() const { return kind == Kind::Error; }
};

// Where an lvalue lands after path/slice resolution. Every well-typed lvalue
// that is read or assigned resolves to a bit-typed leaf (validity statements
// resolve to the header itself).
struct ResolvedLValue {
    std::string leaf_path;  // dotted base path, e.g. "h.eth_type"
    SemType type;           // type of the *base* (before the slice)
    int hi = -1, lo = -1;   // accessed bit range within the leaf (bit leaves)
    bool writable = false;
    std::optional<std::string> owning_header;  // innermost enclosing header path

    int access_width() const { return hi - lo + 1; }
};

struct TypedProgram {
    ast::Program program;
    std::unordered_map<const ast::Expr*, SemType> expr_types;
    std::unordered_map<const ast::LValue*, ResolvedLValue> lvalues;
    std::unordered_map<const ast::Expr*, bool> arg_writable;
    std::unordered_map<std::string, const ast::HeaderDecl*> headers;
    std::unordered_map<std::string, const ast::StructDecl*> structs;

    TypedProgram() = default;
    TypedProgram(const TypedProgram&) = delete;
    TypedProgram& operator=(const TypedProgram&) = delete;
    TypedProgram(TypedProgram&&) = default;
    TypedProgram& operator=(TypedProgram&&) = default;

    SemType type_of(const ast::Expr& e) const {
        auto it = expr_types.find(&e);
        return it == expr_types.end() ? SemType::error() : it->second;
    }
    const ResolvedLValue* resolved(const ast::LValue& lv) const {
        auto it = lvalues.find(&lv);
        return it == lvalues.end() ? nullptr : &it->second;
    }
    SemType resolve_type(const ast::TypeRef& t) const;
};

struct TypecheckResult {
    std::optional<TypedProgram> typed;
    Diagnostics diags;
    bool ok() const { return typed.has_value() && !has_error(diags); }
};

// Checks the program and annotates every expression and lvalue. Diagnostics
// carry codes TypeError / ShiftWidthError; malformed input never aborts the
// process.
TypecheckResult typecheck(ast::Program p);

// One bit-typed leaf of a (possibly nested) parameter type.
struct LeafField {
    std::string path;
    int width = 0;
    std::optional<std::string> owner_header;  // set if the leaf sits in a header
};

// Flattens a type instance rooted at `root` into bit leaves, declaration
// order. Also usable for plain bit params (single leaf).
std::vector<LeafField> flatten_type(const TypedProgram& tp, const std::string& root,
                                    const SemType& type);

// Dotted paths of all headers contained in the instance rooted at `root`.
std::vector<std::string> headers_in_type(const TypedProgram& tp, const std::string& root,
                                         const SemType& type);

// Interprets an expression as an assignable lvalue when it has that shape
// (a plain lvalue read or a slice of one).
std::optional<ast::LValue> expr_as_lvalue(const ast::Expr& e);

}  // namespace minip4

#endif  // MINIP4_TYPECHECK_H_
