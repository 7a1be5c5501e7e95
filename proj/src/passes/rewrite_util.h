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

#ifndef MINIP4_SRC_PASSES_REWRITE_UTIL_H_
#define MINIP4_SRC_PASSES_REWRITE_UTIL_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minip4/typecheck.h"

// Structural helpers shared by the rewrite passes. Passes build new trees
// while reading the (typed) input tree, so everything here resolves names and
// widths from declarations rather than from pointer-keyed annotation maps.

namespace minip4::passes {

// Name -> declared type for everything visible in one control. Declaration
// names are control-wide unique (typechecker rule), so one flat index works.
class ControlIndex {
  public:
    ControlIndex(const TypedProgram& tp, const ast::ControlDecl& control);

    // Resolution optionally starts in an action scope (its params first).
    std::optional<ResolvedLValue> resolve(const ast::LValue& lv,
                                          const ast::ActionDecl* action = nullptr) const;

    const TypedProgram& tp() const { return tp_; }
    const ast::ControlDecl& control() const { return control_; }

  private:
    struct Entry {
        ast::TypeRef type;
        bool writable = false;
    };
    const TypedProgram& tp_;
    const ast::ControlDecl& control_;
    std::map<std::string, Entry> names_;
};

// Expression shape, computed structurally.
struct ExprShape {
    enum class Kind { Bit, Bool, Untyped };
    Kind kind = Kind::Untyped;
    int width = 0;
};

std::optional<ExprShape> shape_of(const ControlIndex& idx, const ast::Expr& e,
                                  const ast::ActionDecl* action = nullptr);

// Bit range of one leaf access.
struct BitRange {
    std::string leaf;
    int hi = 0, lo = 0;

    bool overlaps(const BitRange& o) const {
        return leaf == o.leaf && lo <= o.hi && o.lo <= hi;
    }
    bool covers(const BitRange& o) const {
        return leaf == o.leaf && lo <= o.lo && o.hi <= hi;
    }
};

// Leaf ranges read by an expression (validity reads excluded).
void collect_reads(const ControlIndex& idx, const ast::Expr& e, const ast::ActionDecl* action,
                   std::vector<BitRange>& out);

// Collision-free name generation within one control.
class FreshNames {
  public:
    explicit FreshNames(const ast::ControlDecl& control);
    std::string fresh(const std::string& base);
    void reserve(const std::string& name) { used_.insert(name); }

  private:
    std::set<std::string> used_;
};

// Renames every reference to the given declaration names inside a statement
// tree (lvalue path heads and declaration names). Used when splicing bodies.
void rename_decls(ast::Block& b, const std::map<std::string, std::string>& renames);
void rename_in_expr(ast::Expr& e, const std::map<std::string, std::string>& renames);

bool is_const_int(const ast::Expr& e);
bool is_const_bool(const ast::Expr& e);

}  // namespace minip4::passes

#endif  // MINIP4_SRC_PASSES_REWRITE_UTIL_H_
