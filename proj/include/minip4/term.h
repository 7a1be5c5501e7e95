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

#ifndef MINIP4_TERM_H_
#define MINIP4_TERM_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "minip4/diag.h"

// Pure bit-vector/boolean expression DAG. Nodes are hash-consed in an arena:
// equal structure means equal id, children always have smaller ids than their
// parents, and everything is immutable once built. Widths are 1..64; booleans
// are a separate sort.

namespace minip4::sem {

using TermId = int32_t;
constexpr TermId kNoTerm = -1;

enum class TermKind : uint8_t { BvConst, BoolConst, FreeVar, Ite, Extract, Concat, Unary, Binary };

enum class TermOp : uint8_t {
    None,
    BvNot, BvNeg, BoolNot,
    Add, Sub, Mul, And, Or, Xor, Shl, Shr,
    Eq, Ne, Ult, Ule, Ugt, Uge,
    BoolAnd, BoolOr,
};

struct TermNode {
    TermKind kind = TermKind::BvConst;
    TermOp op = TermOp::None;
    bool is_bool = false;
    bool tainted_source = false;  // FreeVar standing for an undefined value
    int16_t width = 0;            // bit-vector width; 0 for bool
    int16_t hi = 0, lo = 0;       // Extract bounds
    TermId a = kNoTerm, b = kNoTerm, c = kNoTerm;
    uint64_t value = 0;   // constants
    int32_t name = -1;    // FreeVar: index into TermArena::var_names()

    uint64_t width_mask() const {
        return width >= 64 ? ~0ull : ((1ull << width) - 1);
    }
};

class TermArena {
  public:
    TermId bv_const(int width, uint64_t value);
    TermId bool_const(bool value);
    // Free variables are unique per name; re-requesting a name returns the
    // original id (width/sort must agree).
    TermId free_var(const std::string& name, int width, bool tainted);
    TermId free_bool_var(const std::string& name, bool tainted);

    TermId ite(TermId cond, TermId a, TermId b);
    TermId extract(int hi, int lo, TermId t);
    TermId concat(TermId hi_part, TermId lo_part);
    TermId unary(TermOp op, TermId a);
    TermId binary(TermOp op, TermId a, TermId b);

    // Zero-extends or truncates to new_width.
    TermId resize(TermId t, int new_width);
    TermId bool_to_bit(TermId b);
    TermId bit_to_bool(TermId t);

    const TermNode& node(TermId id) const { return nodes_[id]; }
    size_t size() const { return nodes_.size(); }
    const std::string& var_name(int32_t idx) const { return var_names_[idx]; }
    TermId lookup_var(const std::string& name) const;

    // Collects the free variables reachable from the given roots, ascending id
    // order (deterministic).
    std::vector<TermId> free_vars_of(const std::vector<TermId>& roots) const;

    // Per-bit taint mask: bits that may depend on a tainted free variable.
    // Conservative across carries and data-dependent shifts. Bool terms use
    // bit 0. Memoized per arena.
    uint64_t taint_bits(TermId t);
    bool is_tainted(TermId t) { return taint_bits(t) != 0; }

    // Rebuilds `root` with the given node replacements applied (typically
    // condition -> constant). Results are folded by the builders.
    TermId substitute(TermId root, const std::unordered_map<TermId, TermId>& repl);

    // Fig. 5b-style functional rendering ("if (c): x / otherwise: y").
    std::string render(TermId t, int indent = 0) const;
    // Compact single-line rendering for counterexamples and debugging.
    std::string render_flat(TermId t) const;

  private:
    TermId intern(TermNode n);

    std::vector<TermNode> nodes_;
    std::unordered_map<uint64_t, std::vector<TermId>> index_;
    std::vector<std::string> var_names_;
    std::unordered_map<std::string, TermId> var_ids_;
    std::vector<uint64_t> taint_memo_;
    std::vector<bool> taint_known_;
};

// Evaluates roots over concrete assignments, reusing a topologically sorted
// plan across many assignments (ids are construction-ordered, so ascending id
// order is a valid schedule).
class ConcreteEval {
  public:
    ConcreteEval(const TermArena& arena, const std::vector<TermId>& roots);

    // Variable values are set by node id; unset variables fall back to the
    // taint policy value if tainted, otherwise evaluation throws.
    void set_var(TermId var, uint64_t value);
    void clear_vars();
    void set_policy(uint64_t (*policy)(int width, void* ctx), void* ctx);

    const std::vector<TermId>& vars() const { return vars_; }

    // Runs the plan; afterwards value_of() is valid for every reachable term.
    void run();
    uint64_t value_of(TermId t) const { return values_[t]; }

  private:
    const TermArena& arena_;
    std::vector<TermId> plan_;   // ascending reachable ids
    std::vector<TermId> vars_;   // reachable FreeVars, ascending
    std::vector<uint64_t> values_;
    std::vector<uint8_t> has_value_;
    uint64_t (*policy_)(int, void*) = nullptr;
    void* policy_ctx_ = nullptr;
};

struct MissingAssignment : public std::runtime_error {
    explicit MissingAssignment(const std::string& var)
        : std::runtime_error("no value for input '" + var + "'") {}
};

}  // namespace minip4::sem

#endif  // MINIP4_TERM_H_
