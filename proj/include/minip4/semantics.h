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

#ifndef MINIP4_SEMANTICS_H_
#define MINIP4_SEMANTICS_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minip4/term.h"
#include "minip4/typecheck.h"

// Symbolic interpreter: one control block becomes a total function from
// symbolic inputs (packet fields plus per-apply-site table symbols) to an
// output tuple of terms, with per-bit taint for undefined values.

namespace minip4::sem {

struct UnsupportedConstruct : public std::runtime_error {
    explicit UnsupportedConstruct(const std::string& what)
        : std::runtime_error("unsupported construct: " + what) {}
};

struct InputVar {
    std::string name;
    int width = 0;
    TermId var = kNoTerm;
};

struct OutputField {
    std::string path;
    int width = 0;
    TermId term = kNoTerm;
    uint64_t taint_mask = 0;  // bits that may depend on undefined values
    int header_index = -1;    // index into BlockSemantics::headers, or -1
};

struct OutputHeader {
    std::string path;
    TermId validity = kNoTerm;  // bool term
    bool validity_tainted = false;
};

// One textual table.apply() occurrence with its control-plane symbols.
struct TableSite {
    std::string table;
    int site = 0;  // per-table occurrence counter
    TermId key_var = kNoTerm;
    TermId action_var = kNoTerm;
    int key_width = 0;
    int action_var_width = 0;
    std::vector<std::string> action_names;  // ids 1..n by position
    std::string default_action;
};

struct BlockSemantics {
    std::string control;
    std::shared_ptr<TermArena> arena;
    std::vector<InputVar> inputs;      // in/inout leaves, then table symbols
    std::vector<OutputField> outputs;  // inout/out leaves, declaration order
    std::vector<OutputHeader> headers; // headers under inout/out params
    std::vector<TableSite> sites;
    TermId exited = kNoTerm;           // bool term (diagnostic only)

    std::vector<TermId> output_roots() const;
    const InputVar* find_input(const std::string& name) const;

    // Fig. 5b-style rendering of the functional form.
    std::string render() const;
};

// Interprets one control of a typechecked program. Deterministic: identical
// programs produce identical semantics, including fresh-variable naming.
BlockSemantics interpret_block(const TypedProgram& tp, const std::string& control);

// Same, but building terms into a caller-owned arena. Interpreting two
// programs into one arena unifies free variables by name, which is how the
// equivalence checker aligns inputs. The returned value's `arena` field is
// left unset.
BlockSemantics detail_interpret_into(TermArena& arena, const TypedProgram& tp,
                                     const std::string& control);

// ---------------------------------------------------------- concrete eval --

struct TaintPolicy {
    enum class Kind { Zero, Pattern };
    Kind kind = Kind::Zero;
    uint8_t byte = 0;

    static TaintPolicy zero() { return {Kind::Zero, 0}; }
    static TaintPolicy pattern(uint8_t b) { return {Kind::Pattern, b}; }
    uint64_t value_for(int width) const;
};

using Assignment = std::map<std::string, uint64_t>;

struct EvalField {
    std::string path;
    int width = 0;
    uint64_t value = 0;
    uint64_t dont_care = 0;  // bits to ignore (taint or invalid header)
};

struct EvalHeader {
    std::string path;
    bool valid = false;
    bool dont_care = false;
};

struct EvalOutput {
    std::vector<EvalField> fields;
    std::vector<EvalHeader> headers;
};

// Evaluates the semantics on a concrete input assignment. Tainted free
// variables take the policy value; missing assignments for declared inputs
// throw MissingAssignment.
EvalOutput concrete_eval(const BlockSemantics& s, const Assignment& a, TaintPolicy policy);

}  // namespace minip4::sem

#endif  // MINIP4_SEMANTICS_H_
