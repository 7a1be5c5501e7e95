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

#ifndef MINIP4_EQUIV_H_
#define MINIP4_EQUIV_H_

#include <optional>
#include <string>
#include <vector>

#include "minip4/passes.h"
#include "minip4/semantics.h"

// Translation validation: decide whether two block semantics agree on every
// input, classify taint-only divergences as unstable code, and pinpoint the
// offending pass in a trace.

namespace minip4::equiv {

enum class Backend { BruteForce, ExternalSolver };
enum class Mode { Strict, TaintAware };

const char* to_string(Backend b);

struct Counterexample {
    sem::Assignment inputs;  // every enumerated variable, including taint vars
    std::vector<std::pair<std::string, uint64_t>> before_out;
    std::vector<std::pair<std::string, uint64_t>> after_out;
};

struct EquivResult {
    enum class Verdict { Equivalent, Inequivalent, UnstableOnly, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::optional<Counterexample> cex;  // Inequivalent always; UnstableOnly: strict witness
    Backend backend = Backend::BruteForce;
    double ms = 0;
    std::string note;
};

const char* to_string(EquivResult::Verdict v);

struct CheckOptions {
    Mode mode = Mode::TaintAware;
    Backend backend = Backend::BruteForce;
    int width_budget = 20;        // total enumerated bits for brute force
    std::string solver_cmd;       // empty: GAUNTLET_SOLVER env, else brute force
    int solver_timeout_ms = 30000;
};

// The aligned comparison: which outputs get compared under which masks.
// Building it performs the signature check.
class Comparison {
  public:
    // Both semantics must live in the same arena (interpret both sides with
    // interpret_block_in). Throws SignatureMismatch on shape differences.
    Comparison(const sem::BlockSemantics& before, const sem::BlockSemantics& after, Mode mode);

    struct FieldPair {
        std::string path;
        int width = 0;
        sem::TermId before_term, after_term;
        uint64_t cmp_mask = 0;  // bits actually compared
        int header_pair = -1;
    };
    struct HeaderPair {
        std::string path;
        sem::TermId before_valid, after_valid;
        bool compared = true;  // false: before validity tainted in aware mode
    };

    const std::vector<FieldPair>& fields() const { return fields_; }
    const std::vector<HeaderPair>& headers() const { return headers_; }
    sem::TermArena& arena() const { return *arena_; }
    const sem::BlockSemantics& before() const { return *before_; }
    const sem::BlockSemantics& after() const { return *after_; }

    // Free variables occurring in the compared terms, ascending id.
    const std::vector<sem::TermId>& enum_vars() const { return enum_vars_; }
    int enum_bits() const { return enum_bits_; }

    // Evaluates both sides under the assignment and reports whether any
    // compared bit differs.
    bool differs(const sem::Assignment& a) const;
    Counterexample counterexample(const sem::Assignment& a) const;

  private:
    const sem::BlockSemantics* before_;
    const sem::BlockSemantics* after_;
    sem::TermArena* arena_;
    std::vector<FieldPair> fields_;
    std::vector<HeaderPair> headers_;
    std::vector<sem::TermId> enum_vars_;
    int enum_bits_ = 0;
};

struct SignatureMismatch : public std::runtime_error {
    explicit SignatureMismatch(const std::string& what)
        : std::runtime_error("signature mismatch: " + what) {}
};

// Interprets a control into an existing arena so two programs share variable
// identities (inputs unify by name).
sem::BlockSemantics interpret_block_in(sem::TermArena& arena, const TypedProgram& tp,
                                       const std::string& control);

// Exhaustive enumeration over all assignments to the compared variables; the
// ground-truth oracle. Runs the strict/taint-aware two-step classification.
EquivResult brute_force_equiv(const sem::BlockSemantics& before,
                              const sem::BlockSemantics& after, int width_budget);

// Full check with backend selection and fallback (SolverUnavailable falls
// back to brute force when the instance fits the budget).
EquivResult check_equivalence(const sem::BlockSemantics& before,
                              const sem::BlockSemantics& after, const CheckOptions& opts);

// QF_BV script whose single assertion is the output-inequality disjunction;
// sat iff inequivalent. Deterministic symbol naming.
std::string emit_smt(const Comparison& cmp);

// ---------------------------------------------------------------- findings --

struct Finding {
    enum class Kind { Crash, Semantic, Unstable, InvalidEmit };
    Kind kind = Kind::Semantic;
    std::string program;  // file name or gen_<seed>
    std::string pass;     // offending pass, or "(end-to-end)" for MBT results
    std::string control;
    std::string detail;
    std::optional<Counterexample> cex;
    uint64_t seed = 0;
    std::string backend;
    double ms = 0;
};

const char* to_string(Finding::Kind k);

// Checks every consecutive trace pair for every pipeline control. The first
// Inequivalent pinpoints its pass and stops further semantic checking;
// UnstableOnly findings are recorded and checking continues. Crash and
// reparse events on the trace become Crash / InvalidEmit findings.
std::vector<Finding> validate_trace(const passes::PassTrace& trace, const CheckOptions& opts);

}  // namespace minip4::equiv

#endif  // MINIP4_EQUIV_H_
