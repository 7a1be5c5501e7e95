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

#ifndef MINIP4_MBT_H_
#define MINIP4_MBT_H_

#include <string>
#include <vector>

#include "minip4/equiv.h"
#include "minip4/semantics.h"

// Model-based testing: the block semantics of the *original* program is the
// model; test packets derived from its paths run against a reference target
// that executes the fully compiled AST directly (an independent execution
// path, deliberately separate from the term machinery).

namespace minip4::mbt {

struct PathCondition {
    sem::TermId cond = sem::kNoTerm;  // bool term in the semantics' arena
    int path_id = 0;
    bool controllable = true;
};

struct PathEnumResult {
    std::vector<PathCondition> paths;
    bool truncated = false;
};

// Mutually exclusive path conditions from the Ite structure of the outputs.
// Branches guarded by tainted conditions are never split: the target cannot
// be steered through undefined values.
PathEnumResult enumerate_paths(const sem::BlockSemantics& s, int limit);

struct TestCase {
    sem::Assignment inputs;  // every declared input, including table symbols
    std::vector<sem::EvalField> expected;
    std::vector<sem::EvalHeader> expected_headers;
    int path_id = 0;
    uint64_t seed = 0;
};

struct DeriveResult {
    std::vector<TestCase> cases;
    int unsatisfiable_dropped = 0;
    int search_exhausted = 0;
};

// One test case per satisfiable path, preferring randomized all-nonzero
// inputs with a deterministic enumeration fallback.
DeriveResult derive_testcases(const sem::BlockSemantics& s, const PathEnumResult& paths,
                              uint64_t seed);

struct TargetResult {
    enum class Kind { Pass, Fail, Reject };
    Kind kind = Kind::Pass;
    std::string reason;
    std::vector<sem::EvalField> actual;
};

// Executes the control of `final` concretely under the undefined-value
// policy, installs one exact-match entry per apply site from the test case,
// and compares outputs on non-don't-care bits. Impossible installations
// produce Reject (the case is discarded, not failed).
TargetResult run_target(const TypedProgram& final_program, const std::string& control,
                        const TestCase& tc, sem::TaintPolicy policy);

struct MbtConfig {
    passes::PipelineConfig pipeline;
    sem::TaintPolicy policy = sem::TaintPolicy::zero();
    int path_limit = 32;
    uint64_t seed = 0;
};

// Full loop: model from the original program, pipeline (possibly bug-toggled)
// to the final program, derived cases run against the target. Failures become
// Semantic findings with pass "(end-to-end)".
std::vector<equiv::Finding> run_mbt(const TypedProgram& p, const MbtConfig& cfg);

// Same, reusing an existing pipeline trace (the campaign path).
std::vector<equiv::Finding> run_mbt_on_trace(const passes::PassTrace& trace,
                                             const MbtConfig& cfg);

// STF-like text: `add`/`packet`/`expect` lines, `*` nibbles are don't-care
// (format in docs/stf.md).
std::string emit_stf(const sem::BlockSemantics& s, const std::vector<TestCase>& cases);

}  // namespace minip4::mbt

#endif  // MINIP4_MBT_H_
