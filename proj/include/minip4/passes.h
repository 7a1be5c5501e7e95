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

#ifndef MINIP4_PASSES_H_
#define MINIP4_PASSES_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minip4/typecheck.h"

// Nanopass mid-end: whole-program AST rewrites, each emitting valid MiniP4.
// Every pass also carries its seeded defect variants behind bug toggles; the
// toggled code paths mirror real miscompilation classes and stay diffable
// against the clean logic.

namespace minip4::passes {

enum class PassId {
    ConstantFold,
    StrengthReduce,
    SideEffectOrder,
    InlineCalls,
    RemoveActionParams,
    Predicate,
    ElimDeadStores,
    CopyProp,
};

const char* to_string(PassId id);
std::optional<PassId> pass_from_string(const std::string& name);
std::vector<PassId> default_pipeline();

// Seeded-bug catalog. Each entry alters exactly one pass.
struct BugInfo {
    std::string id;
    PassId pass;
    std::string trigger;    // what program shape sets it off
    std::string effect;     // what goes wrong
};
const std::vector<BugInfo>& bug_catalog();
const BugInfo* find_bug(const std::string& id);

using BugSet = std::set<std::string>;

// One rewrite. The result is an untyped AST; callers print and reparse it
// (run_pipeline does both). Internal assertion failures escape as
// InternalError, the crash-bug signal.
ast::Program run_pass(const TypedProgram& p, PassId id, const BugSet& bugs);

struct TraceElement {
    std::string pass_name;  // "input" for element 0
    std::string text;
    uint64_t hash = 0;
    TypedProgram typed;
};

struct CrashInfo {
    std::string pass;
    std::string message;
};

struct ReparseInfo {
    std::string pass;
    std::string detail;
};

struct PassTrace {
    std::vector<TraceElement> elements;
    std::optional<CrashInfo> crash;                 // pass assertion fired
    std::optional<ReparseInfo> reparse_failure;     // emitted text did not reparse
};

struct PipelineConfig {
    std::vector<PassId> order = default_pipeline();
    BugSet bugs;
};

// Runs the pipeline, emitting and explicitly reparsing the program after
// every pass; steps whose text hashes equal their predecessor are dropped.
// A crash or reparse failure ends the trace and is recorded on it.
PassTrace run_pipeline(TypedProgram p, const PipelineConfig& cfg);

// Reparses canonical text into a typed program; nullopt plus `detail` when
// parsing or typechecking fails.
std::optional<TypedProgram> reparse(const std::string& text, std::string* detail);

}  // namespace minip4::passes

#endif  // MINIP4_PASSES_H_
