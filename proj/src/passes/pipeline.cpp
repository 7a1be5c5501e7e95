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

#include "minip4/passes.h"

#include "minip4/parser.h"
#include "minip4/printer.h"
#include "pass_impls.h"

namespace minip4::passes {

const char* to_string(PassId id) {
    switch (id) {
        case PassId::ConstantFold: return "ConstantFold";
        case PassId::StrengthReduce: return "StrengthReduce";
        case PassId::SideEffectOrder: return "SideEffectOrder";
        case PassId::InlineCalls: return "InlineCalls";
        case PassId::RemoveActionParams: return "RemoveActionParams";
        case PassId::Predicate: return "Predicate";
        case PassId::ElimDeadStores: return "ElimDeadStores";
        case PassId::CopyProp: return "CopyProp";
    }
    return "?";
}

std::optional<PassId> pass_from_string(const std::string& name) {
    for (PassId id : default_pipeline())
        if (name == to_string(id)) return id;
    return std::nullopt;
}

std::vector<PassId> default_pipeline() {
    return {PassId::ConstantFold,     PassId::StrengthReduce, PassId::SideEffectOrder,
            PassId::InlineCalls,      PassId::RemoveActionParams, PassId::Predicate,
            PassId::ElimDeadStores,   PassId::CopyProp};
}

const std::vector<BugInfo>& bug_catalog() {
    static const std::vector<BugInfo> catalog = {
        {"SEO-MISS-TERNARY", PassId::SideEffectOrder,
         "a conditional operator used as a direct operand of a binary operator",
         "the operator is not hoisted into if/else; the pass's own postcondition "
         "assertion fires (crash)"},
        {"SR-SLICE-OVERFLOW", PassId::StrengthReduce,
         "a slice of a right-shift whose rewritten upper bound exceeds the operand width",
         "the narrowing rewrite is applied without its range guard, emitting an "
         "out-of-range slice the reparse typechecker rejects (invalid emit)"},
        {"DSE-SLICE-ALIAS", PassId::ElimDeadStores,
         "a store followed by a later slice store to the same variable that does not "
         "cover it",
         "the slice store is treated as overwriting the whole variable, deleting a "
         "live store (semantic)"},
        {"RAP-EXIT-SKIP-COPYOUT", PassId::RemoveActionParams,
         "an action with an inout/out parameter whose body exits",
         "parameter copy-out is emitted only at the body end, after the exit, so the "
         "write-back is dead (semantic)"},
        {"PRED-NESTED-IF", PassId::Predicate,
         "an if whose branch contains a nested if (a mux assignment after inner "
         "predication)",
         "mux-shaped assignments are hoisted out of the branch without the outer "
         "guard (semantic)"},
        {"CP-INVALID-HDR", PassId::CopyProp,
         "a write to a field of a currently invalid header followed by a read of it",
         "propagation ignores header validity, turning an undefined read into a "
         "defined value (unstable)"},
    };
    return catalog;
}

const BugInfo* find_bug(const std::string& id) {
    for (const auto& b : bug_catalog())
        if (b.id == id) return &b;
    return nullptr;
}

ast::Program run_pass(const TypedProgram& p, PassId id, const BugSet& bugs) {
    // Only toggles belonging to this pass are visible to it.
    BugSet mine;
    for (const auto& b : bugs) {
        const BugInfo* info = find_bug(b);
        if (info && info->pass == id) mine.insert(b);
    }
    switch (id) {
        case PassId::ConstantFold: return pass_constant_fold(p, mine);
        case PassId::StrengthReduce: return pass_strength_reduce(p, mine);
        case PassId::SideEffectOrder: return pass_side_effect_order(p, mine);
        case PassId::InlineCalls: return pass_inline_calls(p, mine);
        case PassId::RemoveActionParams: return pass_remove_action_params(p, mine);
        case PassId::Predicate: return pass_predicate(p, mine);
        case PassId::ElimDeadStores: return pass_elim_dead_stores(p, mine);
        case PassId::CopyProp: return pass_copy_prop(p, mine);
    }
    throw InternalError("unknown pass id");
}

std::optional<TypedProgram> reparse(const std::string& text, std::string* detail) {
    ParseResult pr = parse_program(text);
    if (!pr.ok()) {
        if (detail) {
            *detail = "reparse failed";
            for (const auto& d : pr.diags) *detail += "; " + d.render("<emitted>");
        }
        return std::nullopt;
    }
    TypecheckResult tr = typecheck(std::move(*pr.program));
    if (!tr.ok()) {
        if (detail) {
            *detail = "retypecheck failed";
            for (const auto& d : tr.diags) *detail += "; " + d.render("<emitted>");
        }
        return std::nullopt;
    }
    return std::move(tr.typed);
}

PassTrace run_pipeline(TypedProgram p, const PipelineConfig& cfg) {
    PassTrace trace;
    std::string text = print_program(p.program);
    TraceElement first;
    first.pass_name = "input";
    first.text = text;
    first.hash = content_hash(text);
    first.typed = std::move(p);
    trace.elements.push_back(std::move(first));

    for (PassId id : cfg.order) {
        const TraceElement& prev = trace.elements.back();
        ast::Program rewritten;
        try {
            rewritten = run_pass(prev.typed, id, cfg.bugs);
        } catch (const InternalError& e) {
            trace.crash = CrashInfo{to_string(id), e.what()};
            break;
        }
        std::string out_text = print_program(rewritten);
        uint64_t h = content_hash(out_text);
        if (h == prev.hash && out_text == prev.text) continue;  // no-op pass

        std::string detail;
        auto typed = reparse(out_text, &detail);
        if (!typed) {
            trace.reparse_failure = ReparseInfo{to_string(id), detail};
            break;
        }
        TraceElement el;
        el.pass_name = to_string(id);
        el.text = std::move(out_text);
        el.hash = h;
        el.typed = std::move(*typed);
        trace.elements.push_back(std::move(el));
    }
    return trace;
}

}  // namespace minip4::passes
