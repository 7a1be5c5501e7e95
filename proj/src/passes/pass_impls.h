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

#ifndef MINIP4_SRC_PASSES_PASS_IMPLS_H_
#define MINIP4_SRC_PASSES_PASS_IMPLS_H_

#include "minip4/passes.h"

namespace minip4::passes {

ast::Program pass_constant_fold(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_strength_reduce(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_side_effect_order(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_inline_calls(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_remove_action_params(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_predicate(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_elim_dead_stores(const TypedProgram& p, const BugSet& bugs);
ast::Program pass_copy_prop(const TypedProgram& p, const BugSet& bugs);

inline bool bug_active(const BugSet& bugs, const char* id) { return bugs.count(id) > 0; }

}  // namespace minip4::passes

#endif  // MINIP4_SRC_PASSES_PASS_IMPLS_H_
