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

#ifndef MINIP4_GENERATOR_H_
#define MINIP4_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "minip4/diag.h"
#include "minip4/typecheck.h"

// Weighted random generation of well-typed programs. Generation is
// type-directed: a target type is chosen first and only productions valid at
// that type are drawn, so the output typechecks by construction. A program
// that fails the typechecker is a generator bug, never an expected outcome.

namespace minip4::gen {

struct GenConfig {
    uint64_t seed = 0;
    // production weight overrides; see default_weights() for the full list
    std::map<std::string, double> weights;
    int max_statements_per_block = 10;
    int max_expr_depth = 3;
    int max_controls = 1;
    std::vector<int> width_pool = {1, 2, 4, 8};
    bool allow_undefined = true;
    bool allow_tables = true;
    bool allow_exit = true;
    bool allow_ternary = true;
    int target_input_bits = 12;   // keeps programs inside the brute-force budget
    long long max_paths = 64;     // regrow above this estimate

    double weight(const std::string& production) const;
    static const std::map<std::string, double>& default_weights();

    // Flat key=value text (weight overrides as weight.<name>=<value>).
    static GenConfig from_text(const std::string& text, Diagnostics& diags);
    std::string to_text() const;
};

struct GenerationBudgetExhausted : public std::runtime_error {
    explicit GenerationBudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic in (seed, cfg); the result always typechecks.
TypedProgram generate_program(const GenConfig& cfg);

// Syntactic upper bound on distinct execution paths: branch arms multiply,
// each conditional-operator occurrence doubles, a table apply sums its
// per-action arm counts plus the default arm (counted twice when the default
// is not the last listed action).
long long estimate_paths(const TypedProgram& p);

}  // namespace minip4::gen

#endif  // MINIP4_GENERATOR_H_
