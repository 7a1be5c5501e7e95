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

#ifndef MINIP4_PARSER_H_
#define MINIP4_PARSER_H_

#include <optional>
#include <string_view>

#include "minip4/ast.h"
#include "minip4/diag.h"

namespace minip4 {

struct ParseResult {
    std::optional<ast::Program> program;
    Diagnostics diags;

    bool ok() const { return program.has_value() && !has_error(diags); }
};

// Parses MiniP4 source text (grammar in docs/grammar.md). Total: any byte
// sequence yields either a Program or diagnostics, never an abort.
ParseResult parse_program(std::string_view text);

}  // namespace minip4

#endif  // MINIP4_PARSER_H_
