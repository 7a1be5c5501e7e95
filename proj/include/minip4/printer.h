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

#ifndef MINIP4_PRINTER_H_
#define MINIP4_PRINTER_H_

#include <string>

#include "minip4/ast.h"

namespace minip4 {

// Canonical source text: deterministic whitespace, decimal literal values,
// parentheses by precedence. parse_program(print_program(p)) is structurally
// equal to p, and printing is idempotent across a parse round trip.
std::string print_program(const ast::Program& p);

std::string print_expr(const ast::Expr& e);
std::string print_stmt(const ast::Stmt& s, int indent = 0);

// FNV-1a over the canonical text; used to drop no-op pipeline steps.
uint64_t content_hash(const std::string& text);

}  // namespace minip4

#endif  // MINIP4_PRINTER_H_
