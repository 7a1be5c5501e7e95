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

#ifndef MINIP4_SRC_LEXER_H_
#define MINIP4_SRC_LEXER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "minip4/diag.h"

namespace minip4 {

enum class Tok {
    End,
    Ident,
    Number,    // plain integer literal (decimal or 0x hex)
    WidthLit,  // <width>w<value>
    // punctuation / operators
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Semi, Comma, Dot, Colon, Question,
    Assign,          // =
    Plus, Minus, Star,
    Amp, Pipe, Caret, Tilde, Bang,
    AmpAmp, PipePipe,
    EqEq, NotEq, Lt, Le, Gt, Ge,
    Shl, Shr,
    PlusPlus,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;      // identifier spelling
    uint64_t value = 0;    // Number / WidthLit value
    int width = 0;         // WidthLit width
    SourceLoc loc;
};

// Tokenizes the whole input. Never throws: malformed input produces
// diagnostics and the token stream ends early at the offending byte.
std::vector<Token> lex(std::string_view src, Diagnostics& diags);

}  // namespace minip4

#endif  // MINIP4_SRC_LEXER_H_
