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

#include "lexer.h"

#include <cctype>

namespace minip4 {

namespace {

struct Cursor {
    std::string_view src;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= src.size(); }
    char peek(size_t off = 0) const {
        return pos + off < src.size() ? src[pos + off] : '\0';
    }
    char advance() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    SourceLoc loc() const { return {line, col}; }
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Parses digits at the cursor; handles 0x prefix. Values wider than 64 bits
// wrap silently (all MiniP4 arithmetic is modular anyway).
uint64_t read_number(Cursor& c) {
    uint64_t v = 0;
    if (c.peek() == '0' && (c.peek(1) == 'x' || c.peek(1) == 'X')) {
        c.advance();
        c.advance();
        while (std::isxdigit(static_cast<unsigned char>(c.peek()))) {
            char d = c.advance();
            uint64_t digit = std::isdigit(static_cast<unsigned char>(d))
                                 ? static_cast<uint64_t>(d - '0')
                                 : static_cast<uint64_t>(std::tolower(d) - 'a' + 10);
            v = v * 16 + digit;
        }
    } else {
        while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            v = v * 10 + static_cast<uint64_t>(c.advance() - '0');
        }
    }
    return v;
}

}  // namespace

std::vector<Token> lex(std::string_view src, Diagnostics& diags) {
    std::vector<Token> out;
    Cursor c{src};
    while (!c.done()) {
        char ch = c.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '/') {
            while (!c.done() && c.peek() != '\n') c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '*') {
            SourceLoc start = c.loc();
            c.advance();
            c.advance();
            bool closed = false;
            while (!c.done()) {
                if (c.peek() == '*' && c.peek(1) == '/') {
                    c.advance();
                    c.advance();
                    closed = true;
                    break;
                }
                c.advance();
            }
            if (!closed)
                diags.push_back({start, Severity::Error, "SyntaxError", "unterminated comment"});
            continue;
        }

        Token t;
        t.loc = c.loc();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            uint64_t first = read_number(c);
            // <width>w<value> literal: digits immediately followed by 'w' and
            // another number, no whitespace.
            if (c.peek() == 'w' &&
                (std::isdigit(static_cast<unsigned char>(c.peek(1))))) {
                c.advance();  // 'w'
                uint64_t value = read_number(c);
                t.kind = Tok::WidthLit;
                t.width = static_cast<int>(first);
                t.value = value;
            } else if (is_ident_start(c.peek())) {
                diags.push_back(
                    {t.loc, Severity::Error, "SyntaxError", "malformed numeric literal"});
                return out;
            } else {
                t.kind = Tok::Number;
                t.value = first;
            }
            out.push_back(std::move(t));
            continue;
        }
        if (is_ident_start(ch)) {
            std::string name;
            while (is_ident_char(c.peek())) name += c.advance();
            t.kind = Tok::Ident;
            t.text = std::move(name);
            out.push_back(std::move(t));
            continue;
        }

        auto two = [&](char a, char b) { return ch == a && c.peek(1) == b; };
        if (two('&', '&')) { c.advance(); c.advance(); t.kind = Tok::AmpAmp; }
        else if (two('|', '|')) { c.advance(); c.advance(); t.kind = Tok::PipePipe; }
        else if (two('=', '=')) { c.advance(); c.advance(); t.kind = Tok::EqEq; }
        else if (two('!', '=')) { c.advance(); c.advance(); t.kind = Tok::NotEq; }
        else if (two('<', '=')) { c.advance(); c.advance(); t.kind = Tok::Le; }
        else if (two('>', '=')) { c.advance(); c.advance(); t.kind = Tok::Ge; }
        else if (two('<', '<')) { c.advance(); c.advance(); t.kind = Tok::Shl; }
        else if (two('>', '>')) { c.advance(); c.advance(); t.kind = Tok::Shr; }
        else if (two('+', '+')) { c.advance(); c.advance(); t.kind = Tok::PlusPlus; }
        else {
            c.advance();
            switch (ch) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '{': t.kind = Tok::LBrace; break;
                case '}': t.kind = Tok::RBrace; break;
                case '[': t.kind = Tok::LBracket; break;
                case ']': t.kind = Tok::RBracket; break;
                case ';': t.kind = Tok::Semi; break;
                case ',': t.kind = Tok::Comma; break;
                case '.': t.kind = Tok::Dot; break;
                case ':': t.kind = Tok::Colon; break;
                case '?': t.kind = Tok::Question; break;
                case '=': t.kind = Tok::Assign; break;
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '&': t.kind = Tok::Amp; break;
                case '|': t.kind = Tok::Pipe; break;
                case '^': t.kind = Tok::Caret; break;
                case '~': t.kind = Tok::Tilde; break;
                case '!': t.kind = Tok::Bang; break;
                case '<': t.kind = Tok::Lt; break;
                case '>': t.kind = Tok::Gt; break;
                default:
                    diags.push_back({t.loc, Severity::Error, "SyntaxError",
                                     std::string("unexpected character '") +
                                         (std::isprint(static_cast<unsigned char>(ch)) ? ch : '?') +
                                         "'"});
                    return out;
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.loc = c.loc();
    out.push_back(std::move(end));
    return out;
}

}  // namespace minip4
