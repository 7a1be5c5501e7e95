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

#include "minip4/parser.h"

#include <utility>

#include "lexer.h"

namespace minip4 {
namespace {

using namespace ast;

// Thrown on the first syntax error; the message has already been recorded.
struct ParseAbort {};

class Parser {
  public:
    Parser(std::vector<Token> toks, Diagnostics& diags)
        : toks_(std::move(toks)), diags_(diags) {}

    Program parse() {
        Program p;
        while (!at(Tok::End)) {
            if (at_keyword("header")) {
                p.type_decls.push_back(parse_header());
            } else if (at_keyword("struct")) {
                p.type_decls.push_back(parse_struct());
            } else if (at_keyword("control")) {
                p.controls.push_back(parse_control());
            } else if (at_keyword("package")) {
                parse_package(p);
            } else {
                fail(peek().loc, "expected 'header', 'struct', 'control', or 'package'");
            }
        }
        return p;
    }

  private:
    std::vector<Token> toks_;
    Diagnostics& diags_;
    size_t pos_ = 0;

    const Token& peek(size_t off = 0) const {
        size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_keyword(std::string_view kw) const {
        return peek().kind == Tok::Ident && peek().text == kw;
    }
    Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(SourceLoc loc, const std::string& msg) {
        diags_.push_back({loc, Severity::Error, "SyntaxError", msg});
        throw ParseAbort{};
    }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(peek().loc, std::string("expected ") + what);
        return advance();
    }
    Token expect_ident(const char* what) { return expect(Tok::Ident, what); }
    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail(peek().loc, std::string("expected '") + std::string(kw) + "'");
        advance();
    }

    bool at_type_start() const {
        return at_keyword("bit") || at_keyword("bool");
    }

    TypeRef parse_type() {
        if (at_keyword("bit")) {
            advance();
            expect(Tok::Lt, "'<'");
            Token w = expect(Tok::Number, "bit width");
            expect(Tok::Gt, "'>'");
            if (w.value < 1 || w.value > 64)
                fail(w.loc, "bit width must be in 1..64");
            return TypeRef::bit(static_cast<int>(w.value));
        }
        if (at_keyword("bool")) {
            advance();
            return TypeRef::boolean();
        }
        Token name = expect_ident("type name");
        return TypeRef::named(name.text);
    }

    HeaderDecl parse_header() {
        HeaderDecl h;
        h.loc = peek().loc;
        expect_keyword("header");
        h.name = expect_ident("header name").text;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            FieldDecl f;
            f.loc = peek().loc;
            f.type = parse_type();
            if (f.type.kind != TypeRef::Kind::Bit)
                fail(f.loc, "header fields must have type bit<N>");
            f.name = expect_ident("field name").text;
            expect(Tok::Semi, "';'");
            h.fields.push_back(std::move(f));
        }
        expect(Tok::RBrace, "'}'");
        return h;
    }

    StructDecl parse_struct() {
        StructDecl s;
        s.loc = peek().loc;
        expect_keyword("struct");
        s.name = expect_ident("struct name").text;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            FieldDecl f;
            f.loc = peek().loc;
            f.type = parse_type();
            f.name = expect_ident("field name").text;
            expect(Tok::Semi, "';'");
            s.fields.push_back(std::move(f));
        }
        expect(Tok::RBrace, "'}'");
        return s;
    }

    void parse_package(Program& p) {
        SourceLoc loc = peek().loc;
        expect_keyword("package");
        expect_ident("package name");
        expect(Tok::LParen, "'('");
        if (!p.package.empty()) fail(loc, "duplicate package declaration");
        while (true) {
            p.package.push_back(expect_ident("control name").text);
            if (at(Tok::Comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        if (p.package.empty()) fail(loc, "package lists no controls");
    }

    std::vector<Param> parse_params() {
        std::vector<Param> out;
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            while (true) {
                Param prm;
                prm.loc = peek().loc;
                if (at_keyword("in")) { advance(); prm.direction = Direction::In; }
                else if (at_keyword("inout")) { advance(); prm.direction = Direction::InOut; }
                else if (at_keyword("out")) { advance(); prm.direction = Direction::Out; }
                else fail(peek().loc, "expected parameter direction (in/inout/out)");
                prm.type = parse_type();
                prm.name = expect_ident("parameter name").text;
                out.push_back(std::move(prm));
                if (at(Tok::Comma)) {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect(Tok::RParen, "')'");
        return out;
    }

    ControlDecl parse_control() {
        ControlDecl c;
        c.loc = peek().loc;
        expect_keyword("control");
        c.name = expect_ident("control name").text;
        c.params = parse_params();
        expect(Tok::LBrace, "'{'");
        while (!at_keyword("apply")) {
            if (at(Tok::End)) fail(peek().loc, "control body missing 'apply' block");
            if (at_keyword("action")) {
                c.locals.push_back(parse_action());
            } else if (at_keyword("table")) {
                c.locals.push_back(parse_table());
            } else if (at_type_start() || at(Tok::Ident)) {
                LocalVarDecl v;
                v.loc = peek().loc;
                v.type = parse_type();
                v.name = expect_ident("variable name").text;
                if (at(Tok::Assign)) {
                    advance();
                    v.init = parse_expr();
                }
                expect(Tok::Semi, "';'");
                c.locals.push_back(std::move(v));
            } else {
                fail(peek().loc, "expected declaration or 'apply'");
            }
        }
        expect_keyword("apply");
        c.apply = parse_block();
        expect(Tok::RBrace, "'}'");
        return c;
    }

    ActionDecl parse_action() {
        ActionDecl a;
        a.loc = peek().loc;
        expect_keyword("action");
        a.name = expect_ident("action name").text;
        if (at(Tok::LParen) && peek(1).kind == Tok::RParen) {
            advance();
            advance();
        } else {
            a.params = parse_params();
        }
        a.body = parse_block();
        return a;
    }

    TableDecl parse_table() {
        TableDecl t;
        t.loc = peek().loc;
        expect_keyword("table");
        t.name = expect_ident("table name").text;
        expect(Tok::LBrace, "'{'");
        expect_keyword("key");
        expect(Tok::Assign, "'='");
        t.key = parse_expr();
        expect(Tok::Colon, "':'");
        expect_keyword("exact");
        expect(Tok::Semi, "';'");
        expect_keyword("actions");
        expect(Tok::Assign, "'='");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token name = expect_ident("action name");
            expect(Tok::LParen, "'('");
            expect(Tok::RParen, "')'");
            expect(Tok::Semi, "';'");
            t.actions.push_back(name.text);
        }
        expect(Tok::RBrace, "'}'");
        expect_keyword("default_action");
        expect(Tok::Assign, "'='");
        t.default_action = expect_ident("action name").text;
        expect(Tok::LParen, "'('");
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        expect(Tok::RBrace, "'}'");
        if (t.actions.empty()) fail(t.loc, "table lists no actions");
        return t;
    }

    Block parse_block() {
        Block b;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) fail(peek().loc, "unterminated block");
            b.stmts.push_back(parse_statement());
        }
        expect(Tok::RBrace, "'}'");
        return b;
    }

    StmtPtr parse_statement() {
        SourceLoc loc = peek().loc;
        if (at(Tok::LBrace)) {
            return make_stmt(loc, BlockStmt{parse_block()});
        }
        if (at_keyword("if")) {
            advance();
            expect(Tok::LParen, "'('");
            IfStmt s;
            s.cond = parse_expr();
            expect(Tok::RParen, "')'");
            s.then_block = parse_branch_block();
            if (at_keyword("else")) {
                advance();
                s.else_block = parse_branch_block();
            }
            return make_stmt(loc, std::move(s));
        }
        if (at_keyword("exit")) {
            advance();
            expect(Tok::Semi, "';'");
            return make_stmt(loc, ExitStmt{});
        }
        if (at_keyword("bit") || at_keyword("bool")) {
            VarDeclStmt v;
            v.type = parse_type();
            v.name = expect_ident("variable name").text;
            if (at(Tok::Assign)) {
                advance();
                v.init = parse_expr();
            }
            expect(Tok::Semi, "';'");
            return make_stmt(loc, std::move(v));
        }
        if (at(Tok::Ident)) {
            // Could be: call, apply, setValid/setInvalid, assignment, or a
            // declaration with a named type ("Foo x;").
            if (peek(1).kind == Tok::Ident) {
                VarDeclStmt v;
                v.type = parse_type();
                v.name = expect_ident("variable name").text;
                if (at(Tok::Assign)) {
                    advance();
                    v.init = parse_expr();
                }
                expect(Tok::Semi, "';'");
                return make_stmt(loc, std::move(v));
            }
            if (peek(1).kind == Tok::LParen) {
                CallStmt call;
                call.callee = advance().text;
                advance();  // '('
                if (!at(Tok::RParen)) {
                    while (true) {
                        call.args.push_back(parse_expr());
                        if (at(Tok::Comma)) {
                            advance();
                            continue;
                        }
                        break;
                    }
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                return make_stmt(loc, std::move(call));
            }
            // Dotted path: decide between apply/setValid/setInvalid and
            // assignment once the path is consumed.
            LValue lv = parse_lvalue_path();
            if (at(Tok::LParen)) {
                // trailing path element was a method name
                if (lv.path.size() < 2 || lv.slice.has_value())
                    fail(loc, "unexpected '('");
                std::string method = lv.path.back();
                lv.path.pop_back();
                advance();  // '('
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                if (method == "apply") {
                    if (lv.path.size() != 1)
                        fail(loc, "apply() requires a table name");
                    return make_stmt(loc, ApplyStmt{lv.path[0]});
                }
                if (method == "setValid") return make_stmt(loc, SetValidityStmt{std::move(lv), true});
                if (method == "setInvalid")
                    return make_stmt(loc, SetValidityStmt{std::move(lv), false});
                fail(loc, "unknown method '" + method + "' in statement");
            }
            if (at(Tok::LBracket)) parse_lvalue_slice(lv);
            expect(Tok::Assign, "'=' in assignment");
            AssignStmt s;
            s.target = std::move(lv);
            s.value = parse_expr();
            expect(Tok::Semi, "';'");
            return make_stmt(loc, std::move(s));
        }
        fail(loc, "expected statement");
    }

    // if/else branches are always represented as blocks.
    Block parse_branch_block() {
        if (at(Tok::LBrace)) return parse_block();
        Block b;
        b.stmts.push_back(parse_statement());
        return b;
    }

    LValue parse_lvalue_path() {
        LValue lv;
        lv.loc = peek().loc;
        lv.path.push_back(expect_ident("name").text);
        while (at(Tok::Dot)) {
            advance();
            lv.path.push_back(expect_ident("member name").text);
        }
        return lv;
    }

    void parse_lvalue_slice(LValue& lv) {
        expect(Tok::LBracket, "'['");
        Token hi = expect(Tok::Number, "slice upper bound");
        expect(Tok::Colon, "':'");
        Token lo = expect(Tok::Number, "slice lower bound");
        expect(Tok::RBracket, "']'");
        lv.slice = {static_cast<int>(hi.value), static_cast<int>(lo.value)};
    }

    // ---------------------------------------------------- expressions ----
    // Precedence, loosest first: ?: || && | ^ & (==,!=) (<,<=,>,>=)
    // (<<,>>) (+,-,++) (*) unary postfix-slice primary

    ExprPtr parse_expr() { return parse_ternary(); }

    ExprPtr parse_ternary() {
        ExprPtr cond = parse_bool_or();
        if (!at(Tok::Question)) return cond;
        SourceLoc loc = peek().loc;
        advance();
        ExprPtr a = parse_expr();
        expect(Tok::Colon, "':'");
        ExprPtr b = parse_ternary();
        return make_expr(loc, TernaryExpr{std::move(cond), std::move(a), std::move(b)});
    }

    ExprPtr parse_bool_or() {
        ExprPtr e = parse_bool_and();
        while (at(Tok::PipePipe)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::BoolOr, std::move(e), parse_bool_and()});
        }
        return e;
    }
    ExprPtr parse_bool_and() {
        ExprPtr e = parse_bit_or();
        while (at(Tok::AmpAmp)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::BoolAnd, std::move(e), parse_bit_or()});
        }
        return e;
    }
    ExprPtr parse_bit_or() {
        ExprPtr e = parse_bit_xor();
        while (at(Tok::Pipe)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::BitOr, std::move(e), parse_bit_xor()});
        }
        return e;
    }
    ExprPtr parse_bit_xor() {
        ExprPtr e = parse_bit_and();
        while (at(Tok::Caret)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::BitXor, std::move(e), parse_bit_and()});
        }
        return e;
    }
    ExprPtr parse_bit_and() {
        ExprPtr e = parse_equality();
        while (at(Tok::Amp)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::BitAnd, std::move(e), parse_equality()});
        }
        return e;
    }
    ExprPtr parse_equality() {
        ExprPtr e = parse_relational();
        while (at(Tok::EqEq) || at(Tok::NotEq)) {
            BinOp op = at(Tok::EqEq) ? BinOp::Eq : BinOp::Ne;
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{op, std::move(e), parse_relational()});
        }
        return e;
    }
    ExprPtr parse_relational() {
        ExprPtr e = parse_shift();
        while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
            BinOp op = at(Tok::Lt)   ? BinOp::Lt
                       : at(Tok::Le) ? BinOp::Le
                       : at(Tok::Gt) ? BinOp::Gt
                                     : BinOp::Ge;
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{op, std::move(e), parse_shift()});
        }
        return e;
    }
    ExprPtr parse_shift() {
        ExprPtr e = parse_additive();
        while (at(Tok::Shl) || at(Tok::Shr)) {
            BinOp op = at(Tok::Shl) ? BinOp::Shl : BinOp::Shr;
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{op, std::move(e), parse_additive()});
        }
        return e;
    }
    ExprPtr parse_additive() {
        ExprPtr e = parse_multiplicative();
        while (at(Tok::Plus) || at(Tok::Minus) || at(Tok::PlusPlus)) {
            BinOp op = at(Tok::Plus)        ? BinOp::Add
                       : at(Tok::PlusPlus) ? BinOp::Concat
                                            : BinOp::Sub;
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{op, std::move(e), parse_multiplicative()});
        }
        return e;
    }
    ExprPtr parse_multiplicative() {
        ExprPtr e = parse_unary();
        while (at(Tok::Star)) {
            SourceLoc loc = advance().loc;
            e = make_expr(loc, BinaryExpr{BinOp::Mul, std::move(e), parse_unary()});
        }
        return e;
    }
    ExprPtr parse_unary() {
        SourceLoc loc = peek().loc;
        if (at(Tok::Tilde)) { advance(); return make_expr(loc, UnaryExpr{UnOp::BitNot, parse_unary()}); }
        if (at(Tok::Bang)) { advance(); return make_expr(loc, UnaryExpr{UnOp::BoolNot, parse_unary()}); }
        if (at(Tok::Minus)) { advance(); return make_expr(loc, UnaryExpr{UnOp::Neg, parse_unary()}); }
        // Cast: '(' ('bit'|'bool') ... ')' unary
        if (at(Tok::LParen) && (peek(1).kind == Tok::Ident &&
                                (peek(1).text == "bit" || peek(1).text == "bool"))) {
            advance();  // '('
            TypeRef target = parse_type();
            expect(Tok::RParen, "')'");
            return make_expr(loc, CastExpr{target, parse_unary()});
        }
        return parse_postfix();
    }
    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (at(Tok::LBracket)) {
            SourceLoc loc = advance().loc;
            Token hi = expect(Tok::Number, "slice upper bound");
            expect(Tok::Colon, "':'");
            Token lo = expect(Tok::Number, "slice lower bound");
            expect(Tok::RBracket, "']'");
            e = make_expr(loc, SliceExpr{std::move(e), static_cast<int>(hi.value),
                                         static_cast<int>(lo.value)});
        }
        return e;
    }
    ExprPtr parse_primary() {
        SourceLoc loc = peek().loc;
        if (at(Tok::Number)) {
            Token t = advance();
            return make_expr(loc, IntLit{t.value, std::nullopt});
        }
        if (at(Tok::WidthLit)) {
            Token t = advance();
            if (t.width < 1 || t.width > 64)
                fail(loc, "literal width must be in 1..64");
            uint64_t mask = t.width == 64 ? ~0ull : ((1ull << t.width) - 1);
            return make_expr(loc, IntLit{t.value & mask, t.width});
        }
        if (at_keyword("true")) { advance(); return make_expr(loc, BoolLit{true}); }
        if (at_keyword("false")) { advance(); return make_expr(loc, BoolLit{false}); }
        if (at(Tok::LParen)) {
            advance();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::Ident)) {
            LValue lv = parse_lvalue_path();
            // header.isValid()
            if (at(Tok::LParen) && lv.path.size() >= 2 && lv.path.back() == "isValid") {
                advance();
                expect(Tok::RParen, "')'");
                lv.path.pop_back();
                return make_expr(loc, IsValidExpr{std::move(lv)});
            }
            return make_expr(loc, LValueExpr{std::move(lv)});
        }
        fail(loc, "expected expression");
    }
};

}  // namespace

ParseResult parse_program(std::string_view text) {
    ParseResult result;
    std::vector<Token> toks = lex(text, result.diags);
    if (has_error(result.diags)) return result;
    Parser parser(std::move(toks), result.diags);
    try {
        result.program = parser.parse();
    } catch (const ParseAbort&) {
        result.program.reset();
    }
    return result;
}

}  // namespace minip4
