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

#include "minip4/generator.h"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "minip4/printer.h"

namespace minip4::gen {

using namespace ast;

namespace {

// Bounded draws go through raw 64-bit output only, keeping programs
// byte-identical across standard library implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t u64() { return engine_(); }
    uint64_t below(uint64_t n) { return n == 0 ? 0 : u64() % n; }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }
    bool chance(double p) {
        return static_cast<double>(u64() >> 11) * (1.0 / 9007199254740992.0) < p;
    }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    // weighted pick over (name, weight) with fixed-point weights
    size_t pick_weighted(const std::vector<std::pair<std::string, double>>& options) {
        uint64_t total = 0;
        std::vector<uint64_t> fixed(options.size());
        for (size_t i = 0; i < options.size(); ++i) {
            fixed[i] = static_cast<uint64_t>(options[i].second * 1024.0);
            total += fixed[i];
        }
        if (total == 0) return options.size();
        uint64_t roll = below(total);
        for (size_t i = 0; i < options.size(); ++i) {
            if (roll < fixed[i]) return i;
            roll -= fixed[i];
        }
        return options.size() - 1;
    }

  private:
    std::mt19937_64 engine_;
};

struct ScopeVar {
    LValue lvalue;     // no slice
    int width = 0;
    bool writable = false;
    bool is_bool = false;
    std::optional<std::string> header;  // owning header path
};

struct TriggerAction {
    std::string name;
    int param_width = 0;
};

class Generator {
  public:
    Generator(const GenConfig& cfg, uint64_t seed) : cfg_(cfg), rng_(seed) {}

    Program generate() {
        Program p;
        build_types(p);
        ControlDecl control;
        control.name = "ig";
        build_params(control);
        build_locals(control);
        int budget = rng_.range(3, std::max(3, cfg_.max_statements_per_block));
        control.apply = gen_block(budget, 0);
        ensure_observable_statement(control);
        p.controls.push_back(std::move(control));
        p.package = {"ig"};
        return p;
    }

  private:
    const GenConfig& cfg_;
    Rng rng_;
    std::vector<ScopeVar> vars_;      // readable/writable bit leaves in scope
    std::vector<std::string> headers_in_scope_;
    std::vector<std::string> plain_actions_;  // parameter-less, callable + table-able
    std::vector<TriggerAction> param_actions_;
    std::vector<std::pair<std::string, int>> tables_;  // name, apply cost in bits
    int input_bits_used_ = 0;
    int var_counter_ = 0;
    int exprs_generated_ = 0;

    double w(const std::string& name) const { return cfg_.weight(name); }

    int pick_width() { return rng_.pick(cfg_.width_pool); }

    int remaining_input_bits() const { return cfg_.target_input_bits - input_bits_used_; }

    // ------------------------------------------------------------- types --

    void build_types(Program& p) {
        // one or two headers plus a carrier struct; leaf widths are bounded
        // by the input-bit budget
        int reserve_for_tables = cfg_.allow_tables ? 6 : 0;
        int budget = std::max(2, cfg_.target_input_bits - reserve_for_tables);

        int n_headers = rng_.range(1, 2);
        StructDecl carrier;
        carrier.name = "Hdr";
        for (int h = 0; h < n_headers && budget > 0; ++h) {
            HeaderDecl hd;
            hd.name = h == 0 ? "Eth" : "Ipv4";
            int n_fields = rng_.range(1, 2);
            for (int f = 0; f < n_fields; ++f) {
                int width = pick_width();
                if (width > budget) width = budget;
                if (width <= 0) break;
                hd.fields.push_back({"f" + std::to_string(f), TypeRef::bit(width), {}});
                budget -= width;
            }
            if (hd.fields.empty()) break;
            carrier.fields.push_back(
                {h == 0 ? std::string("eth") : std::string("ipv4"), TypeRef::named(hd.name), {}});
            p.type_decls.push_back(hd);
        }
        while (budget > 0 && rng_.chance(0.5)) {
            int width = std::min(pick_width(), budget);
            carrier.fields.push_back({"m" + std::to_string(carrier.fields.size()),
                                      TypeRef::bit(width),
                                      {}});
            budget -= width;
        }
        if (carrier.fields.empty())
            carrier.fields.push_back({"m0", TypeRef::bit(2), {}});
        p.type_decls.push_back(carrier);

        // scope bookkeeping
        const StructDecl& c = std::get<StructDecl>(p.type_decls.back());
        for (const auto& f : c.fields) {
            if (f.type.kind == TypeRef::Kind::Bit) {
                ScopeVar v;
                v.lvalue.path = {"h", f.name};
                v.width = f.type.width;
                v.writable = true;
                vars_.push_back(v);
                input_bits_used_ += f.type.width;
            } else {
                for (const auto& td : p.type_decls) {
                    const auto* hd = std::get_if<HeaderDecl>(&td);
                    if (!hd || hd->name != f.type.name) continue;
                    headers_in_scope_.push_back("h." + f.name);
                    for (const auto& hf : hd->fields) {
                        ScopeVar v;
                        v.lvalue.path = {"h", f.name, hf.name};
                        v.width = hf.type.width;
                        v.writable = true;
                        v.header = "h." + f.name;
                        vars_.push_back(v);
                        input_bits_used_ += hf.type.width;
                    }
                }
            }
        }
    }

    void build_params(ControlDecl& control) {
        Param hp;
        hp.name = "h";
        hp.direction = Direction::InOut;
        hp.type = TypeRef::named("Hdr");
        control.params.push_back(hp);

        if (rng_.chance(0.3) && remaining_input_bits() >= 2) {
            int wd = std::min(pick_width(), remaining_input_bits());
            Param in;
            in.name = "c0";
            in.direction = Direction::In;
            in.type = TypeRef::bit(wd);
            control.params.push_back(in);
            ScopeVar v;
            v.lvalue.path = {"c0"};
            v.width = wd;
            v.writable = false;
            vars_.push_back(v);
            input_bits_used_ += wd;
        }
        if (cfg_.allow_undefined && rng_.chance(0.3)) {
            Param out;
            out.name = "o0";
            out.direction = Direction::Out;
            out.type = TypeRef::bit(pick_width());
            control.params.push_back(out);
            ScopeVar v;
            v.lvalue.path = {"o0"};
            v.width = out.type.width;
            v.writable = true;
            vars_.push_back(v);
        }
    }

    // ------------------------------------------------------------ locals --

    void build_locals(ControlDecl& control) {
        // a few control-scope variables
        int n_vars = rng_.range(0, 2);
        for (int i = 0; i < n_vars; ++i) {
            LocalVarDecl v;
            v.name = "v" + std::to_string(var_counter_++);
            int width = pick_width();
            v.type = TypeRef::bit(width);
            bool uninit = cfg_.allow_undefined && rng_.chance(0.35);
            if (!uninit) v.init = gen_expr_bit(width, 1);
            control.locals.push_back(std::move(v));
            ScopeVar sv;
            sv.lvalue.path = {"v" + std::to_string(var_counter_ - 1)};
            sv.width = width;
            sv.writable = true;
            vars_.push_back(sv);
        }

        // parameter-less actions for tables and calls
        int n_actions = rng_.range(0, 2);
        for (int i = 0; i < n_actions; ++i) {
            ActionDecl a;
            a.name = "act" + std::to_string(i);
            int stmts = rng_.range(1, 2);
            for (int s = 0; s < stmts; ++s) {
                if (auto stmt = gen_assign(1)) a.body.stmts.push_back(std::move(stmt));
            }
            if (cfg_.allow_exit && w("exit") > 0 && rng_.chance(0.10))
                a.body.stmts.push_back(make_stmt({}, ExitStmt{}));
            if (!a.body.stmts.empty()) {
                plain_actions_.push_back(a.name);
                control.locals.push_back(std::move(a));
            }
        }

        // seeded-bug trigger shapes, each behind its own weight
        if (cfg_.allow_exit && w("trigger_rap") > 0 && rng_.chance(w("trigger_rap"))) {
            const ScopeVar* target = pick_var(/*writable=*/true);
            if (target) {
                ActionDecl a;
                a.name = "a_exit";
                Param prm;
                prm.name = "val";
                prm.direction = Direction::InOut;
                prm.type = TypeRef::bit(target->width);
                a.params.push_back(prm);
                LValue val;
                val.path = {"val"};
                a.body.stmts.push_back(
                    make_stmt({}, AssignStmt{val, gen_literal(target->width)}));
                a.body.stmts.push_back(make_stmt({}, ExitStmt{}));
                control.locals.push_back(std::move(a));
                param_actions_.push_back({"a_exit", target->width});
            }
        }
        if (w("trigger_dse_action") > 0 && rng_.chance(w("trigger_dse_action"))) {
            // Disjoint-slice interplay across copy-out: the action writes one
            // part of a leaf whose other part is the inout argument.
            const ScopeVar* wide = pick_var_min_width(2, /*writable=*/true);
            if (wide) {
                int split = rng_.range(1, wide->width - 1);
                ActionDecl a;
                a.name = "a_slice";
                Param prm;
                prm.name = "lo_part";
                prm.direction = Direction::InOut;
                prm.type = TypeRef::bit(split);
                a.params.push_back(prm);
                LValue upper = wide->lvalue;
                upper.slice = {wide->width - 1, split};
                a.body.stmts.push_back(
                    make_stmt({}, AssignStmt{upper, gen_literal(wide->width - split)}));
                control.locals.push_back(std::move(a));
                param_actions_.push_back({"a_slice", -split});  // negative: slice arg width
                dse_action_target_ = *wide;
                dse_action_split_ = split;
            }
        }

        // tables
        if (cfg_.allow_tables && w("apply") > 0) {
            int n_tables = rng_.chance(0.75) ? 1 : 2;
            for (int i = 0; i < n_tables; ++i) {
                const ScopeVar* key = pick_var(/*writable=*/false);
                if (!key) break;
                TableDecl t;
                t.name = "t" + std::to_string(i);
                int key_width = key->width;
                ExprPtr key_expr = lvalue_expr(key->lvalue);
                if (key_width > 4) {
                    key_expr = make_expr({}, SliceExpr{std::move(key_expr), 3, 0});
                    key_width = 4;
                }
                t.key = std::move(key_expr);
                for (const auto& name : plain_actions_)
                    if (rng_.chance(0.8)) t.actions.push_back(name);
                t.actions.push_back(kNoActionName);
                t.default_action = kNoActionName;
                int cost = key_width + action_bits(static_cast<int>(t.actions.size()));
                tables_.push_back({t.name, cost});
                control.locals.push_back(std::move(t));
            }
        }
    }

    static int action_bits(int n_actions) {
        int bits = 1;
        while ((1 << bits) < n_actions + 1) ++bits;
        return bits;
    }

    // -------------------------------------------------------- statements --

    Block gen_block(int stmt_budget, int depth) {
        Block b;
        for (int i = 0; i < stmt_budget; ++i) {
            StmtPtr s = gen_statement(depth);
            if (s) b.stmts.push_back(std::move(s));
        }
        return b;
    }

    StmtPtr gen_statement(int depth) {
        std::vector<std::pair<std::string, double>> options;
        options.push_back({"assign", w("assign")});
        if (depth < 2) options.push_back({"if", w("if")});
        options.push_back({"decl", w("decl")});
        if (!plain_actions_.empty() || !param_actions_.empty())
            options.push_back({"call", w("call")});
        if (!tables_.empty()) options.push_back({"apply", w("apply")});
        if (cfg_.allow_exit && depth > 0) options.push_back({"exit", w("exit")});
        if (!headers_in_scope_.empty() && cfg_.allow_undefined)
            options.push_back({"setvalid", w("setvalid")});
        if (depth < 2) options.push_back({"block", w("block")});
        if (depth < 2) options.push_back({"snippet_pred", w("snippet_pred")});
        options.push_back({"snippet_dse", w("snippet_dse")});
        if (!headers_in_scope_.empty() && cfg_.allow_undefined)
            options.push_back({"snippet_cp", w("snippet_cp")});
        if (cfg_.allow_ternary && w("ternary") > 0)
            options.push_back({"snippet_seo", w("snippet_seo")});
        options.push_back({"snippet_sr", w("snippet_sr")});

        size_t choice = rng_.pick_weighted(options);
        if (choice >= options.size()) return gen_assign(depth);
        const std::string& name = options[choice].first;

        if (name == "assign") return gen_assign(depth);
        if (name == "if") return gen_if(depth);
        if (name == "decl") return gen_decl(depth);
        if (name == "call") return gen_call();
        if (name == "apply") return gen_apply();
        if (name == "exit") return make_stmt({}, ExitStmt{});
        if (name == "setvalid") {
            const std::string& h = rng_.pick(headers_in_scope_);
            LValue lv;
            std::istringstream ss(h);
            std::string part;
            while (std::getline(ss, part, '.')) lv.path.push_back(part);
            return make_stmt({}, SetValidityStmt{lv, rng_.chance(0.5)});
        }
        if (name == "block") return make_stmt({}, BlockStmt{gen_block(rng_.range(1, 3), depth + 1)});
        if (name == "snippet_pred") return gen_snippet_pred(depth);
        if (name == "snippet_dse") return gen_snippet_dse(depth);
        if (name == "snippet_cp") return gen_snippet_cp();
        if (name == "snippet_seo") return gen_snippet_seo(depth);
        if (name == "snippet_sr") return gen_snippet_sr(depth);
        return gen_assign(depth);
    }

    StmtPtr gen_assign(int depth) {
        const ScopeVar* target = pick_var(/*writable=*/true);
        if (!target) return nullptr;
        LValue lv = target->lvalue;
        int width = target->width;
        if (width > 1 && rng_.chance(w("slice_target"))) {
            int hi = rng_.range(0, width - 1);
            int lo = rng_.range(0, hi);
            lv.slice = {hi, lo};
            width = hi - lo + 1;
        }
        return make_stmt({}, AssignStmt{lv, gen_expr_bit(width, depth + 1)});
    }

    StmtPtr gen_decl(int depth) {
        int width = pick_width();
        std::string name = "v" + std::to_string(var_counter_++);
        ExprPtr init;
        if (!cfg_.allow_undefined || !rng_.chance(0.3)) init = gen_expr_bit(width, depth + 1);
        ScopeVar sv;
        sv.lvalue.path = {name};
        sv.width = width;
        sv.writable = true;
        vars_.push_back(sv);
        return make_stmt({}, VarDeclStmt{TypeRef::bit(width), name, std::move(init)});
    }

    StmtPtr gen_if(int depth) {
        IfStmt s;
        s.cond = gen_expr_bool(depth + 1);
        s.then_block = gen_block(rng_.range(1, 3), depth + 1);
        if (rng_.chance(0.5)) s.else_block = gen_block(rng_.range(1, 2), depth + 1);
        return make_stmt({}, std::move(s));
    }

    StmtPtr gen_call() {
        bool use_param = !param_actions_.empty() && (plain_actions_.empty() || rng_.chance(0.5));
        if (use_param) {
            const TriggerAction& a = rng_.pick(param_actions_);
            CallStmt call;
            call.callee = a.name;
            if (a.param_width < 0) {
                // slice argument into the wide leaf the action writes
                LValue arg = dse_action_target_.lvalue;
                arg.slice = {dse_action_split_ - 1, 0};
                ExprPtr base = lvalue_expr(dse_action_target_.lvalue);
                call.args.push_back(
                    make_expr({}, SliceExpr{std::move(base), dse_action_split_ - 1, 0}));
                (void)arg;
            } else {
                const ScopeVar* target = pick_var_width(a.param_width, /*writable=*/true);
                if (!target) return nullptr;
                call.args.push_back(lvalue_expr(target->lvalue));
            }
            return make_stmt({}, std::move(call));
        }
        if (plain_actions_.empty()) return nullptr;
        return make_stmt({}, CallStmt{rng_.pick(plain_actions_), {}});
    }

    StmtPtr gen_apply() {
        const auto& [name, cost] = rng_.pick(tables_);
        if (cost > remaining_input_bits()) return nullptr;
        input_bits_used_ += cost;
        return make_stmt({}, ApplyStmt{name});
    }

    // two disjoint slice stores into one leaf
    StmtPtr gen_snippet_dse(int depth) {
        const ScopeVar* wide = pick_var_min_width(2, /*writable=*/true);
        if (!wide) return gen_assign(depth);
        int split = rng_.range(1, wide->width - 1);
        Block b;
        LValue low = wide->lvalue;
        low.slice = {split - 1, 0};
        LValue high = wide->lvalue;
        high.slice = {wide->width - 1, split};
        b.stmts.push_back(make_stmt({}, AssignStmt{low, gen_expr_bit(split, depth + 2)}));
        b.stmts.push_back(
            make_stmt({}, AssignStmt{high, gen_expr_bit(wide->width - split, depth + 2)}));
        return make_stmt({}, BlockStmt{std::move(b)});
    }

    // write to an invalid header field, then read it somewhere observable
    StmtPtr gen_snippet_cp() {
        std::vector<const ScopeVar*> header_fields;
        for (const auto& v : vars_)
            if (v.header) header_fields.push_back(&v);
        if (header_fields.empty()) return nullptr;
        const ScopeVar* field = header_fields[rng_.below(header_fields.size())];
        const ScopeVar* sink = pick_var_width(field->width, /*writable=*/true, field);
        if (!sink) return nullptr;
        Block b;
        LValue hdr;
        std::istringstream ss(*field->header);
        std::string part;
        while (std::getline(ss, part, '.')) hdr.path.push_back(part);
        b.stmts.push_back(make_stmt({}, SetValidityStmt{hdr, false}));
        b.stmts.push_back(make_stmt({}, AssignStmt{field->lvalue, gen_literal(field->width)}));
        b.stmts.push_back(make_stmt({}, AssignStmt{sink->lvalue, lvalue_expr(field->lvalue)}));
        return make_stmt({}, BlockStmt{std::move(b)});
    }

    // ternary nested under a binary operator
    StmtPtr gen_snippet_seo(int depth) {
        const ScopeVar* target = pick_var(/*writable=*/true);
        if (!target) return nullptr;
        int width = target->width;
        ExprPtr tern = make_expr({}, TernaryExpr{gen_expr_bool(depth + 2),
                                                 gen_expr_bit(width, depth + 2),
                                                 gen_expr_bit(width, depth + 2)});
        ExprPtr rhs = make_expr(
            {}, BinaryExpr{rng_.chance(0.5) ? BinOp::Add : BinOp::BitXor, std::move(tern),
                           gen_expr_bit(width, depth + 2)});
        return make_stmt({}, AssignStmt{target->lvalue, std::move(rhs)});
    }

    // slice of a right-shift whose rewritten bound overflows the operand
    StmtPtr gen_snippet_sr(int depth) {
        const ScopeVar* src = pick_var_min_width(2, /*writable=*/false);
        if (!src) return gen_assign(depth);
        int shift = rng_.range(1, src->width - 1);
        int hi = src->width - 1;  // hi + shift always exceeds the operand
        int lo = rng_.range(0, hi);
        ExprPtr shifted = make_expr(
            {}, BinaryExpr{BinOp::Shr, lvalue_expr(src->lvalue), int_lit(shift)});
        ExprPtr sliced = make_expr({}, SliceExpr{std::move(shifted), hi, lo});
        const ScopeVar* target = pick_var_width(hi - lo + 1, /*writable=*/true);
        if (!target) return gen_assign(depth);
        return make_stmt({}, AssignStmt{target->lvalue, std::move(sliced)});
    }

    // nested ifs whose branches are assignment-only
    StmtPtr gen_snippet_pred(int depth) {
        const ScopeVar* t1 = pick_var(/*writable=*/true);
        if (!t1) return nullptr;
        IfStmt inner;
        inner.cond = gen_cmp_on_input(depth + 2);
        inner.then_block.stmts.push_back(
            make_stmt({}, AssignStmt{t1->lvalue, gen_literal(t1->width)}));
        IfStmt outer;
        outer.cond = gen_cmp_on_input(depth + 2);
        outer.then_block.stmts.push_back(make_stmt({}, std::move(inner)));
        return make_stmt({}, std::move(outer));
    }

    // -------------------------------------------------------- expressions --

    ExprPtr gen_literal(int width) {
        uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
        uint64_t v = rng_.u64() & mask;
        if (rng_.chance(0.2)) return int_lit(v & 0xff);  // untyped
        return int_lit(v, width);
    }

    const ScopeVar* pick_var(bool writable) {
        std::vector<const ScopeVar*> c;
        for (const auto& v : vars_)
            if (!v.is_bool && (!writable || v.writable)) c.push_back(&v);
        if (c.empty()) return nullptr;
        return c[rng_.below(c.size())];
    }
    const ScopeVar* pick_var_width(int width, bool writable, const ScopeVar* exclude = nullptr) {
        std::vector<const ScopeVar*> c;
        for (const auto& v : vars_)
            if (!v.is_bool && v.width == width && (!writable || v.writable) && &v != exclude)
                c.push_back(&v);
        if (c.empty()) return nullptr;
        return c[rng_.below(c.size())];
    }
    const ScopeVar* pick_var_min_width(int min_width, bool writable) {
        std::vector<const ScopeVar*> c;
        for (const auto& v : vars_)
            if (!v.is_bool && v.width >= min_width && (!writable || v.writable)) c.push_back(&v);
        if (c.empty()) return nullptr;
        return c[rng_.below(c.size())];
    }

    ExprPtr gen_expr_bit(int width, int depth) {
        ++exprs_generated_;
        if (depth >= cfg_.max_expr_depth) return gen_terminal_bit(width);
        std::vector<std::pair<std::string, double>> options = {
            {"lit", w("lit")},       {"lvalue", w("lvalue")}, {"binary", w("binary")},
            {"unary", w("unary")},   {"shift", w("shift")},
        };
        if (width >= 2) options.push_back({"concat", w("concat")});
        options.push_back({"slice", w("slice")});
        options.push_back({"cast", w("cast")});
        if (cfg_.allow_ternary) options.push_back({"ternary", w("ternary")});

        size_t choice = rng_.pick_weighted(options);
        if (choice >= options.size()) return gen_terminal_bit(width);
        const std::string& name = options[choice].first;
        if (name == "lit") return gen_literal(width);
        if (name == "lvalue") return gen_terminal_bit(width);
        if (name == "binary") {
            static const BinOp ops[] = {BinOp::Add,    BinOp::Sub,   BinOp::Mul,
                                        BinOp::BitAnd, BinOp::BitOr, BinOp::BitXor};
            BinOp op = ops[rng_.below(6)];
            return make_expr({}, BinaryExpr{op, gen_expr_bit(width, depth + 1),
                                            gen_expr_bit(width, depth + 1)});
        }
        if (name == "unary") {
            UnOp op = rng_.chance(0.5) ? UnOp::BitNot : UnOp::Neg;
            return make_expr({}, UnaryExpr{op, gen_expr_bit(width, depth + 1)});
        }
        if (name == "shift") {
            BinOp op = rng_.chance(0.5) ? BinOp::Shl : BinOp::Shr;
            ExprPtr amount = rng_.chance(0.7)
                                 ? int_lit(rng_.range(0, width))
                                 : gen_terminal_bit(pick_width());
            return make_expr({}, BinaryExpr{op, gen_expr_bit(width, depth + 1),
                                            std::move(amount)});
        }
        if (name == "concat") {
            int left = rng_.range(1, width - 1);
            return make_expr({}, BinaryExpr{BinOp::Concat, gen_expr_bit(left, depth + 1),
                                            gen_expr_bit(width - left, depth + 1)});
        }
        if (name == "slice") {
            int wider = width + rng_.range(1, 4);
            if (wider > 64) wider = 64;
            int lo = rng_.range(0, wider - width);
            return make_expr(
                {}, SliceExpr{gen_expr_bit(wider, depth + 1), lo + width - 1, lo});
        }
        if (name == "cast") {
            int from = pick_width();
            return make_expr({}, CastExpr{TypeRef::bit(width), gen_expr_bit(from, depth + 1)});
        }
        if (name == "ternary") {
            return make_expr({}, TernaryExpr{gen_expr_bool(depth + 1),
                                             gen_expr_bit(width, depth + 1),
                                             gen_expr_bit(width, depth + 1)});
        }
        return gen_terminal_bit(width);
    }

    ExprPtr gen_terminal_bit(int width) {
        // prefer a matching lvalue; otherwise adapt one; otherwise a literal
        if (const ScopeVar* v = pick_var_width(width, false); v && rng_.chance(0.75))
            return lvalue_expr(v->lvalue);
        if (const ScopeVar* v = pick_var_min_width(width + 1, false); v && rng_.chance(0.5)) {
            int lo = rng_.range(0, v->width - width);
            return make_expr({}, SliceExpr{lvalue_expr(v->lvalue), lo + width - 1, lo});
        }
        return gen_literal(width);
    }

    ExprPtr gen_expr_bool(int depth) {
        if (depth >= cfg_.max_expr_depth) return gen_cmp_on_input(depth);
        std::vector<std::pair<std::string, double>> options = {
            {"cmp", w("cmp")},
            {"boolop", w("boolop")},
            {"boollit", w("boollit")},
        };
        if (!headers_in_scope_.empty()) options.push_back({"isvalid", w("isvalid")});
        size_t choice = rng_.pick_weighted(options);
        if (choice >= options.size()) return gen_cmp_on_input(depth);
        const std::string& name = options[choice].first;
        if (name == "cmp") {
            static const BinOp ops[] = {BinOp::Eq, BinOp::Ne, BinOp::Lt,
                                        BinOp::Le, BinOp::Gt, BinOp::Ge};
            int width = pick_width();
            return make_expr({}, BinaryExpr{ops[rng_.below(6)], gen_expr_bit(width, depth + 1),
                                            gen_expr_bit(width, depth + 1)});
        }
        if (name == "boolop") {
            if (rng_.chance(0.25))
                return make_expr({}, UnaryExpr{UnOp::BoolNot, gen_expr_bool(depth + 1)});
            BinOp op = rng_.chance(0.5) ? BinOp::BoolAnd : BinOp::BoolOr;
            return make_expr(
                {}, BinaryExpr{op, gen_expr_bool(depth + 1), gen_expr_bool(depth + 1)});
        }
        if (name == "boollit") return bool_lit(rng_.chance(0.5));
        // isvalid
        const std::string& h = rng_.pick(headers_in_scope_);
        LValue lv;
        std::istringstream ss(h);
        std::string part;
        while (std::getline(ss, part, '.')) lv.path.push_back(part);
        return make_expr({}, IsValidExpr{std::move(lv)});
    }

    // comparison against an input leaf: keeps branch conditions controllable
    ExprPtr gen_cmp_on_input(int /*depth*/) {
        const ScopeVar* v = pick_var(/*writable=*/false);
        if (!v) return bool_lit(rng_.chance(0.5));
        BinOp op = rng_.chance(0.5) ? BinOp::Eq : BinOp::Ne;
        return make_expr(
            {}, BinaryExpr{op, lvalue_expr(v->lvalue), gen_literal(v->width)});
    }

    // The whole point is observing pipeline output; make sure at least one
    // header field is written somewhere.
    void ensure_observable_statement(ControlDecl& control) {
        bool writes = false;
        std::function<void(const Block&)> scan = [&](const Block& b) {
            for (const auto& sp : b.stmts) {
                if (std::holds_alternative<AssignStmt>(sp->node)) writes = true;
                if (const auto* f = std::get_if<IfStmt>(&sp->node)) {
                    scan(f->then_block);
                    if (f->else_block) scan(*f->else_block);
                }
                if (const auto* blk = std::get_if<BlockStmt>(&sp->node)) scan(blk->body);
            }
        };
        scan(control.apply);
        if (!writes) {
            if (auto s = gen_assign(0)) control.apply.stmts.push_back(std::move(s));
        }
    }

    ScopeVar dse_action_target_;
    int dse_action_split_ = 0;
};

}  // namespace

double GenConfig::weight(const std::string& production) const {
    auto it = weights.find(production);
    if (it != weights.end()) return it->second;
    const auto& defs = default_weights();
    auto d = defs.find(production);
    return d == defs.end() ? 0.0 : d->second;
}

const std::map<std::string, double>& GenConfig::default_weights() {
    static const std::map<std::string, double> defaults = {
        // statements
        {"assign", 5.0},
        {"if", 2.0},
        {"decl", 1.5},
        {"call", 1.5},
        {"apply", 1.5},
        {"exit", 0.4},
        {"setvalid", 0.8},
        {"block", 0.5},
        {"slice_target", 0.25},
        // trigger shapes
        {"snippet_seo", 0.8},
        {"snippet_sr", 0.5},
        {"snippet_dse", 0.7},
        {"snippet_cp", 0.7},
        {"snippet_pred", 0.9},
        {"trigger_rap", 0.5},
        {"trigger_dse_action", 0.4},
        // expressions
        {"lit", 2.0},
        {"lvalue", 3.0},
        {"binary", 2.0},
        {"unary", 0.7},
        {"shift", 0.8},
        {"concat", 0.6},
        {"slice", 0.8},
        {"cast", 0.6},
        {"ternary", 0.8},
        {"cmp", 3.0},
        {"boolop", 1.0},
        {"boollit", 0.3},
        {"isvalid", 0.6},
    };
    return defaults;
}

GenConfig GenConfig::from_text(const std::string& text, Diagnostics& diags) {
    GenConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) {
            diags.push_back({{lineno, 1}, Severity::Error, "ConfigError", "expected key=value"});
            continue;
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "max_statements_per_block") cfg.max_statements_per_block = std::stoi(value);
            else if (key == "max_expr_depth") cfg.max_expr_depth = std::stoi(value);
            else if (key == "max_controls") cfg.max_controls = std::stoi(value);
            else if (key == "allow_undefined") cfg.allow_undefined = value == "true";
            else if (key == "allow_tables") cfg.allow_tables = value == "true";
            else if (key == "allow_exit") cfg.allow_exit = value == "true";
            else if (key == "allow_ternary") cfg.allow_ternary = value == "true";
            else if (key == "target_input_bits") cfg.target_input_bits = std::stoi(value);
            else if (key == "max_paths") cfg.max_paths = std::stoll(value);
            else if (key == "width_pool") {
                cfg.width_pool.clear();
                std::istringstream ws(value);
                std::string tok;
                while (std::getline(ws, tok, ',')) cfg.width_pool.push_back(std::stoi(tok));
            } else if (key.rfind("weight.", 0) == 0) {
                cfg.weights[key.substr(7)] = std::stod(value);
            } else {
                diags.push_back(
                    {{lineno, 1}, Severity::Error, "ConfigError", "unknown key '" + key + "'"});
            }
        } catch (const std::exception&) {
            diags.push_back(
                {{lineno, 1}, Severity::Error, "ConfigError", "bad value for '" + key + "'"});
        }
    }
    if (cfg.width_pool.empty()) cfg.width_pool = {1, 2, 4, 8};
    return cfg;
}

std::string GenConfig::to_text() const {
    std::ostringstream out;
    out << "seed=" << seed << "\n";
    out << "max_statements_per_block=" << max_statements_per_block << "\n";
    out << "max_expr_depth=" << max_expr_depth << "\n";
    out << "max_controls=" << max_controls << "\n";
    out << "allow_undefined=" << (allow_undefined ? "true" : "false") << "\n";
    out << "allow_tables=" << (allow_tables ? "true" : "false") << "\n";
    out << "allow_exit=" << (allow_exit ? "true" : "false") << "\n";
    out << "allow_ternary=" << (allow_ternary ? "true" : "false") << "\n";
    out << "target_input_bits=" << target_input_bits << "\n";
    out << "max_paths=" << max_paths << "\n";
    out << "width_pool=";
    for (size_t i = 0; i < width_pool.size(); ++i) out << (i ? "," : "") << width_pool[i];
    out << "\n";
    for (const auto& [k, v] : weights) out << "weight." << k << "=" << v << "\n";
    return out.str();
}

TypedProgram generate_program(const GenConfig& cfg) {
    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        uint64_t seed = cfg.seed * 0x9e3779b97f4a7c15ull + static_cast<uint64_t>(attempt);
        Generator g(cfg, seed ^ cfg.seed);
        Program p = g.generate();
        TypecheckResult tr = typecheck(std::move(p));
        MINIP4_CHECK(tr.ok(), "generated program failed typechecking: " +
                                  (tr.diags.empty() ? std::string("?")
                                                    : tr.diags.front().message));
        if (estimate_paths(*tr.typed) <= cfg.max_paths) return std::move(*tr.typed);
    }
    throw GenerationBudgetExhausted("no program within the path budget after 64 attempts (seed " +
                                    std::to_string(cfg.seed) + ")");
}

// --------------------------------------------------------- estimate_paths --

namespace {

constexpr long long kPathCap = 1ll << 40;

long long sat_mul(long long a, long long b) {
    if (a > kPathCap / std::max(1ll, b)) return kPathCap;
    return a * b;
}

long long ternaries_in(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> long long {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TernaryExpr>)
                return 1 + ternaries_in(*n.cond) + ternaries_in(*n.then_arm) +
                       ternaries_in(*n.else_arm);
            else if constexpr (std::is_same_v<T, BinaryExpr>)
                return ternaries_in(*n.lhs) + ternaries_in(*n.rhs);
            else if constexpr (std::is_same_v<T, UnaryExpr>)
                return ternaries_in(*n.arg);
            else if constexpr (std::is_same_v<T, CastExpr>)
                return ternaries_in(*n.arg);
            else if constexpr (std::is_same_v<T, SliceExpr>)
                return ternaries_in(*n.base);
            else
                return 0;
        },
        e.node);
}

long long pow2_capped(long long n) {
    if (n >= 40) return kPathCap;
    return 1ll << n;
}

struct PathCounter {
    const ast::ControlDecl& control;
    std::map<std::string, const ActionDecl*> actions;
    std::map<std::string, const TableDecl*> tables;

    long long block_paths(const Block& b) const {
        long long total = 1;
        for (const auto& sp : b.stmts) total = sat_mul(total, stmt_paths(*sp));
        return total;
    }

    long long stmt_paths(const Stmt& s) const {
        return std::visit(
            [&](const auto& n) -> long long {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    return pow2_capped(ternaries_in(*n.value));
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    long long cond = pow2_capped(ternaries_in(*n.cond));
                    long long then_p = block_paths(n.then_block);
                    long long else_p = n.else_block ? block_paths(*n.else_block) : 1;
                    return sat_mul(cond, then_p + else_p);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    return block_paths(n.body);
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    return n.init ? pow2_capped(ternaries_in(*n.init)) : 1;
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    long long args = 1;
                    for (const auto& a : n.args)
                        args = sat_mul(args, pow2_capped(ternaries_in(*a)));
                    auto it = actions.find(n.callee);
                    if (it != actions.end())
                        args = sat_mul(args, block_paths(it->second->body));
                    return args;
                } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                    auto it = tables.find(n.table);
                    if (it == tables.end()) return 1;
                    const TableDecl& t = *it->second;
                    long long total = 0;
                    for (const auto& name : t.actions) total += action_paths(name);
                    // Matched-default and no-match arms both run the default
                    // action; when the default is also the last listed action
                    // the trailing selection arm folds away, leaving one
                    // default arm.
                    long long dflt = action_paths(t.default_action);
                    bool merged = !t.actions.empty() && t.actions.back() == t.default_action;
                    total += merged ? dflt : 2 * dflt;
                    return std::max(1ll, total);
                } else {
                    return 1;
                }
            },
            s.node);
    }

    long long action_paths(const std::string& name) const {
        if (name == kNoActionName) return 1;
        auto it = actions.find(name);
        return it == actions.end() ? 1 : block_paths(it->second->body);
    }
};

}  // namespace

long long estimate_paths(const TypedProgram& p) {
    long long total = 1;
    for (const auto& name : p.program.pipeline()) {
        const ControlDecl* c = p.program.find_control(name);
        if (!c) continue;
        PathCounter counter{*c, {}, {}};
        for (const auto& local : c->locals) {
            if (const auto* a = std::get_if<ActionDecl>(&local)) counter.actions[a->name] = a;
            if (const auto* t = std::get_if<TableDecl>(&local)) counter.tables[t->name] = t;
        }
        long long block = counter.block_paths(c->apply);
        for (const auto& local : c->locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local))
                if (v->init) block = sat_mul(block, pow2_capped(ternaries_in(*v->init)));
        }
        total = sat_mul(total, block);
    }
    return total;
}

}  // namespace minip4::gen
