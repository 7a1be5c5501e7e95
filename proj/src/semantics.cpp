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

#include "minip4/semantics.h"

#include <algorithm>
#include <functional>

namespace minip4::sem {

using namespace ast;

namespace {

int bits_for_actions(int n_actions) {
    int bits = 1;
    while ((1 << bits) < n_actions + 1) ++bits;
    return bits;
}

struct State {
    // Ordered maps: merge order and output assembly must be deterministic.
    std::map<std::string, TermId> env;       // leaf path -> term
    std::map<std::string, TermId> validity;  // header path -> bool term
    TermId exited = kNoTerm;
};

class Interpreter {
  public:
    Interpreter(const TypedProgram& tp, const ControlDecl& control, TermArena& arena)
        : tp_(tp), control_(control), arena_(arena) {}

    BlockSemantics run() {
        BlockSemantics out;
        out.control = control_.name;
        st_.exited = arena_.bool_const(false);

        // Control parameters become inputs/outputs by direction.
        for (const auto& prm : control_.params) {
            SemType t = tp_.resolve_type(prm.type);
            auto leaves = flatten_type(tp_, prm.name, t);
            auto headers = headers_in_type(tp_, prm.name, t);
            if (prm.direction == Direction::Out) {
                // Uninitialized on entry: tainted fresh values, invalid headers.
                for (const auto& leaf : leaves)
                    st_.env[leaf.path] = fresh_undef(leaf.width);
                for (const auto& h : headers) st_.validity[h] = arena_.bool_const(false);
            } else {
                for (const auto& leaf : leaves) {
                    TermId v = arena_.free_var(leaf.path, leaf.width, /*tainted=*/false);
                    st_.env[leaf.path] = v;
                    out.inputs.push_back({leaf.path, leaf.width, v});
                }
                // Input headers arrive valid.
                for (const auto& h : headers) st_.validity[h] = arena_.bool_const(true);
            }
        }

        // Control-scope locals and actions/tables.
        for (const auto& local : control_.locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
                declare_var(v->type, v->name, v->init.get());
            } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
                actions_[a->name] = a;
            } else {
                const auto& t = std::get<TableDecl>(local);
                tables_[t.name] = &t;
            }
        }

        interpret_block_stmts(control_.apply, st_);

        // Copy-out at block end is unconditional; the env only ever received
        // pre-exit writes.
        for (const auto& prm : control_.params) {
            if (prm.direction == Direction::In) continue;
            SemType t = tp_.resolve_type(prm.type);
            for (const auto& h : headers_in_type(tp_, prm.name, t)) {
                OutputHeader oh;
                oh.path = h;
                oh.validity = st_.validity.at(h);
                oh.validity_tainted = arena_.taint_bits(oh.validity) != 0;
                header_index_[h] = static_cast<int>(out.headers.size());
                out.headers.push_back(oh);
            }
            for (const auto& leaf : flatten_type(tp_, prm.name, t)) {
                OutputField f;
                f.path = leaf.path;
                f.width = leaf.width;
                f.term = st_.env.at(leaf.path);
                f.taint_mask = arena_.taint_bits(f.term);
                if (leaf.owner_header)
                    f.header_index = header_index_.at(*leaf.owner_header);
                out.outputs.push_back(std::move(f));
            }
        }
        out.inputs.insert(out.inputs.end(), table_inputs_.begin(), table_inputs_.end());
        out.sites = std::move(sites_);
        out.exited = st_.exited;
        return out;
    }

  private:
    const TypedProgram& tp_;
    const ControlDecl& control_;
    TermArena& arena_;
    State st_;
    std::map<std::string, const ActionDecl*> actions_;
    std::map<std::string, const TableDecl*> tables_;
    std::map<std::string, int> apply_counts_;
    std::map<std::string, int> header_index_;
    std::vector<InputVar> table_inputs_;
    std::vector<TableSite> sites_;
    int undef_counter_ = 0;
    int call_counter_ = 0;
    // Active action-parameter renaming (param name -> env key).
    std::map<std::string, std::string> frame_;

    TermId fresh_undef(int width) {
        return arena_.free_var("_undef" + std::to_string(undef_counter_++), width,
                               /*tainted=*/true);
    }

    std::string env_key(const std::string& leaf_path) const {
        if (frame_.empty()) return leaf_path;
        size_t dot = leaf_path.find('.');
        std::string head = dot == std::string::npos ? leaf_path : leaf_path.substr(0, dot);
        auto it = frame_.find(head);
        if (it == frame_.end()) return leaf_path;
        return dot == std::string::npos ? it->second : it->second + leaf_path.substr(dot);
    }

    void declare_var(const TypeRef& type, const std::string& name, const Expr* init) {
        if (type.kind == TypeRef::Kind::Bool) {
            st_.env[name] = init ? eval(*init, st_) : fresh_bool_undef();
        } else {
            int w = type.width;
            st_.env[name] = init ? eval(*init, st_) : fresh_undef(w);
        }
    }

    TermId fresh_bool_undef() {
        return arena_.free_bool_var("_undef" + std::to_string(undef_counter_++),
                                    /*tainted=*/true);
    }

    // ------------------------------------------------------------ state --

    static State clone_state(const State& s) { return s; }

    void merge_into(TermId cond, State& then_st, State& else_st, State& out) {
        State merged;
        merged.exited = arena_.ite(cond, then_st.exited, else_st.exited);
        for (const auto& [k, tv] : then_st.env) {
            auto it = else_st.env.find(k);
            merged.env[k] = it == else_st.env.end() ? tv : arena_.ite(cond, tv, it->second);
        }
        for (const auto& [k, ev] : else_st.env) {
            if (!merged.env.count(k)) merged.env[k] = ev;
        }
        for (const auto& [k, tv] : then_st.validity) {
            auto it = else_st.validity.find(k);
            merged.validity[k] =
                it == else_st.validity.end() ? tv : arena_.ite(cond, tv, it->second);
        }
        for (const auto& [k, ev] : else_st.validity) {
            if (!merged.validity.count(k)) merged.validity[k] = ev;
        }
        out = std::move(merged);
    }

    // Writes `value` into the given range of the leaf, guarded by `skip_if`
    // (normally the state's exited flag).
    void write_leaf(State& s, const std::string& key, int leaf_width, int hi, int lo,
                    TermId value, TermId skip_if) {
        auto it = s.env.find(key);
        MINIP4_CHECK(it != s.env.end(), "write to unknown leaf " + key);
        TermId old = it->second;
        TermId merged = value;
        const bool is_bool = arena_.node(old).is_bool;
        if (!is_bool && !(lo == 0 && hi == leaf_width - 1)) {
            // splice the range into the old value
            TermId parts = value;
            if (hi < leaf_width - 1)
                parts = arena_.concat(arena_.extract(leaf_width - 1, hi + 1, old), parts);
            if (lo > 0) parts = arena_.concat(parts, arena_.extract(lo - 1, 0, old));
            merged = parts;
        }
        it->second = arena_.ite(skip_if, old, merged);
    }

    TermId read_leaf(State& s, const ResolvedLValue& r) {
        std::string key = env_key(r.leaf_path);
        auto it = s.env.find(key);
        MINIP4_CHECK(it != s.env.end(), "read of unknown leaf " + key);
        TermId stored = it->second;
        if (arena_.node(stored).is_bool) return stored;
        TermId value = arena_.extract(r.hi, r.lo, stored);
        if (r.owning_header) {
            TermId v = st_valid(s, *r.owning_header);
            const TermNode& vn = arena_.node(v);
            if (vn.kind == TermKind::BoolConst) {
                if (vn.value) return value;
                return fresh_undef(r.access_width());
            }
            // Possibly invalid: reading yields an arbitrary value on the
            // invalid side.
            return arena_.ite(v, value, fresh_undef(r.access_width()));
        }
        return value;
    }

    TermId st_valid(State& s, const std::string& header_path) {
        auto it = s.validity.find(header_path);
        MINIP4_CHECK(it != s.validity.end(), "unknown header " + header_path);
        return it->second;
    }

    // ------------------------------------------------------- statements --

    void interpret_block_stmts(const Block& b, State& s) {
        for (const auto& sp : b.stmts) interpret_stmt(*sp, s);
    }

    void interpret_stmt(const Stmt& stmt, State& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    const ResolvedLValue* r = tp_.resolved(n.target);
                    MINIP4_CHECK(r, "unresolved assignment target");
                    TermId rhs = eval(*n.value, s);
                    int leaf_w = r->type.is_bit() ? r->type.width : 0;
                    write_leaf(s, env_key(r->leaf_path), leaf_w, r->hi, r->lo, rhs, s.exited);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    TermId cond = eval(*n.cond, s);
                    const TermNode& cn = arena_.node(cond);
                    if (cn.kind == TermKind::BoolConst) {
                        if (cn.value) {
                            interpret_block_stmts(n.then_block, s);
                        } else if (n.else_block) {
                            interpret_block_stmts(*n.else_block, s);
                        }
                        return;
                    }
                    State then_st = clone_state(s);
                    State else_st = clone_state(s);
                    interpret_block_stmts(n.then_block, then_st);
                    if (n.else_block) interpret_block_stmts(*n.else_block, else_st);
                    merge_into(cond, then_st, else_st, s);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    interpret_block_stmts(n.body, s);
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    // Block-scoped declarations share the control-wide
                    // namespace (typechecker enforces uniqueness). The value
                    // only flows into outputs through exited-guarded writes,
                    // so the initializer needs no guard of its own.
                    if (n.type.kind == TypeRef::Kind::Bool) {
                        s.env[n.name] = n.init ? eval(*n.init, s) : fresh_bool_undef();
                    } else {
                        s.env[n.name] = n.init ? eval(*n.init, s) : fresh_undef(n.type.width);
                    }
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    interpret_call(n, s);
                } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                    interpret_apply(n, s);
                } else if constexpr (std::is_same_v<T, ExitStmt>) {
                    s.exited = arena_.bool_const(true);
                } else {  // SetValidityStmt
                    const ResolvedLValue* r = tp_.resolved(n.header);
                    MINIP4_CHECK(r && r->type.kind == SemType::Kind::Header,
                                 "setValid target is not a header");
                    const std::string& hpath = r->leaf_path;
                    TermId old_v = st_valid(s, hpath);
                    if (n.make_valid) {
                        // Fields of a previously invalid header become
                        // undefined when it turns valid.
                        for (const auto& f : r->type.header->fields) {
                            std::string leaf = hpath + "." + f.name;
                            TermId old_f = s.env.at(leaf);
                            TermId fresh = fresh_undef(f.type.width);
                            TermId revalidated = arena_.ite(old_v, old_f, fresh);
                            s.env[leaf] = arena_.ite(s.exited, old_f, revalidated);
                        }
                        s.validity[hpath] =
                            arena_.ite(s.exited, old_v, arena_.bool_const(true));
                    } else {
                        s.validity[hpath] =
                            arena_.ite(s.exited, old_v, arena_.bool_const(false));
                    }
                }
            },
            stmt.node);
    }

    void interpret_call(const CallStmt& call, State& s) {
        if (call.callee == kNoActionName) return;
        auto it = actions_.find(call.callee);
        MINIP4_CHECK(it != actions_.end(), "call of unknown action " + call.callee);
        const ActionDecl& action = *it->second;
        TermId exited_at_entry = s.exited;
        int call_idx = call_counter_++;

        // copy-in, left to right
        std::map<std::string, std::string> frame;
        for (size_t i = 0; i < action.params.size(); ++i) {
            const Param& prm = action.params[i];
            std::string key = "_call" + std::to_string(call_idx) + "." + prm.name;
            frame[prm.name] = key;
            if (prm.direction == Direction::Out) {
                s.env[key] = fresh_undef(prm.type.width);
            } else {
                s.env[key] = eval(*call.args[i], s);
            }
        }

        auto saved_frame = frame_;
        frame_ = std::move(frame);
        interpret_block_stmts(action.body, s);
        frame_ = std::move(saved_frame);

        // copy-out, left to right; runs even if the body exited, but not if
        // the call itself sat on an already-exited path.
        for (size_t i = 0; i < action.params.size(); ++i) {
            const Param& prm = action.params[i];
            if (prm.direction == Direction::In) continue;
            std::string key = "_call" + std::to_string(call_idx) + "." + prm.name;
            auto r = resolve_arg_lvalue(*call.args[i]);
            MINIP4_CHECK(r.has_value(), "inout argument is not a resolved lvalue");
            write_leaf(s, env_key(r->leaf_path), r->type.width, r->hi, r->lo, s.env.at(key),
                       exited_at_entry);
        }
    }

    std::optional<ResolvedLValue> resolve_arg_lvalue(const Expr& arg) {
        if (const auto* lve = std::get_if<LValueExpr>(&arg.node)) {
            const ResolvedLValue* r = tp_.resolved(lve->lvalue);
            return r ? std::optional(*r) : std::nullopt;
        }
        if (const auto* sl = std::get_if<SliceExpr>(&arg.node)) {
            if (const auto* base = std::get_if<LValueExpr>(&sl->base->node)) {
                const ResolvedLValue* rb = tp_.resolved(base->lvalue);
                if (!rb) return std::nullopt;
                // Narrow to the slice (range-checked by the typechecker).
                ResolvedLValue out = *rb;
                out.hi = sl->hi;
                out.lo = sl->lo;
                return out;
            }
        }
        return std::nullopt;
    }

    void interpret_apply(const ApplyStmt& apply, State& s) {
        auto it = tables_.find(apply.table);
        MINIP4_CHECK(it != tables_.end(), "apply of unknown table " + apply.table);
        const TableDecl& table = *it->second;
        int site = apply_counts_[apply.table]++;

        TermId key_expr = eval(*table.key, s);
        int key_width = arena_.node(key_expr).width;
        std::string suffix = "_" + std::to_string(site);
        TermId key_var =
            arena_.free_var(table.name + "_table_key" + suffix, key_width, /*tainted=*/false);
        int n_actions = static_cast<int>(table.actions.size());
        int av_width = bits_for_actions(n_actions);
        TermId action_var =
            arena_.free_var(table.name + "_action" + suffix, av_width, /*tainted=*/false);
        table_inputs_.push_back(
            {arena_.var_name(arena_.node(key_var).name), key_width, key_var});
        table_inputs_.push_back(
            {arena_.var_name(arena_.node(action_var).name), av_width, action_var});

        TableSite ts;
        ts.table = table.name;
        ts.site = site;
        ts.key_var = key_var;
        ts.action_var = action_var;
        ts.key_width = key_width;
        ts.action_var_width = av_width;
        ts.action_names = table.actions;
        ts.default_action = table.default_action;
        sites_.push_back(ts);

        TermId match = arena_.binary(TermOp::Eq, key_expr, key_var);

        // default action state
        State default_st = clone_state(s);
        run_action_body(table.default_action, default_st);

        // matched: nested selection over action ids, default at the bottom
        State matched = clone_state(default_st);
        for (int i = n_actions; i >= 1; --i) {
            State act_st = clone_state(s);
            run_action_body(table.actions[i - 1], act_st);
            TermId cond = arena_.binary(
                TermOp::Eq, action_var,
                arena_.bv_const(av_width, static_cast<uint64_t>(i)));
            State next;
            merge_into(cond, act_st, matched, next);
            matched = std::move(next);
        }
        merge_into(match, matched, default_st, s);
    }

    void run_action_body(const std::string& name, State& s) {
        if (name == kNoActionName) return;
        auto it = actions_.find(name);
        MINIP4_CHECK(it != actions_.end(), "table references unknown action " + name);
        MINIP4_CHECK(it->second->params.empty(), "table-invoked action has parameters");
        interpret_block_stmts(it->second->body, s);
    }

    // ------------------------------------------------------ expressions --

    TermId eval(const Expr& e, State& s) {
        return std::visit(
            [&](const auto& n) -> TermId {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    SemType t = tp_.type_of(e);
                    MINIP4_CHECK(t.is_bit(), "untyped literal survived typechecking");
                    return arena_.bv_const(t.width, n.value);
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return arena_.bool_const(n.value);
                } else if constexpr (std::is_same_v<T, LValueExpr>) {
                    const ResolvedLValue* r = tp_.resolved(n.lvalue);
                    MINIP4_CHECK(r, "unresolved lvalue");
                    return read_leaf(s, *r);
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    TermId base = eval(*n.base, s);
                    return arena_.extract(n.hi, n.lo, base);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    TermId arg = eval(*n.arg, s);
                    if (n.target.kind == TypeRef::Kind::Bit) {
                        if (arena_.node(arg).is_bool)
                            return arena_.resize(arena_.bool_to_bit(arg), n.target.width);
                        return arena_.resize(arg, n.target.width);
                    }
                    if (arena_.node(arg).is_bool) return arg;
                    return arena_.bit_to_bool(arg);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    TermId arg = eval(*n.arg, s);
                    switch (n.op) {
                        case UnOp::BitNot: return arena_.unary(TermOp::BvNot, arg);
                        case UnOp::Neg: return arena_.unary(TermOp::BvNeg, arg);
                        case UnOp::BoolNot: return arena_.unary(TermOp::BoolNot, arg);
                    }
                    throw InternalError("bad unary op");
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    TermId a = eval(*n.lhs, s);
                    TermId b = eval(*n.rhs, s);
                    switch (n.op) {
                        case BinOp::Add: return arena_.binary(TermOp::Add, a, b);
                        case BinOp::Sub: return arena_.binary(TermOp::Sub, a, b);
                        case BinOp::Mul: return arena_.binary(TermOp::Mul, a, b);
                        case BinOp::BitAnd: return arena_.binary(TermOp::And, a, b);
                        case BinOp::BitOr: return arena_.binary(TermOp::Or, a, b);
                        case BinOp::BitXor: return arena_.binary(TermOp::Xor, a, b);
                        case BinOp::Shl: return arena_.binary(TermOp::Shl, a, b);
                        case BinOp::Shr: return arena_.binary(TermOp::Shr, a, b);
                        case BinOp::Concat: return arena_.concat(a, b);
                        case BinOp::Eq: return arena_.binary(TermOp::Eq, a, b);
                        case BinOp::Ne: return arena_.binary(TermOp::Ne, a, b);
                        case BinOp::Lt: return arena_.binary(TermOp::Ult, a, b);
                        case BinOp::Le: return arena_.binary(TermOp::Ule, a, b);
                        case BinOp::Gt: return arena_.binary(TermOp::Ugt, a, b);
                        case BinOp::Ge: return arena_.binary(TermOp::Uge, a, b);
                        case BinOp::BoolAnd: return arena_.binary(TermOp::BoolAnd, a, b);
                        case BinOp::BoolOr: return arena_.binary(TermOp::BoolOr, a, b);
                    }
                    throw InternalError("bad binary op");
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    TermId c = eval(*n.cond, s);
                    TermId a = eval(*n.then_arm, s);
                    TermId b = eval(*n.else_arm, s);
                    return arena_.ite(c, a, b);
                } else {  // IsValidExpr
                    const ResolvedLValue* r = tp_.resolved(n.header);
                    MINIP4_CHECK(r && r->type.kind == SemType::Kind::Header,
                                 "isValid on a non-header");
                    return st_valid(s, r->leaf_path);
                }
            },
            e.node);
    }
};

}  // namespace

std::vector<TermId> BlockSemantics::output_roots() const {
    std::vector<TermId> roots;
    roots.reserve(outputs.size() + headers.size());
    for (const auto& f : outputs) roots.push_back(f.term);
    for (const auto& h : headers) roots.push_back(h.validity);
    return roots;
}

const InputVar* BlockSemantics::find_input(const std::string& name) const {
    for (const auto& in : inputs)
        if (in.name == name) return &in;
    return nullptr;
}

std::string BlockSemantics::render() const {
    std::string out = "Input: ";
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (i) out += ", ";
        out += inputs[i].name;
    }
    out += "\nOutput: ";
    bool first = true;
    for (const auto& f : outputs) {
        if (!first) out += ", ";
        out += f.path;
        first = false;
    }
    for (const auto& h : headers) {
        if (!first) out += ", ";
        out += h.path + ".$valid";
        first = false;
    }
    out += "\n\n";
    for (const auto& f : outputs) {
        out += f.path + " =\n" + arena->render(f.term, 1);
    }
    for (const auto& h : headers) {
        out += h.path + ".$valid =\n" + arena->render(h.validity, 1);
    }
    return out;
}

BlockSemantics detail_interpret_into(TermArena& arena, const TypedProgram& tp,
                                     const std::string& control) {
    const ControlDecl* c = tp.program.find_control(control);
    if (!c) throw UnsupportedConstruct("unknown control '" + control + "'");
    Interpreter interp(tp, *c, arena);
    return interp.run();
}

BlockSemantics interpret_block(const TypedProgram& tp, const std::string& control) {
    auto arena = std::make_shared<TermArena>();
    BlockSemantics s = detail_interpret_into(*arena, tp, control);
    s.arena = arena;
    return s;
}

uint64_t TaintPolicy::value_for(int width) const {
    if (kind == Kind::Zero) return 0;
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | byte;
    if (width <= 0) return v & 1;
    return width >= 64 ? v : (v & ((1ull << width) - 1));
}

EvalOutput concrete_eval(const BlockSemantics& s, const Assignment& a, TaintPolicy policy) {
    ConcreteEval eval(*s.arena, s.output_roots());
    struct Ctx {
        TaintPolicy policy;
    } ctx{policy};
    eval.set_policy(
        [](int width, void* c) -> uint64_t {
            return static_cast<Ctx*>(c)->policy.value_for(width);
        },
        &ctx);
    for (const auto& in : s.inputs) {
        auto it = a.find(in.name);
        if (it != a.end()) eval.set_var(in.var, it->second);
    }
    // Missing *untainted* inputs throw inside run().
    eval.run();

    EvalOutput out;
    out.headers.reserve(s.headers.size());
    for (const auto& h : s.headers) {
        EvalHeader eh;
        eh.path = h.path;
        eh.valid = eval.value_of(h.validity) != 0;
        eh.dont_care = h.validity_tainted;
        out.headers.push_back(eh);
    }
    out.fields.reserve(s.outputs.size());
    for (const auto& f : s.outputs) {
        EvalField ef;
        ef.path = f.path;
        ef.width = f.width;
        ef.value = eval.value_of(f.term);
        ef.dont_care = f.taint_mask;
        if (f.header_index >= 0) {
            const EvalHeader& eh = out.headers[f.header_index];
            if (!eh.valid || eh.dont_care)
                ef.dont_care = f.width >= 64 ? ~0ull : ((1ull << f.width) - 1);
        }
        out.fields.push_back(ef);
    }
    return out;
}

}  // namespace minip4::sem
