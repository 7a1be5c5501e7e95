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

#include "minip4/mbt.h"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "minip4/printer.h"

namespace minip4::mbt {

using namespace ast;
using sem::BlockSemantics;
using sem::TermId;

// --------------------------------------------------------- path discovery --

namespace {

// Lowest-id Ite whose condition is untainted, reachable from the roots.
TermId first_splittable_cond(sem::TermArena& arena, const std::vector<TermId>& roots) {
    std::vector<bool> seen(arena.size(), false);
    std::vector<TermId> stack(roots.begin(), roots.end());
    TermId best = sem::kNoTerm;
    while (!stack.empty()) {
        TermId id = stack.back();
        stack.pop_back();
        if (id < 0 || seen[id]) continue;
        seen[id] = true;
        const auto& n = arena.node(id);
        if (n.kind == sem::TermKind::Ite && arena.taint_bits(n.a) == 0) {
            if (best == sem::kNoTerm || id < best) best = id;
        }
        if (n.a != sem::kNoTerm) stack.push_back(n.a);
        if (n.b != sem::kNoTerm) stack.push_back(n.b);
        if (n.c != sem::kNoTerm) stack.push_back(n.c);
    }
    return best == sem::kNoTerm ? sem::kNoTerm : arena.node(best).a;
}

}  // namespace

PathEnumResult enumerate_paths(const BlockSemantics& s, int limit) {
    PathEnumResult result;
    sem::TermArena& arena = *s.arena;
    std::function<void(TermId, std::vector<TermId>)> recurse = [&](TermId cond_so_far,
                                                                   std::vector<TermId> roots) {
        if (static_cast<int>(result.paths.size()) >= limit) {
            result.truncated = true;
            return;
        }
        TermId split = first_splittable_cond(arena, roots);
        if (split == sem::kNoTerm) {
            PathCondition pc;
            pc.cond = cond_so_far;
            pc.path_id = static_cast<int>(result.paths.size());
            result.paths.push_back(pc);
            return;
        }
        for (bool value : {true, false}) {
            std::unordered_map<TermId, TermId> repl{{split, arena.bool_const(value)}};
            std::vector<TermId> next;
            next.reserve(roots.size());
            for (TermId r : roots) next.push_back(arena.substitute(r, repl));
            TermId branch_cond =
                value ? split : arena.unary(sem::TermOp::BoolNot, split);
            TermId combined = arena.binary(sem::TermOp::BoolAnd, cond_so_far, branch_cond);
            recurse(combined, std::move(next));
        }
    };
    recurse(arena.bool_const(true), s.output_roots());
    return result;
}

// ----------------------------------------------------------- case solving --

namespace {

uint64_t mask_for(int w) { return w >= 64 ? ~0ull : ((1ull << w) - 1); }

uint64_t nonzero_draw(std::mt19937_64& rng, int width) {
    uint64_t m = mask_for(width);
    if (m == 0) return 0;
    uint64_t v = rng() & m;
    return v == 0 ? 1 : v;
}

}  // namespace

DeriveResult derive_testcases(const BlockSemantics& s, const PathEnumResult& paths,
                              uint64_t seed) {
    DeriveResult out;
    sem::TermArena& arena = *s.arena;

    for (const auto& pc : paths.paths) {
        if (!pc.controllable) continue;
        std::mt19937_64 rng(seed ^ (0x5851f42d4c957f2dull * (pc.path_id + 1)));
        sem::ConcreteEval cond_eval(arena, {pc.cond});
        const std::vector<TermId>& cond_vars = cond_eval.vars();

        auto action_count_for = [&](const std::string& name) -> int {
            for (const auto& site : s.sites) {
                std::string suffix = "_" + std::to_string(site.site);
                if (name == site.table + "_action" + suffix)
                    return static_cast<int>(site.action_names.size());
            }
            return -1;
        };
        auto assign_all_random_nonzero = [&](sem::Assignment& a) {
            for (const auto& in : s.inputs) {
                int n_actions = action_count_for(in.name);
                if (n_actions > 0) {
                    // installable action choices only
                    a[in.name] = 1 + rng() % static_cast<uint64_t>(n_actions);
                } else {
                    a[in.name] = nonzero_draw(rng, in.width);
                }
            }
        };
        auto satisfies = [&](const sem::Assignment& a) {
            cond_eval.clear_vars();
            for (TermId v : cond_vars) {
                const auto& n = arena.node(v);
                auto it = a.find(arena.var_name(n.name));
                if (it == a.end()) return false;
                cond_eval.set_var(v, it->second);
            }
            cond_eval.run();
            return cond_eval.value_of(pc.cond) != 0;
        };

        sem::Assignment found;
        bool ok = false;
        for (int attempt = 0; attempt < 128 && !ok; ++attempt) {
            sem::Assignment a;
            assign_all_random_nonzero(a);
            if (satisfies(a)) {
                found = std::move(a);
                ok = true;
            }
        }
        if (!ok) {
            // deterministic fallback: enumerate the condition's variables,
            // nonzero randoms elsewhere
            int bits = 0;
            for (TermId v : cond_vars) bits += std::max<int>(1, arena.node(v).width);
            if (bits <= 24) {
                sem::Assignment base;
                assign_all_random_nonzero(base);
                uint64_t total = 1ull << bits;
                for (uint64_t counter = 0; counter < total && !ok; ++counter) {
                    sem::Assignment a = base;
                    uint64_t rem = counter;
                    for (TermId v : cond_vars) {
                        const auto& n = arena.node(v);
                        int w = n.is_bool ? 1 : n.width;
                        a[arena.var_name(n.name)] = rem & mask_for(w);
                        rem >>= w;
                    }
                    if (satisfies(a)) {
                        found = std::move(a);
                        ok = true;
                    }
                }
                if (!ok) {
                    ++out.unsatisfiable_dropped;
                    continue;
                }
            } else {
                ++out.search_exhausted;
                continue;
            }
        }

        sem::EvalOutput expected = sem::concrete_eval(s, found, sem::TaintPolicy::zero());
        TestCase tc;
        tc.inputs = std::move(found);
        tc.expected = std::move(expected.fields);
        tc.expected_headers = std::move(expected.headers);
        tc.path_id = pc.path_id;
        tc.seed = seed;
        out.cases.push_back(std::move(tc));
    }
    return out;
}

// -------------------------------------------------------- target executor --

namespace {

struct TargetReject {
    std::string reason;
};

// Direct concrete execution of the AST; shares nothing with the term
// machinery. Undefined reads take the policy value, writes to invalid
// headers are dropped, exit respects copy-in/copy-out.
class Target {
  public:
    Target(const TypedProgram& tp, const ControlDecl& control, const TestCase& tc,
           sem::TaintPolicy policy)
        : tp_(tp), control_(control), tc_(tc), policy_(policy) {}

    void run() {
        for (const auto& prm : control_.params) {
            SemType t = tp_.resolve_type(prm.type);
            auto leaves = flatten_type(tp_, prm.name, t);
            auto headers = headers_in_type(tp_, prm.name, t);
            if (prm.direction == Direction::Out) {
                for (const auto& leaf : leaves) env_[leaf.path] = policy_.value_for(leaf.width);
                for (const auto& h : headers) validity_[h] = false;
            } else {
                for (const auto& leaf : leaves) {
                    auto it = tc_.inputs.find(leaf.path);
                    if (it == tc_.inputs.end())
                        throw TargetReject{"missing input " + leaf.path};
                    env_[leaf.path] = it->second & mask_for(leaf.width);
                }
                for (const auto& h : headers) validity_[h] = true;
            }
            for (const auto& leaf : leaves) width_[leaf.path] = leaf.width;
        }
        for (const auto& local : control_.locals) {
            if (const auto* v = std::get_if<LocalVarDecl>(&local)) {
                declare(v->type, v->name, v->init.get());
            } else if (const auto* a = std::get_if<ActionDecl>(&local)) {
                actions_[a->name] = a;
            } else {
                const auto& t = std::get<TableDecl>(local);
                tables_[t.name] = &t;
            }
        }
        exec_block(control_.apply);
    }

    std::vector<sem::EvalField> outputs() const {
        std::vector<sem::EvalField> out;
        for (const auto& prm : control_.params) {
            if (prm.direction == Direction::In) continue;
            SemType t = tp_.resolve_type(prm.type);
            for (const auto& leaf : flatten_type(tp_, prm.name, t)) {
                sem::EvalField f;
                f.path = leaf.path;
                f.width = leaf.width;
                f.value = env_.at(leaf.path);
                out.push_back(f);
            }
        }
        return out;
    }

    std::vector<sem::EvalHeader> output_headers() const {
        std::vector<sem::EvalHeader> out;
        for (const auto& prm : control_.params) {
            if (prm.direction == Direction::In) continue;
            SemType t = tp_.resolve_type(prm.type);
            for (const auto& h : headers_in_type(tp_, prm.name, t)) {
                sem::EvalHeader eh;
                eh.path = h;
                eh.valid = validity_.at(h);
                out.push_back(eh);
            }
        }
        return out;
    }

    bool header_valid(const std::string& h) const {
        auto it = validity_.find(h);
        return it != validity_.end() && it->second;
    }

  private:
    const TypedProgram& tp_;
    const ControlDecl& control_;
    const TestCase& tc_;
    sem::TaintPolicy policy_;
    std::map<std::string, uint64_t> env_;
    std::map<std::string, int> width_;
    std::map<std::string, bool> validity_;
    std::map<std::string, const ActionDecl*> actions_;
    std::map<std::string, const TableDecl*> tables_;
    std::map<std::string, int> apply_counts_;
    std::map<std::string, std::string> frame_;  // action param -> env key
    bool exited_ = false;

    void declare(const TypeRef& type, const std::string& name, const Expr* init) {
        int w = type.kind == TypeRef::Kind::Bool ? 1 : type.width;
        width_[name] = type.kind == TypeRef::Kind::Bool ? 0 : w;
        env_[name] = init ? eval(*init) : policy_.value_for(type.kind == TypeRef::Kind::Bool
                                                                ? 0
                                                                : type.width);
    }

    std::string env_key(const std::string& leaf) const {
        if (frame_.empty()) return leaf;
        size_t dot = leaf.find('.');
        std::string head = dot == std::string::npos ? leaf : leaf.substr(0, dot);
        auto it = frame_.find(head);
        if (it == frame_.end()) return leaf;
        return dot == std::string::npos ? it->second : it->second + leaf.substr(dot);
    }

    void exec_block(const Block& b) {
        for (const auto& sp : b.stmts) {
            if (exited_) return;
            exec_stmt(*sp);
        }
    }

    void exec_stmt(const Stmt& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    const ResolvedLValue* r = tp_.resolved(n.target);
                    MINIP4_CHECK(r, "target: unresolved assignment");
                    uint64_t value = eval(*n.value);
                    write(*r, value);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    if (eval(*n.cond)) {
                        exec_block(n.then_block);
                    } else if (n.else_block) {
                        exec_block(*n.else_block);
                    }
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    exec_block(n.body);
                } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    declare(n.type, n.name, n.init.get());
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    exec_call(n);
                } else if constexpr (std::is_same_v<T, ApplyStmt>) {
                    exec_apply(n);
                } else if constexpr (std::is_same_v<T, ExitStmt>) {
                    exited_ = true;
                } else {  // SetValidityStmt
                    const ResolvedLValue* r = tp_.resolved(n.header);
                    MINIP4_CHECK(r && r->type.kind == SemType::Kind::Header,
                                 "target: bad validity op");
                    bool& valid = validity_[r->leaf_path];
                    if (n.make_valid) {
                        if (!valid) {
                            // freshly validated headers start undefined
                            for (const auto& f : r->type.header->fields)
                                env_[r->leaf_path + "." + f.name] =
                                    policy_.value_for(f.type.width);
                        }
                        valid = true;
                    } else {
                        valid = false;
                    }
                }
            },
            s.node);
    }

    void exec_call(const CallStmt& call) {
        if (call.callee == kNoActionName) return;
        auto it = actions_.find(call.callee);
        MINIP4_CHECK(it != actions_.end(), "target: unknown action " + call.callee);
        const ActionDecl& action = *it->second;
        int idx = call_counter_++;
        std::map<std::string, std::string> frame;
        for (size_t i = 0; i < action.params.size(); ++i) {
            const Param& prm = action.params[i];
            std::string key = "_call" + std::to_string(idx) + "." + prm.name;
            frame[prm.name] = key;
            width_[key] = prm.type.width;
            env_[key] = prm.direction == Direction::Out ? policy_.value_for(prm.type.width)
                                                        : eval(*call.args[i]);
        }
        auto saved = frame_;
        frame_ = std::move(frame);
        bool exited_at_entry = exited_;
        exec_block(action.body);
        frame_ = std::move(saved);
        // copy-out still happens when the body exits
        bool body_exited = exited_;
        exited_ = exited_at_entry;
        for (size_t i = 0; i < action.params.size(); ++i) {
            const Param& prm = action.params[i];
            if (prm.direction == Direction::In) continue;
            std::string key = "_call" + std::to_string(idx) + "." + prm.name;
            auto lv = arg_lvalue(*call.args[i]);
            MINIP4_CHECK(lv.has_value(), "target: inout arg is not an lvalue");
            write(*lv, env_.at(key));
        }
        exited_ = body_exited;
    }

    std::optional<ResolvedLValue> arg_lvalue(const Expr& arg) const {
        if (const auto* lve = std::get_if<LValueExpr>(&arg.node)) {
            const ResolvedLValue* r = tp_.resolved(lve->lvalue);
            return r ? std::optional(*r) : std::nullopt;
        }
        if (const auto* sl = std::get_if<SliceExpr>(&arg.node)) {
            if (const auto* base = std::get_if<LValueExpr>(&sl->base->node)) {
                const ResolvedLValue* rb = tp_.resolved(base->lvalue);
                if (!rb) return std::nullopt;
                ResolvedLValue out = *rb;
                out.hi = sl->hi;
                out.lo = sl->lo;
                return out;
            }
        }
        return std::nullopt;
    }

    void exec_apply(const ApplyStmt& apply) {
        auto it = tables_.find(apply.table);
        MINIP4_CHECK(it != tables_.end(), "target: unknown table " + apply.table);
        const TableDecl& table = *it->second;
        int site = apply_counts_[apply.table]++;
        std::string suffix = "_" + std::to_string(site);
        auto key_it = tc_.inputs.find(table.name + "_table_key" + suffix);
        auto act_it = tc_.inputs.find(table.name + "_action" + suffix);
        if (key_it == tc_.inputs.end() || act_it == tc_.inputs.end())
            throw TargetReject{"no control-plane entry for " + table.name + suffix};
        uint64_t installed_key = key_it->second;
        uint64_t action_id = act_it->second;
        size_t n = table.actions.size();
        if (action_id > n) throw TargetReject{"action id " + std::to_string(action_id) +
                                              " not installable for " + table.name};
        uint64_t key = eval(*table.key);
        std::string chosen = table.default_action;
        if (key == installed_key && action_id >= 1 && action_id <= n)
            chosen = table.actions[action_id - 1];
        if (chosen == kNoActionName) return;
        auto a = actions_.find(chosen);
        MINIP4_CHECK(a != actions_.end(), "target: table action missing");
        exec_block(a->second->body);
    }

    void write(const ResolvedLValue& r, uint64_t value) {
        if (r.owning_header && !header_valid_env(*r.owning_header)) return;  // dropped
        std::string key = env_key(r.leaf_path);
        auto it = env_.find(key);
        MINIP4_CHECK(it != env_.end(), "target: write to unknown leaf " + key);
        int leaf_w = width_.at(key);
        if (leaf_w == 0) {  // bool
            it->second = value & 1;
            return;
        }
        uint64_t field_mask = mask_for(r.hi - r.lo + 1) << r.lo;
        it->second = (it->second & ~field_mask) | ((value << r.lo) & field_mask);
    }

    bool header_valid_env(const std::string& h) const {
        auto it = validity_.find(h);
        return it != validity_.end() && it->second;
    }

    uint64_t read(const ResolvedLValue& r) {
        if (r.owning_header && !header_valid_env(*r.owning_header))
            return policy_.value_for(r.access_width());
        std::string key = env_key(r.leaf_path);
        auto it = env_.find(key);
        MINIP4_CHECK(it != env_.end(), "target: read of unknown leaf " + key);
        if (width_.at(key) == 0) return it->second & 1;
        return (it->second >> r.lo) & mask_for(r.access_width());
    }

    uint64_t eval(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> uint64_t {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    SemType t = tp_.type_of(e);
                    uint64_t m = t.is_bit() ? mask_for(t.width) : ~0ull;
                    return n.value & m;
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return n.value ? 1 : 0;
                } else if constexpr (std::is_same_v<T, LValueExpr>) {
                    const ResolvedLValue* r = tp_.resolved(n.lvalue);
                    MINIP4_CHECK(r, "target: unresolved lvalue");
                    return read(*r);
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    return (eval(*n.base) >> n.lo) & mask_for(n.hi - n.lo + 1);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    uint64_t v = eval(*n.arg);
                    if (n.target.kind == TypeRef::Kind::Bit)
                        return v & mask_for(n.target.width);
                    return v & 1;
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    uint64_t v = eval(*n.arg);
                    SemType t = tp_.type_of(e);
                    switch (n.op) {
                        case UnOp::BitNot: return ~v & mask_for(t.width);
                        case UnOp::Neg: return (~v + 1) & mask_for(t.width);
                        case UnOp::BoolNot: return v ? 0 : 1;
                    }
                    return 0;
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    uint64_t a = eval(*n.lhs);
                    uint64_t b = eval(*n.rhs);
                    SemType lt = tp_.type_of(*n.lhs);
                    int w = lt.is_bit() ? lt.width : 64;
                    SemType rt = tp_.type_of(e);
                    int rw = rt.is_bit() ? rt.width : w;
                    uint64_t m = mask_for(rw);
                    switch (n.op) {
                        case BinOp::Add: return (a + b) & m;
                        case BinOp::Sub: return (a - b) & m;
                        case BinOp::Mul: return (a * b) & m;
                        case BinOp::BitAnd: return a & b;
                        case BinOp::BitOr: return a | b;
                        case BinOp::BitXor: return a ^ b;
                        case BinOp::Shl:
                            return b >= static_cast<uint64_t>(rw) ? 0 : (a << b) & m;
                        case BinOp::Shr: return b >= static_cast<uint64_t>(rw) ? 0 : (a >> b);
                        case BinOp::Concat: {
                            SemType rhs_t = tp_.type_of(*n.rhs);
                            return (a << rhs_t.width) | b;
                        }
                        case BinOp::Eq: return a == b;
                        case BinOp::Ne: return a != b;
                        case BinOp::Lt: return a < b;
                        case BinOp::Le: return a <= b;
                        case BinOp::Gt: return a > b;
                        case BinOp::Ge: return a >= b;
                        case BinOp::BoolAnd: return a && b;
                        case BinOp::BoolOr: return a || b;
                    }
                    (void)w;
                    return 0;
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    return eval(*n.cond) ? eval(*n.then_arm) : eval(*n.else_arm);
                } else {  // IsValidExpr
                    const ResolvedLValue* r = tp_.resolved(n.header);
                    MINIP4_CHECK(r, "target: unresolved isValid");
                    return header_valid_env(r->leaf_path) ? 1 : 0;
                }
            },
            e.node);
    }

    int call_counter_ = 0;
};

}  // namespace

TargetResult run_target(const TypedProgram& final_program, const std::string& control,
                        const TestCase& tc, sem::TaintPolicy policy) {
    const ControlDecl* c = final_program.program.find_control(control);
    if (!c) return {TargetResult::Kind::Reject, "control missing in final program", {}};
    Target target(final_program, *c, tc, policy);
    try {
        target.run();
    } catch (const TargetReject& r) {
        return {TargetResult::Kind::Reject, r.reason, {}};
    }

    std::vector<sem::EvalField> actual = target.outputs();
    std::vector<sem::EvalHeader> actual_headers = target.output_headers();
    MINIP4_CHECK(actual.size() == tc.expected.size(), "target: output arity mismatch");
    MINIP4_CHECK(actual_headers.size() == tc.expected_headers.size(),
                 "target: header arity mismatch");

    for (size_t i = 0; i < actual_headers.size(); ++i) {
        const auto& exp = tc.expected_headers[i];
        if (exp.dont_care) continue;
        if (actual_headers[i].valid != exp.valid) {
            return {TargetResult::Kind::Fail,
                    "validity of " + exp.path + " differs", std::move(actual)};
        }
    }
    for (size_t i = 0; i < actual.size(); ++i) {
        const auto& exp = tc.expected[i];
        uint64_t care = ~exp.dont_care & mask_for(exp.width);
        // bits of invalid headers are excluded on the actual side as well
        if (const auto hi = std::find_if(
                tc.expected_headers.begin(), tc.expected_headers.end(),
                [&](const sem::EvalHeader& h) {
                    return exp.path.rfind(h.path + ".", 0) == 0;
                });
            hi != tc.expected_headers.end()) {
            if (hi->dont_care || !hi->valid) continue;
        }
        if ((actual[i].value ^ exp.value) & care) {
            return {TargetResult::Kind::Fail, exp.path + " differs", std::move(actual)};
        }
    }
    return {TargetResult::Kind::Pass, "", std::move(actual)};
}

std::vector<equiv::Finding> run_mbt_on_trace(const passes::PassTrace& trace,
                                             const MbtConfig& cfg) {
    std::vector<equiv::Finding> findings;
    if (trace.crash) {
        equiv::Finding f;
        f.kind = equiv::Finding::Kind::Crash;
        f.pass = trace.crash->pass;
        f.detail = trace.crash->message;
        findings.push_back(std::move(f));
        return findings;
    }
    if (trace.reparse_failure) {
        equiv::Finding f;
        f.kind = equiv::Finding::Kind::InvalidEmit;
        f.pass = trace.reparse_failure->pass;
        f.detail = trace.reparse_failure->detail;
        findings.push_back(std::move(f));
        return findings;
    }
    const TypedProgram& original = trace.elements.front().typed;
    const TypedProgram& final_program = trace.elements.back().typed;

    for (const auto& control : original.program.pipeline()) {
        sem::BlockSemantics model = sem::interpret_block(original, control);
        PathEnumResult paths = enumerate_paths(model, cfg.path_limit);
        DeriveResult derived = derive_testcases(model, paths, cfg.seed);
        for (const auto& tc : derived.cases) {
            TargetResult r;
            try {
                r = run_target(final_program, control, tc, cfg.policy);
            } catch (const InternalError& e) {
                equiv::Finding f;
                f.kind = equiv::Finding::Kind::Crash;
                f.pass = "(end-to-end)";
                f.control = control;
                f.detail = std::string("target crash: ") + e.what();
                findings.push_back(std::move(f));
                continue;
            }
            if (r.kind == TargetResult::Kind::Fail) {
                equiv::Finding f;
                f.kind = equiv::Finding::Kind::Semantic;
                f.pass = "(end-to-end)";
                f.control = control;
                f.detail = "test case on path " + std::to_string(tc.path_id) +
                           " failed: " + r.reason;
                equiv::Counterexample cex;
                cex.inputs = tc.inputs;
                for (const auto& e : tc.expected) cex.before_out.push_back({e.path, e.value});
                for (const auto& a : r.actual) cex.after_out.push_back({a.path, a.value});
                f.cex = std::move(cex);
                findings.push_back(std::move(f));
            }
        }
    }
    return findings;
}

std::vector<equiv::Finding> run_mbt(const TypedProgram& p, const MbtConfig& cfg) {
    auto copy = passes::reparse(print_program(p.program), nullptr);
    MINIP4_CHECK(copy.has_value(), "run_mbt: program does not reparse");
    passes::PassTrace trace = passes::run_pipeline(std::move(*copy), cfg.pipeline);
    return run_mbt_on_trace(trace, cfg);
}

// ------------------------------------------------------------- STF output --

namespace {

void hex_field(std::string& out, uint64_t value, uint64_t dont_care, int width) {
    int nibbles = (width + 3) / 4;
    for (int i = nibbles - 1; i >= 0; --i) {
        int lo = i * 4;
        uint64_t field_bits = 0;
        for (int b = lo; b < lo + 4 && b < width; ++b) field_bits |= 1ull << b;
        bool all_dc = (dont_care & field_bits) == field_bits && field_bits != 0;
        if (all_dc) {
            out += '*';
        } else {
            out += "0123456789abcdef"[(value >> lo) & 0xf];
        }
    }
}

}  // namespace

std::string emit_stf(const BlockSemantics& s, const std::vector<TestCase>& cases) {
    std::string out;
    for (const auto& tc : cases) {
        out += "# control " + s.control + " path " + std::to_string(tc.path_id) + " seed " +
               std::to_string(tc.seed) + "\n";
        for (const auto& site : s.sites) {
            std::string suffix = "_" + std::to_string(site.site);
            uint64_t key = tc.inputs.at(site.table + "_table_key" + suffix);
            uint64_t act = tc.inputs.at(site.table + "_action" + suffix);
            out += "add " + site.table + suffix + " 0x";
            char buf[32];
            snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(key));
            out += buf;
            out += " " + std::to_string(act) + "\n";
        }
        out += "packet ";
        for (const auto& in : s.inputs) {
            bool is_table_sym = false;
            for (const auto& site : s.sites) {
                std::string suffix = "_" + std::to_string(site.site);
                if (in.name == site.table + "_table_key" + suffix ||
                    in.name == site.table + "_action" + suffix) {
                    is_table_sym = true;
                    break;
                }
            }
            if (is_table_sym) continue;
            hex_field(out, tc.inputs.at(in.name), 0, in.width);
        }
        out += "\nexpect ";
        for (size_t i = 0; i < tc.expected.size(); ++i) {
            const auto& f = tc.expected[i];
            hex_field(out, f.value, f.dont_care, f.width);
        }
        out += "\n\n";
    }
    return out;
}

}  // namespace minip4::mbt
