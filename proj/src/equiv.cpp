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

#include "minip4/equiv.h"

#include <chrono>
#include <cstdlib>

#include "minip4/smt.h"

namespace minip4::equiv {

using sem::BlockSemantics;
using sem::TermArena;
using sem::TermId;

const char* to_string(Backend b) {
    return b == Backend::BruteForce ? "brute" : "smt";
}

const char* to_string(EquivResult::Verdict v) {
    switch (v) {
        case EquivResult::Verdict::Equivalent: return "equivalent";
        case EquivResult::Verdict::Inequivalent: return "inequivalent";
        case EquivResult::Verdict::UnstableOnly: return "unstable-only";
        case EquivResult::Verdict::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Finding::Kind k) {
    switch (k) {
        case Finding::Kind::Crash: return "crash";
        case Finding::Kind::Semantic: return "semantic";
        case Finding::Kind::Unstable: return "unstable";
        case Finding::Kind::InvalidEmit: return "invalid-emit";
    }
    return "?";
}

sem::BlockSemantics interpret_block_in(TermArena& arena, const TypedProgram& tp,
                                       const std::string& control) {
    // interpret_block builds into a private arena; replicate its driver here
    // against the shared arena. The interpreter itself is deterministic, so
    // interpreting before and after in one arena unifies inputs by name.
    return sem::detail_interpret_into(arena, tp, control);
}

// ------------------------------------------------------------- Comparison --

Comparison::Comparison(const BlockSemantics& before, const BlockSemantics& after, Mode mode)
    : before_(&before), after_(&after), arena_(before.arena ? before.arena.get() : nullptr) {
    MINIP4_CHECK(before.arena.get() == after.arena.get() && arena_ != nullptr,
                 "comparison requires a shared arena");
    TermArena& arena = *arena_;

    if (before.outputs.size() != after.outputs.size())
        throw SignatureMismatch("output field counts differ");
    if (before.headers.size() != after.headers.size())
        throw SignatureMismatch("header counts differ");
    if (before.inputs.size() != after.inputs.size())
        throw SignatureMismatch("input counts differ");
    for (size_t i = 0; i < before.inputs.size(); ++i) {
        if (before.inputs[i].width != after.inputs[i].width)
            throw SignatureMismatch("input width differs at position " + std::to_string(i));
        if (before.inputs[i].var != after.inputs[i].var)
            throw SignatureMismatch("input naming differs at position " + std::to_string(i) +
                                    " (" + before.inputs[i].name + " vs " + after.inputs[i].name +
                                    ")");
    }

    bool aware = mode == Mode::TaintAware;
    headers_.reserve(before.headers.size());
    for (size_t i = 0; i < before.headers.size(); ++i) {
        const auto& hb = before.headers[i];
        const auto& ha = after.headers[i];
        if (hb.path != ha.path) throw SignatureMismatch("header order differs: " + hb.path);
        HeaderPair hp;
        hp.path = hb.path;
        hp.before_valid = hb.validity;
        hp.after_valid = ha.validity;
        hp.compared = !(aware && hb.validity_tainted);
        headers_.push_back(hp);
    }
    fields_.reserve(before.outputs.size());
    for (size_t i = 0; i < before.outputs.size(); ++i) {
        const auto& fb = before.outputs[i];
        const auto& fa = after.outputs[i];
        if (fb.path != fa.path || fb.width != fa.width)
            throw SignatureMismatch("output field mismatch at " + fb.path);
        FieldPair fp;
        fp.path = fb.path;
        fp.width = fb.width;
        fp.before_term = fb.term;
        fp.after_term = fa.term;
        fp.header_pair = fb.header_index;
        uint64_t full = fb.width >= 64 ? ~0ull : ((1ull << fb.width) - 1);
        fp.cmp_mask = aware ? (full & ~fb.taint_mask) : full;
        if (fp.header_pair >= 0 && !headers_[fp.header_pair].compared) fp.cmp_mask = 0;
        fields_.push_back(fp);
    }

    // Variables that can influence the comparison.
    std::vector<TermId> roots;
    for (const auto& fp : fields_) {
        if (fp.cmp_mask == 0) continue;
        roots.push_back(fp.before_term);
        roots.push_back(fp.after_term);
        if (fp.header_pair >= 0) {
            roots.push_back(headers_[fp.header_pair].before_valid);
            roots.push_back(headers_[fp.header_pair].after_valid);
        }
    }
    for (const auto& hp : headers_) {
        if (!hp.compared) continue;
        roots.push_back(hp.before_valid);
        roots.push_back(hp.after_valid);
    }
    enum_vars_ = arena.free_vars_of(roots);
    enum_bits_ = 0;
    for (TermId v : enum_vars_) {
        const auto& n = arena.node(v);
        enum_bits_ += n.is_bool ? 1 : n.width;
    }
}

namespace {

struct CmpEval {
    sem::ConcreteEval eval;

    explicit CmpEval(const Comparison& cmp)
        : eval(cmp.arena(), [&cmp] {
              std::vector<TermId> roots;
              for (const auto& fp : cmp.fields()) {
                  roots.push_back(fp.before_term);
                  roots.push_back(fp.after_term);
              }
              for (const auto& hp : cmp.headers()) {
                  roots.push_back(hp.before_valid);
                  roots.push_back(hp.after_valid);
              }
              return roots;
          }()) {}
};

bool differs_with(const Comparison& cmp, sem::ConcreteEval& ev) {
    for (const auto& hp : cmp.headers()) {
        if (!hp.compared) continue;
        if (ev.value_of(hp.before_valid) != ev.value_of(hp.after_valid)) return true;
    }
    for (const auto& fp : cmp.fields()) {
        if (fp.cmp_mask == 0) continue;
        if (fp.header_pair >= 0) {
            const auto& hp = cmp.headers()[fp.header_pair];
            // field bits only matter while the header is valid on both sides
            if (!(ev.value_of(hp.before_valid) && ev.value_of(hp.after_valid))) continue;
        }
        if ((ev.value_of(fp.before_term) ^ ev.value_of(fp.after_term)) & fp.cmp_mask)
            return true;
    }
    return false;
}

void set_assignment(const Comparison& cmp, sem::ConcreteEval& ev, const sem::Assignment& a) {
    ev.clear_vars();
    for (TermId v : ev.vars()) {
        const auto& n = cmp.arena().node(v);
        auto it = a.find(cmp.arena().var_name(n.name));
        if (it != a.end()) ev.set_var(v, it->second);
    }
}

// All-zero fallback for variables outside the enumeration set (they cannot
// influence the comparison; a value is still needed to evaluate the DAG).
uint64_t zero_policy(int, void*) { return 0; }

}  // namespace

bool Comparison::differs(const sem::Assignment& a) const {
    CmpEval ce(*this);
    ce.eval.set_policy(zero_policy, nullptr);
    set_assignment(*this, ce.eval, a);
    ce.eval.run();
    return differs_with(*this, ce.eval);
}

Counterexample Comparison::counterexample(const sem::Assignment& a) const {
    CmpEval ce(*this);
    ce.eval.set_policy(zero_policy, nullptr);
    set_assignment(*this, ce.eval, a);
    ce.eval.run();
    Counterexample cex;
    cex.inputs = a;
    for (const auto& fp : fields_) {
        cex.before_out.push_back({fp.path, ce.eval.value_of(fp.before_term)});
        cex.after_out.push_back({fp.path, ce.eval.value_of(fp.after_term)});
    }
    for (const auto& hp : headers_) {
        cex.before_out.push_back({hp.path + ".$valid", ce.eval.value_of(hp.before_valid)});
        cex.after_out.push_back({hp.path + ".$valid", ce.eval.value_of(hp.after_valid)});
    }
    return cex;
}

// ------------------------------------------------------------ brute force --

namespace {

struct BruteOutcome {
    enum class Kind { NoDiff, Diff, OverBudget } kind = Kind::NoDiff;
    sem::Assignment witness;
};

// Enumerates assignments in ascending binary-counter order (variables in
// arena id order, first variable in the low bits), returning the first
// distinguishing assignment: the lexicographically smallest witness.
BruteOutcome brute_force_run(const Comparison& cmp, int width_budget) {
    if (cmp.enum_bits() > width_budget) return {BruteOutcome::Kind::OverBudget, {}};
    CmpEval ce(cmp);
    ce.eval.set_policy(zero_policy, nullptr);
    const auto& vars = cmp.enum_vars();
    const TermArena& arena = cmp.arena();

    uint64_t total = 1ull << cmp.enum_bits();
    for (uint64_t counter = 0; counter < total; ++counter) {
        uint64_t bits = counter;
        ce.eval.clear_vars();
        for (TermId v : vars) {
            const auto& n = arena.node(v);
            int w = n.is_bool ? 1 : n.width;
            uint64_t val = bits & (w >= 64 ? ~0ull : ((1ull << w) - 1));
            bits >>= w;
            ce.eval.set_var(v, val);
        }
        ce.eval.run();
        if (differs_with(cmp, ce.eval)) {
            sem::Assignment a;
            uint64_t rebits = counter;
            for (TermId v : vars) {
                const auto& n = arena.node(v);
                int w = n.is_bool ? 1 : n.width;
                a[arena.var_name(n.name)] = rebits & (w >= 64 ? ~0ull : ((1ull << w) - 1));
                rebits >>= w;
            }
            return {BruteOutcome::Kind::Diff, std::move(a)};
        }
    }
    return {BruteOutcome::Kind::NoDiff, {}};
}

struct BackendOutcome {
    enum class Kind { NoDiff, Diff, Unknown } kind = Kind::Unknown;
    sem::Assignment witness;
    std::string note;
};

BackendOutcome solve(const Comparison& cmp, Backend backend, const CheckOptions& opts) {
    if (backend == Backend::BruteForce) {
        BruteOutcome out = brute_force_run(cmp, opts.width_budget);
        switch (out.kind) {
            case BruteOutcome::Kind::NoDiff: return {BackendOutcome::Kind::NoDiff, {}, {}};
            case BruteOutcome::Kind::Diff:
                return {BackendOutcome::Kind::Diff, std::move(out.witness), {}};
            case BruteOutcome::Kind::OverBudget:
                return {BackendOutcome::Kind::Unknown, {}, "budget exceeded (" +
                            std::to_string(cmp.enum_bits()) + " bits)"};
        }
    }
    std::string script = emit_smt(cmp);
    std::vector<std::string> names;
    for (TermId v : cmp.enum_vars()) names.push_back(cmp.arena().var_name(cmp.arena().node(v).name));
    smt::SolverResult sr = smt::run_solver(opts.solver_cmd, script, names, opts.solver_timeout_ms);
    if (sr.status == smt::SolverResult::Status::Unsat)
        return {BackendOutcome::Kind::NoDiff, {}, {}};
    if (sr.status == smt::SolverResult::Status::Sat) {
        // Confirm the model by replaying it; a non-distinguishing model means
        // the serialization or the solver is wrong and must not be trusted.
        if (cmp.differs(sr.model)) return {BackendOutcome::Kind::Diff, std::move(sr.model), {}};
        return {BackendOutcome::Kind::Unknown, {}, "solver model failed replay"};
    }
    return {BackendOutcome::Kind::Unknown, {}, sr.error.empty() ? "solver unknown" : sr.error};
}

}  // namespace

static EquivResult check_on(const BlockSemantics& before, const BlockSemantics& after,
                            const CheckOptions& opts, Backend backend) {
    auto start = std::chrono::steady_clock::now();
    auto finish = [&](EquivResult r) {
        r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                   .count();
        r.backend = backend;
        return r;
    };

    // Taint-aware comparison first: divergence on a bit the original program
    // defines is a semantic bug regardless of mode.
    Comparison aware(before, after, Mode::TaintAware);
    BackendOutcome aw = solve(aware, backend, opts);
    if (aw.kind == BackendOutcome::Kind::Unknown) {
        EquivResult r;
        r.verdict = EquivResult::Verdict::Unknown;
        r.note = aw.note;
        return finish(r);
    }
    if (aw.kind == BackendOutcome::Kind::Diff) {
        EquivResult r;
        r.verdict = EquivResult::Verdict::Inequivalent;
        r.cex = aware.counterexample(aw.witness);
        return finish(r);
    }

    // Defined bits agree; check whether undefined-value behavior shifted.
    Comparison strict(before, after, Mode::Strict);
    BackendOutcome st = solve(strict, backend, opts);
    if (st.kind == BackendOutcome::Kind::Diff) {
        EquivResult r;
        r.verdict = EquivResult::Verdict::UnstableOnly;
        r.cex = strict.counterexample(st.witness);
        return finish(r);
    }
    EquivResult r;
    r.verdict = EquivResult::Verdict::Equivalent;
    if (st.kind == BackendOutcome::Kind::Unknown)
        r.note = "unstable-code check skipped: " + st.note;
    return finish(r);
}

EquivResult brute_force_equiv(const BlockSemantics& before, const BlockSemantics& after,
                              int width_budget) {
    CheckOptions opts;
    opts.width_budget = width_budget;
    Comparison aware(before, after, Mode::TaintAware);
    if (aware.enum_bits() > width_budget) {
        EquivResult r;
        r.verdict = EquivResult::Verdict::Unknown;
        r.backend = Backend::BruteForce;
        r.note = "BudgetExceeded: " + std::to_string(aware.enum_bits()) + " bits > " +
                 std::to_string(width_budget);
        return r;
    }
    return check_on(before, after, opts, Backend::BruteForce);
}

EquivResult check_equivalence(const BlockSemantics& before, const BlockSemantics& after,
                              const CheckOptions& opts) {
    Backend backend = opts.backend;
    std::string cmd = opts.solver_cmd;
    if (backend == Backend::ExternalSolver) {
        if (cmd.empty()) {
            const char* env = std::getenv("GAUNTLET_SOLVER");
            if (env) cmd = env;
        }
        if (cmd.empty()) {
            // SolverUnavailable: fall back to brute force within budget.
            Comparison aware(before, after, Mode::TaintAware);
            if (aware.enum_bits() <= opts.width_budget) {
                EquivResult r = check_on(before, after, opts, Backend::BruteForce);
                r.note = r.note.empty() ? "solver unavailable, used brute force" : r.note;
                return r;
            }
            EquivResult r;
            r.verdict = EquivResult::Verdict::Unknown;
            r.backend = Backend::ExternalSolver;
            r.note = "SolverUnavailable and instance exceeds brute-force budget";
            return r;
        }
        CheckOptions with_cmd = opts;
        with_cmd.solver_cmd = cmd;
        return check_on(before, after, with_cmd, Backend::ExternalSolver);
    }
    return check_on(before, after, opts, Backend::BruteForce);
}

// ----------------------------------------------------------- trace checks --

std::vector<Finding> validate_trace(const passes::PassTrace& trace, const CheckOptions& opts) {
    std::vector<Finding> findings;
    bool stop_semantic = false;
    for (size_t i = 0; i + 1 < trace.elements.size() && !stop_semantic; ++i) {
        const auto& before_el = trace.elements[i];
        const auto& after_el = trace.elements[i + 1];
        for (const auto& control : before_el.typed.program.pipeline()) {
            auto arena = std::make_shared<TermArena>();
            BlockSemantics sb = interpret_block_in(*arena, before_el.typed, control);
            sb.arena = arena;
            BlockSemantics sa = interpret_block_in(*arena, after_el.typed, control);
            sa.arena = arena;
            EquivResult r = check_equivalence(sb, sa, opts);
            if (r.verdict == EquivResult::Verdict::Inequivalent) {
                Finding f;
                f.kind = Finding::Kind::Semantic;
                f.pass = after_el.pass_name;
                f.control = control;
                f.detail = "outputs diverge";
                f.cex = r.cex;
                f.backend = to_string(r.backend);
                f.ms = r.ms;
                findings.push_back(std::move(f));
                stop_semantic = true;
                break;
            }
            if (r.verdict == EquivResult::Verdict::UnstableOnly) {
                Finding f;
                f.kind = Finding::Kind::Unstable;
                f.pass = after_el.pass_name;
                f.control = control;
                f.detail = "divergence only on undefined values";
                f.cex = r.cex;
                f.backend = to_string(r.backend);
                f.ms = r.ms;
                findings.push_back(std::move(f));
            } else if (r.verdict == EquivResult::Verdict::Unknown) {
                Finding f;
                f.kind = Finding::Kind::Semantic;
                f.pass = after_el.pass_name;
                f.control = control;
                f.detail = "verdict unknown: " + r.note;
                f.backend = to_string(r.backend);
                f.ms = r.ms;
                findings.push_back(std::move(f));
                stop_semantic = true;
                break;
            }
        }
    }
    if (trace.crash) {
        Finding f;
        f.kind = Finding::Kind::Crash;
        f.pass = trace.crash->pass;
        f.detail = trace.crash->message;
        findings.push_back(std::move(f));
    }
    if (trace.reparse_failure) {
        Finding f;
        f.kind = Finding::Kind::InvalidEmit;
        f.pass = trace.reparse_failure->pass;
        f.detail = trace.reparse_failure->detail;
        findings.push_back(std::move(f));
    }
    return findings;
}

}  // namespace minip4::equiv
