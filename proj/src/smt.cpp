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

#include "minip4/smt.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "minip4/equiv.h"
#include "minip4/term.h"

namespace minip4::smt {

namespace {
uint64_t mask_for(int width) { return width >= 64 ? ~0ull : ((1ull << width) - 1); }
}

// ------------------------------------------------------------- emit side ---

namespace {

using sem::TermArena;
using sem::TermId;
using sem::TermKind;
using sem::TermOp;

class ScriptWriter {
  public:
    ScriptWriter(const TermArena& arena, std::string& out) : arena_(arena), out_(out) {}

    void count_refs(TermId t) {
        if (t < 0) return;
        auto& c = refs_[t];
        if (++c > 1) return;  // children already counted on first visit
        const auto& n = arena_.node(t);
        count_refs(n.a);
        count_refs(n.b);
        count_refs(n.c);
    }

    // Emits define-funs for shared interior nodes, ascending id order.
    void emit_defs() {
        std::vector<TermId> shared;
        for (const auto& [id, c] : refs_) {
            const auto& n = arena_.node(id);
            bool leaf = n.kind == TermKind::BvConst || n.kind == TermKind::BoolConst ||
                        n.kind == TermKind::FreeVar;
            if (c > 1 && !leaf) shared.push_back(id);
        }
        std::sort(shared.begin(), shared.end());
        for (TermId id : shared) {
            std::string name = "_e" + std::to_string(def_names_.size());
            const auto& n = arena_.node(id);
            out_ += "(define-fun " + name + " () " + sort_of(id) + " ";
            append_expr(id, /*use_defs=*/true, /*self=*/id);
            out_ += ")\n";
            def_names_[id] = std::move(name);
        }
    }

    void append_expr(TermId t, bool use_defs = true, TermId self = sem::kNoTerm) {
        if (use_defs && t != self) {
            auto it = def_names_.find(t);
            if (it != def_names_.end()) {
                out_ += it->second;
                return;
            }
        }
        const auto& n = arena_.node(t);
        switch (n.kind) {
            case TermKind::BvConst:
                out_ += "(_ bv" + std::to_string(n.value) + " " + std::to_string(n.width) + ")";
                return;
            case TermKind::BoolConst:
                out_ += n.value ? "true" : "false";
                return;
            case TermKind::FreeVar:
                out_ += arena_.var_name(n.name);
                return;
            case TermKind::Ite:
                out_ += "(ite ";
                append_expr(n.a);
                out_ += " ";
                append_expr(n.b);
                out_ += " ";
                append_expr(n.c);
                out_ += ")";
                return;
            case TermKind::Extract:
                out_ += "((_ extract " + std::to_string(n.hi) + " " + std::to_string(n.lo) + ") ";
                append_expr(n.a);
                out_ += ")";
                return;
            case TermKind::Concat:
                out_ += "(concat ";
                append_expr(n.a);
                out_ += " ";
                append_expr(n.b);
                out_ += ")";
                return;
            case TermKind::Unary: {
                const char* f = n.op == TermOp::BvNot  ? "bvnot"
                                : n.op == TermOp::BvNeg ? "bvneg"
                                                        : "not";
                out_ += std::string("(") + f + " ";
                append_expr(n.a);
                out_ += ")";
                return;
            }
            case TermKind::Binary: append_binary(n); return;
        }
    }

    std::string sort_of(TermId t) const {
        const auto& n = arena_.node(t);
        return n.is_bool ? "Bool" : "(_ BitVec " + std::to_string(n.width) + ")";
    }

  private:
    void append_binary(const sem::TermNode& n) {
        const auto& an = arena_.node(n.a);
        const auto& bn = arena_.node(n.b);
        switch (n.op) {
            case TermOp::Shl:
            case TermOp::Shr: {
                const char* f = n.op == TermOp::Shl ? "bvshl" : "bvlshr";
                int wa = an.width, wb = bn.width;
                if (wb == wa) {
                    out_ += std::string("(") + f + " ";
                    append_expr(n.a);
                    out_ += " ";
                    append_expr(n.b);
                    out_ += ")";
                } else if (wb < wa) {
                    out_ += std::string("(") + f + " ";
                    append_expr(n.a);
                    out_ += " ((_ zero_extend " + std::to_string(wa - wb) + ") ";
                    append_expr(n.b);
                    out_ += "))";
                } else {
                    // wide amount: anything >= wa shifts everything out
                    out_ += "(ite (bvuge ";
                    append_expr(n.b);
                    out_ += " (_ bv" + std::to_string(wa) + " " + std::to_string(wb) + ")) (_ bv0 " +
                            std::to_string(wa) + ") (" + f + " ";
                    append_expr(n.a);
                    out_ += " ((_ extract " + std::to_string(wa - 1) + " 0) ";
                    append_expr(n.b);
                    out_ += ")))";
                }
                return;
            }
            case TermOp::Ne:
                out_ += "(distinct ";
                append_expr(n.a);
                out_ += " ";
                append_expr(n.b);
                out_ += ")";
                return;
            default: break;
        }
        const char* f = nullptr;
        switch (n.op) {
            case TermOp::Add: f = "bvadd"; break;
            case TermOp::Sub: f = "bvsub"; break;
            case TermOp::Mul: f = "bvmul"; break;
            case TermOp::And: f = "bvand"; break;
            case TermOp::Or: f = "bvor"; break;
            case TermOp::Xor: f = "bvxor"; break;
            case TermOp::Eq: f = "="; break;
            case TermOp::Ult: f = "bvult"; break;
            case TermOp::Ule: f = "bvule"; break;
            case TermOp::Ugt: f = "bvugt"; break;
            case TermOp::Uge: f = "bvuge"; break;
            case TermOp::BoolAnd: f = "and"; break;
            case TermOp::BoolOr: f = "or"; break;
            default: throw InternalError("emit_smt: bad binary op");
        }
        out_ += std::string("(") + f + " ";
        append_expr(n.a);
        out_ += " ";
        append_expr(n.b);
        out_ += ")";
    }

    const TermArena& arena_;
    std::string& out_;
    std::unordered_map<TermId, int> refs_;
    std::unordered_map<TermId, std::string> def_names_;
};

}  // namespace

}  // namespace minip4::smt

namespace minip4::equiv {

std::string emit_smt(const Comparison& cmp) {
    const sem::TermArena& arena = cmp.arena();
    std::string out;
    out += "(set-logic QF_BV)\n";
    out += "; equivalence of " + cmp.before().control + " across one pass\n";

    smt::ScriptWriter w(arena, out);
    std::vector<sem::TermId> roots;
    for (const auto& fp : cmp.fields()) {
        if (fp.cmp_mask == 0) continue;
        roots.push_back(fp.before_term);
        roots.push_back(fp.after_term);
        if (fp.header_pair >= 0) {
            roots.push_back(cmp.headers()[fp.header_pair].before_valid);
            roots.push_back(cmp.headers()[fp.header_pair].after_valid);
        }
    }
    for (const auto& hp : cmp.headers()) {
        if (!hp.compared) continue;
        roots.push_back(hp.before_valid);
        roots.push_back(hp.after_valid);
    }
    for (sem::TermId r : roots) w.count_refs(r);

    for (sem::TermId v : cmp.enum_vars()) {
        const auto& n = arena.node(v);
        out += "(declare-const " + arena.var_name(n.name) + " " +
               (n.is_bool ? std::string("Bool")
                          : "(_ BitVec " + std::to_string(n.width) + ")") +
               ")\n";
    }
    w.emit_defs();

    out += "(assert (or false";
    for (const auto& hp : cmp.headers()) {
        if (!hp.compared) continue;
        if (hp.before_valid == hp.after_valid) continue;
        out += "\n    (distinct ";
        w.append_expr(hp.before_valid);
        out += " ";
        w.append_expr(hp.after_valid);
        out += ")";
    }
    for (const auto& fp : cmp.fields()) {
        if (fp.cmp_mask == 0) continue;
        if (fp.before_term == fp.after_term) continue;
        uint64_t full = smt::mask_for(fp.width);
        bool guard = fp.header_pair >= 0;
        out += "\n    ";
        if (guard) {
            const auto& hp = cmp.headers()[fp.header_pair];
            out += "(and ";
            w.append_expr(hp.before_valid);
            out += " ";
            w.append_expr(hp.after_valid);
            out += " ";
        }
        if (fp.cmp_mask == full) {
            out += "(distinct ";
            w.append_expr(fp.before_term);
            out += " ";
            w.append_expr(fp.after_term);
            out += ")";
        } else {
            std::string m =
                "(_ bv" + std::to_string(fp.cmp_mask) + " " + std::to_string(fp.width) + ")";
            out += "(distinct (bvand ";
            w.append_expr(fp.before_term);
            out += " " + m + ") (bvand ";
            w.append_expr(fp.after_term);
            out += " " + m + "))";
        }
        if (guard) out += ")";
    }
    out += "))\n";
    return out;
}

}  // namespace minip4::equiv

namespace minip4::smt {

// ---------------------------------------------------------- solver driver --

namespace {

struct Subprocess {
    pid_t pid = -1;
    int in_fd = -1;   // write to child stdin
    int out_fd = -1;  // read from child stdout

    bool start(const std::string& cmd) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) return false;
        pid = fork();
        if (pid < 0) return false;
        if (pid == 0) {
            dup2(to_child[0], 0);
            dup2(from_child[1], 1);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", cmd.c_str(), (char*)nullptr);
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd = to_child[1];
        out_fd = from_child[0];
        return true;
    }

    bool write_all(const std::string& data) {
        size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(in_fd, data.data() + off, data.size() - off);
            if (n <= 0) return false;
            off += static_cast<size_t>(n);
        }
        return true;
    }

    // Reads until `pred` says the accumulated text is complete or the
    // deadline passes.
    template <typename Pred>
    bool read_until(std::string& buf, Pred pred,
                    std::chrono::steady_clock::time_point deadline) {
        char tmp[4096];
        while (!pred(buf)) {
            auto now = std::chrono::steady_clock::now();
            if (now >= deadline) return false;
            int ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
            struct pollfd pfd{out_fd, POLLIN, 0};
            int pr = ::poll(&pfd, 1, ms);
            if (pr <= 0) return false;
            ssize_t n = ::read(out_fd, tmp, sizeof tmp);
            if (n <= 0) return false;
            buf.append(tmp, static_cast<size_t>(n));
        }
        return true;
    }

    void finish() {
        if (in_fd >= 0) close(in_fd);
        if (out_fd >= 0) close(out_fd);
        if (pid > 0) {
            int status = 0;
            if (waitpid(pid, &status, WNOHANG) == 0) {
                kill(pid, SIGKILL);
                waitpid(pid, &status, 0);
            }
        }
        pid = -1;
        in_fd = out_fd = -1;
    }

    ~Subprocess() { finish(); }
};

// --------------------------------------------------------- sexp utilities --

struct Sexp {
    bool atom = true;
    std::string text;
    std::vector<Sexp> items;
};

struct SexpReader {
    std::istream& in;

    int skip_ws() {
        int c;
        while ((c = in.peek()) != EOF) {
            if (c == ';') {
                while ((c = in.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                in.get();
                continue;
            }
            break;
        }
        return in.peek();
    }

    // Reads one s-expression; false on EOF.
    bool read(Sexp& out) {
        int c = skip_ws();
        if (c == EOF) return false;
        if (c == '(') {
            in.get();
            out.atom = false;
            out.items.clear();
            while (true) {
                c = skip_ws();
                if (c == EOF) return false;
                if (c == ')') {
                    in.get();
                    return true;
                }
                Sexp child;
                if (!read(child)) return false;
                out.items.push_back(std::move(child));
            }
        }
        out.atom = true;
        out.text.clear();
        if (c == '|') {
            in.get();
            while ((c = in.get()) != EOF && c != '|') out.text += static_cast<char>(c);
            return true;
        }
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '(' && c != ')') {
            out.text += static_cast<char>(in.get());
        }
        return !out.text.empty();
    }
};

bool parse_value_atom(const Sexp& s, uint64_t& out) {
    if (s.atom) {
        const std::string& t = s.text;
        if (t == "true") { out = 1; return true; }
        if (t == "false") { out = 0; return true; }
        if (t.size() > 2 && t[0] == '#' && t[1] == 'x') {
            out = std::strtoull(t.c_str() + 2, nullptr, 16);
            return true;
        }
        if (t.size() > 2 && t[0] == '#' && t[1] == 'b') {
            out = std::strtoull(t.c_str() + 2, nullptr, 2);
            return true;
        }
        return false;
    }
    // (_ bvN W)
    if (s.items.size() == 3 && s.items[0].atom && s.items[0].text == "_" && s.items[1].atom &&
        s.items[1].text.rfind("bv", 0) == 0) {
        out = std::strtoull(s.items[1].text.c_str() + 2, nullptr, 10);
        return true;
    }
    return false;
}

}  // namespace

SolverResult run_solver(const std::string& cmd, const std::string& script,
                        const std::vector<std::string>& value_names, int timeout_ms) {
    SolverResult result;
    Subprocess proc;
    if (!proc.start(cmd)) {
        result.status = SolverResult::Status::Error;
        result.error = "failed to start solver: " + cmd;
        return result;
    }
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    if (!proc.write_all(script) || !proc.write_all("(check-sat)\n")) {
        result.error = "failed to write to solver";
        return result;
    }
    std::string buf;
    auto has_answer = [](const std::string& b) {
        return b.find("sat") != std::string::npos || b.find("unknown") != std::string::npos ||
               b.find("error") != std::string::npos;
    };
    if (!proc.read_until(buf, has_answer, deadline)) {
        result.error = "solver timeout";
        return result;
    }
    if (buf.find("error") != std::string::npos) {
        result.error = "solver error: " + buf;
        return result;
    }
    bool unsat = buf.find("unsat") != std::string::npos;
    bool unknown = !unsat && buf.find("unknown") != std::string::npos;
    if (unsat) {
        result.status = SolverResult::Status::Unsat;
        proc.write_all("(exit)\n");
        return result;
    }
    if (unknown) {
        result.status = SolverResult::Status::Unknown;
        proc.write_all("(exit)\n");
        return result;
    }
    // sat: fetch the model
    std::string q = "(get-value (";
    for (size_t i = 0; i < value_names.size(); ++i) {
        if (i) q += " ";
        q += value_names[i];
    }
    q += "))\n(exit)\n";
    if (!proc.write_all(q)) {
        result.error = "failed to query model";
        return result;
    }
    std::string vbuf;
    auto balanced = [](const std::string& b) {
        int depth = 0;
        bool any = false;
        for (char c : b) {
            if (c == '(') { ++depth; any = true; }
            if (c == ')') --depth;
            if (any && depth == 0) return true;
        }
        return false;
    };
    if (!proc.read_until(vbuf, balanced, deadline)) {
        result.error = "timeout reading model";
        return result;
    }
    std::istringstream vs(vbuf);
    SexpReader reader{vs};
    Sexp top;
    if (!reader.read(top) || top.atom) {
        result.error = "malformed model: " + vbuf;
        return result;
    }
    for (const Sexp& pair : top.items) {
        if (pair.atom || pair.items.size() != 2 || !pair.items[0].atom) continue;
        uint64_t v = 0;
        if (parse_value_atom(pair.items[1], v)) result.model[pair.items[0].text] = v;
    }
    result.status = SolverResult::Status::Sat;
    return result;
}

// ------------------------------------------------------------ mini solver --

namespace {

struct MiniSolver {
    sem::TermArena arena;
    std::vector<sem::TermId> decls;  // declaration order
    std::unordered_map<std::string, sem::TermId> defs;
    std::vector<sem::TermId> asserts;
    std::map<std::string, uint64_t> model;
    bool has_model = false;
    int max_bits;

    explicit MiniSolver(int max_bits) : max_bits(max_bits) {}

    sem::TermId build(const Sexp& s) {
        using sem::TermOp;
        if (s.atom) {
            const std::string& t = s.text;
            if (t == "true") return arena.bool_const(true);
            if (t == "false") return arena.bool_const(false);
            sem::TermId v = arena.lookup_var(t);
            if (v != sem::kNoTerm) return v;
            auto it = defs.find(t);
            if (it != defs.end()) return it->second;
            throw InternalError("smt-solve: unknown symbol " + t);
        }
        const auto& items = s.items;
        MINIP4_CHECK(!items.empty(), "smt-solve: empty application");
        // (_ bvN W)
        if (items[0].atom && items[0].text == "_" && items.size() == 3 &&
            items[1].text.rfind("bv", 0) == 0) {
            uint64_t v = std::strtoull(items[1].text.c_str() + 2, nullptr, 10);
            int w = std::atoi(items[2].text.c_str());
            return arena.bv_const(w, v);
        }
        // ((_ extract hi lo) x) / ((_ zero_extend k) x)
        if (!items[0].atom && items[0].items.size() >= 2 && items[0].items[0].text == "_") {
            const std::string& f = items[0].items[1].text;
            if (f == "extract") {
                int hi = std::atoi(items[0].items[2].text.c_str());
                int lo = std::atoi(items[0].items[3].text.c_str());
                return arena.extract(hi, lo, build(items[1]));
            }
            if (f == "zero_extend") {
                int k = std::atoi(items[0].items[2].text.c_str());
                sem::TermId x = build(items[1]);
                return arena.resize(x, arena.node(x).width + k);
            }
            throw InternalError("smt-solve: unsupported indexed op " + f);
        }
        const std::string& f = items[0].text;
        auto arg = [&](size_t i) { return build(items[i]); };
        if (f == "ite") return arena.ite(arg(1), arg(2), arg(3));
        if (f == "concat") return arena.concat(arg(1), arg(2));
        if (f == "bvnot") return arena.unary(TermOp::BvNot, arg(1));
        if (f == "bvneg") return arena.unary(TermOp::BvNeg, arg(1));
        if (f == "not") return arena.unary(TermOp::BoolNot, arg(1));
        static const std::unordered_map<std::string, TermOp> kBin = {
            {"bvadd", TermOp::Add}, {"bvsub", TermOp::Sub}, {"bvmul", TermOp::Mul},
            {"bvand", TermOp::And}, {"bvor", TermOp::Or},   {"bvxor", TermOp::Xor},
            {"bvshl", TermOp::Shl}, {"bvlshr", TermOp::Shr}, {"bvult", TermOp::Ult},
            {"bvule", TermOp::Ule}, {"bvugt", TermOp::Ugt}, {"bvuge", TermOp::Uge},
        };
        auto bit = kBin.find(f);
        if (bit != kBin.end()) {
            sem::TermId a = arg(1), b = arg(2);
            if (bit->second == TermOp::Shl || bit->second == TermOp::Shr) {
                // widths may differ in source; our evaluator allows that
                return arena.binary(bit->second, a, b);
            }
            return arena.binary(bit->second, a, b);
        }
        if (f == "=" || f == "distinct") {
            sem::TermId acc = sem::kNoTerm;
            // chainable; we only emit binary forms but accept n-ary
            for (size_t i = 1; i + 1 < items.size(); ++i) {
                sem::TermId one = arena.binary(TermOp::Eq, build(items[i]), build(items[i + 1]));
                acc = acc == sem::kNoTerm ? one : arena.binary(TermOp::BoolAnd, acc, one);
            }
            if (f == "distinct") return arena.unary(TermOp::BoolNot, acc);
            return acc;
        }
        if (f == "and" || f == "or") {
            sem::TermId acc = arg(1);
            for (size_t i = 2; i < items.size(); ++i)
                acc = arena.binary(f == "and" ? TermOp::BoolAnd : TermOp::BoolOr, acc, arg(i));
            return acc;
        }
        throw InternalError("smt-solve: unsupported operator " + f);
    }

    void check_sat(std::ostream& out) {
        has_model = false;
        model.clear();
        sem::TermId formula = arena.bool_const(true);
        for (sem::TermId a : asserts)
            formula = arena.binary(sem::TermOp::BoolAnd, formula, a);
        std::vector<sem::TermId> vars = arena.free_vars_of({formula});
        int bits = 0;
        for (sem::TermId v : vars) {
            const auto& n = arena.node(v);
            bits += n.is_bool ? 1 : n.width;
        }
        if (bits > max_bits) {
            out << "unknown\n" << std::flush;
            return;
        }
        sem::ConcreteEval eval(arena, {formula});
        uint64_t total = 1ull << bits;
        for (uint64_t counter = 0; counter < total; ++counter) {
            uint64_t rem = counter;
            eval.clear_vars();
            for (sem::TermId v : vars) {
                const auto& n = arena.node(v);
                int w = n.is_bool ? 1 : n.width;
                eval.set_var(v, rem & mask_for(w));
                rem >>= w;
            }
            eval.run();
            if (eval.value_of(formula)) {
                has_model = true;
                uint64_t rebits = counter;
                for (sem::TermId v : vars) {
                    const auto& n = arena.node(v);
                    int w = n.is_bool ? 1 : n.width;
                    model[arena.var_name(n.name)] = rebits & mask_for(w);
                    rebits >>= w;
                }
                out << "sat\n" << std::flush;
                return;
            }
        }
        out << "unsat\n" << std::flush;
    }

    void get_value(const Sexp& args, std::ostream& out) {
        out << "(";
        for (size_t i = 0; i < args.items.size(); ++i) {
            const std::string& name = args.items[i].text;
            sem::TermId v = arena.lookup_var(name);
            uint64_t value = 0;
            auto it = model.find(name);
            if (it != model.end()) value = it->second;
            if (i) out << " ";
            out << "(" << name << " ";
            if (v != sem::kNoTerm && arena.node(v).is_bool) {
                out << (value ? "true" : "false");
            } else {
                int w = v != sem::kNoTerm ? arena.node(v).width : 64;
                out << "#b";
                for (int b = w - 1; b >= 0; --b) out << ((value >> b) & 1);
            }
            out << ")";
        }
        out << ")\n" << std::flush;
    }
};

}  // namespace

int solve_stream(std::istream& in, std::ostream& out, int max_bits) {
    MiniSolver solver(max_bits);
    SexpReader reader{in};
    Sexp cmd;
    while (reader.read(cmd)) {
        if (cmd.atom || cmd.items.empty() || !cmd.items[0].atom) continue;
        const std::string& head = cmd.items[0].text;
        try {
            if (head == "set-logic" || head == "set-option" || head == "set-info") {
                continue;
            } else if (head == "declare-const" || head == "declare-fun") {
                const std::string& name = cmd.items[1].text;
                const Sexp& sort = cmd.items.back();
                if (sort.atom && sort.text == "Bool") {
                    solver.decls.push_back(solver.arena.free_bool_var(name, false));
                } else {
                    int w = std::atoi(sort.items[2].text.c_str());
                    solver.decls.push_back(solver.arena.free_var(name, w, false));
                }
            } else if (head == "define-fun") {
                // (define-fun name () sort body)
                solver.defs[cmd.items[1].text] = solver.build(cmd.items[4]);
            } else if (head == "assert") {
                solver.asserts.push_back(solver.build(cmd.items[1]));
            } else if (head == "check-sat") {
                solver.check_sat(out);
            } else if (head == "get-value") {
                solver.get_value(cmd.items[1], out);
            } else if (head == "exit") {
                return 0;
            } else {
                out << "(error \"unsupported command " << head << "\")\n" << std::flush;
            }
        } catch (const std::exception& e) {
            out << "(error \"" << e.what() << "\")\n" << std::flush;
            return 1;
        }
    }
    return 0;
}

}  // namespace minip4::smt
