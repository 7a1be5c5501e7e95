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

#include "minip4/term.h"

#include <algorithm>
#include <functional>

namespace minip4::sem {

namespace {

uint64_t mask_for(int width) { return width >= 64 ? ~0ull : ((1ull << width) - 1); }

uint64_t hash_node(const TermNode& n) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(n.kind));
    mix(static_cast<uint64_t>(n.op));
    mix(n.is_bool);
    mix(static_cast<uint64_t>(n.width));
    mix(static_cast<uint64_t>(n.hi));
    mix(static_cast<uint64_t>(n.lo));
    mix(static_cast<uint64_t>(n.a));
    mix(static_cast<uint64_t>(n.b));
    mix(static_cast<uint64_t>(n.c));
    mix(n.value);
    mix(static_cast<uint64_t>(n.name));
    return h;
}

bool same_node(const TermNode& x, const TermNode& y) {
    return x.kind == y.kind && x.op == y.op && x.is_bool == y.is_bool && x.width == y.width &&
           x.hi == y.hi && x.lo == y.lo && x.a == y.a && x.b == y.b && x.c == y.c &&
           x.value == y.value && x.name == y.name;
}

uint64_t apply_binary(TermOp op, uint64_t a, uint64_t b, int width) {
    uint64_t m = mask_for(width);
    switch (op) {
        case TermOp::Add: return (a + b) & m;
        case TermOp::Sub: return (a - b) & m;
        case TermOp::Mul: return (a * b) & m;
        case TermOp::And: return a & b;
        case TermOp::Or: return a | b;
        case TermOp::Xor: return a ^ b;
        case TermOp::Shl: return b >= static_cast<uint64_t>(width) ? 0 : (a << b) & m;
        case TermOp::Shr: return b >= static_cast<uint64_t>(width) ? 0 : (a >> b);
        case TermOp::Eq: return a == b;
        case TermOp::Ne: return a != b;
        case TermOp::Ult: return a < b;
        case TermOp::Ule: return a <= b;
        case TermOp::Ugt: return a > b;
        case TermOp::Uge: return a >= b;
        case TermOp::BoolAnd: return a & b;
        case TermOp::BoolOr: return a | b;
        default: throw InternalError("apply_binary: bad op");
    }
}

bool binary_yields_bool(TermOp op) {
    switch (op) {
        case TermOp::Eq:
        case TermOp::Ne:
        case TermOp::Ult:
        case TermOp::Ule:
        case TermOp::Ugt:
        case TermOp::Uge:
        case TermOp::BoolAnd:
        case TermOp::BoolOr: return true;
        default: return false;
    }
}

const char* op_symbol(TermOp op) {
    switch (op) {
        case TermOp::BvNot: return "~";
        case TermOp::BvNeg: return "-";
        case TermOp::BoolNot: return "!";
        case TermOp::Add: return "+";
        case TermOp::Sub: return "-";
        case TermOp::Mul: return "*";
        case TermOp::And: return "&";
        case TermOp::Or: return "|";
        case TermOp::Xor: return "^";
        case TermOp::Shl: return "<<";
        case TermOp::Shr: return ">>";
        case TermOp::Eq: return "==";
        case TermOp::Ne: return "!=";
        case TermOp::Ult: return "<";
        case TermOp::Ule: return "<=";
        case TermOp::Ugt: return ">";
        case TermOp::Uge: return ">=";
        case TermOp::BoolAnd: return "&&";
        case TermOp::BoolOr: return "||";
        default: return "?";
    }
}

}  // namespace

TermId TermArena::intern(TermNode n) {
    uint64_t h = hash_node(n);
    auto& bucket = index_[h];
    for (TermId id : bucket) {
        if (same_node(nodes_[id], n)) return id;
    }
    TermId id = static_cast<TermId>(nodes_.size());
    nodes_.push_back(n);
    bucket.push_back(id);
    return id;
}

TermId TermArena::bv_const(int width, uint64_t value) {
    MINIP4_CHECK(width >= 1 && width <= 64, "bv_const width out of range");
    TermNode n;
    n.kind = TermKind::BvConst;
    n.width = static_cast<int16_t>(width);
    n.value = value & mask_for(width);
    return intern(n);
}

TermId TermArena::bool_const(bool value) {
    TermNode n;
    n.kind = TermKind::BoolConst;
    n.is_bool = true;
    n.value = value ? 1 : 0;
    return intern(n);
}

TermId TermArena::free_var(const std::string& name, int width, bool tainted) {
    std::string use = name;
    for (int bump = 2;; ++bump) {
        auto it = var_ids_.find(use);
        if (it == var_ids_.end()) break;
        const TermNode& ex = nodes_[it->second];
        if (ex.width == width && !ex.is_bool) return it->second;
        // Same name, different shape (e.g. taint counters colliding across two
        // programs sharing an arena): keep them distinct, deterministically.
        use = name + "!" + std::to_string(bump);
    }
    MINIP4_CHECK(width >= 1 && width <= 64, "free_var width out of range");
    TermNode n;
    n.kind = TermKind::FreeVar;
    n.width = static_cast<int16_t>(width);
    n.tainted_source = tainted;
    n.name = static_cast<int32_t>(var_names_.size());
    var_names_.push_back(use);
    TermId id = intern(n);
    var_ids_[use] = id;
    return id;
}

TermId TermArena::free_bool_var(const std::string& name, bool tainted) {
    std::string use = name;
    for (int bump = 2;; ++bump) {
        auto it = var_ids_.find(use);
        if (it == var_ids_.end()) break;
        if (nodes_[it->second].is_bool) return it->second;
        use = name + "!" + std::to_string(bump);
    }
    TermNode n;
    n.kind = TermKind::FreeVar;
    n.is_bool = true;
    n.tainted_source = tainted;
    n.name = static_cast<int32_t>(var_names_.size());
    var_names_.push_back(use);
    TermId id = intern(n);
    var_ids_[use] = id;
    return id;
}

TermId TermArena::lookup_var(const std::string& name) const {
    auto it = var_ids_.find(name);
    return it == var_ids_.end() ? kNoTerm : it->second;
}

TermId TermArena::ite(TermId cond, TermId a, TermId b) {
    const TermNode& cn = nodes_[cond];
    MINIP4_CHECK(cn.is_bool, "ite condition must be bool");
    const TermNode& an = nodes_[a];
    const TermNode& bn = nodes_[b];
    MINIP4_CHECK(an.is_bool == bn.is_bool && an.width == bn.width, "ite arm shape mismatch");
    if (cn.kind == TermKind::BoolConst) return cn.value ? a : b;
    if (a == b) return a;
    if (an.is_bool && an.kind == TermKind::BoolConst && bn.kind == TermKind::BoolConst) {
        // arms are distinct constants here: (c ? true : false) and its flip
        return an.value ? cond : unary(TermOp::BoolNot, cond);
    }
    TermNode n;
    n.kind = TermKind::Ite;
    n.is_bool = an.is_bool;
    n.width = an.width;
    n.a = cond;
    n.b = a;
    n.c = b;
    return intern(n);
}

TermId TermArena::extract(int hi, int lo, TermId t) {
    const TermNode& tn = nodes_[t];
    MINIP4_CHECK(!tn.is_bool && 0 <= lo && lo <= hi && hi < tn.width, "extract out of range");
    if (lo == 0 && hi == tn.width - 1) return t;
    int w = hi - lo + 1;
    if (tn.kind == TermKind::BvConst) return bv_const(w, tn.value >> lo);
    if (tn.kind == TermKind::Extract) return extract(tn.lo + hi, tn.lo + lo, tn.a);
    if (tn.kind == TermKind::Concat) {
        int lo_width = nodes_[tn.b].width;
        if (hi < lo_width) return extract(hi, lo, tn.b);
        if (lo >= lo_width) return extract(hi - lo_width, lo - lo_width, tn.a);
    }
    TermNode n;
    n.kind = TermKind::Extract;
    n.width = static_cast<int16_t>(w);
    n.hi = static_cast<int16_t>(hi);
    n.lo = static_cast<int16_t>(lo);
    n.a = t;
    return intern(n);
}

TermId TermArena::concat(TermId hi_part, TermId lo_part) {
    const TermNode& a = nodes_[hi_part];
    const TermNode& b = nodes_[lo_part];
    MINIP4_CHECK(!a.is_bool && !b.is_bool, "concat requires bit-vectors");
    MINIP4_CHECK(a.width + b.width <= 64, "concat wider than 64 bits");
    if (a.kind == TermKind::BvConst && b.kind == TermKind::BvConst)
        return bv_const(a.width + b.width, (a.value << b.width) | b.value);
    TermNode n;
    n.kind = TermKind::Concat;
    n.width = static_cast<int16_t>(a.width + b.width);
    n.a = hi_part;
    n.b = lo_part;
    return intern(n);
}

TermId TermArena::unary(TermOp op, TermId a) {
    const TermNode& an = nodes_[a];
    if (op == TermOp::BoolNot) {
        MINIP4_CHECK(an.is_bool, "! requires bool");
        if (an.kind == TermKind::BoolConst) return bool_const(!an.value);
        if (an.kind == TermKind::Unary && an.op == TermOp::BoolNot) return an.a;
        TermNode n;
        n.kind = TermKind::Unary;
        n.op = op;
        n.is_bool = true;
        n.a = a;
        return intern(n);
    }
    MINIP4_CHECK(!an.is_bool, "bit operator on bool");
    if (an.kind == TermKind::BvConst) {
        uint64_t m = mask_for(an.width);
        uint64_t v = op == TermOp::BvNot ? (~an.value & m) : ((~an.value + 1) & m);
        return bv_const(an.width, v);
    }
    TermNode n;
    n.kind = TermKind::Unary;
    n.op = op;
    n.width = an.width;
    n.a = a;
    return intern(n);
}

TermId TermArena::binary(TermOp op, TermId a, TermId b) {
    const TermNode& an = nodes_[a];
    const TermNode& bn = nodes_[b];
    bool result_bool = binary_yields_bool(op);
    if (op == TermOp::BoolAnd || op == TermOp::BoolOr) {
        MINIP4_CHECK(an.is_bool && bn.is_bool, "boolean operator on bit-vectors");
    } else if (op == TermOp::Eq || op == TermOp::Ne) {
        MINIP4_CHECK(an.is_bool == bn.is_bool && an.width == bn.width, "eq shape mismatch");
    } else if (op == TermOp::Shl || op == TermOp::Shr) {
        MINIP4_CHECK(!an.is_bool && !bn.is_bool, "shift requires bit-vectors");
    } else {
        MINIP4_CHECK(!an.is_bool && !bn.is_bool && an.width == bn.width,
                     "binary width mismatch");
    }

    bool const_a = an.kind == TermKind::BvConst || an.kind == TermKind::BoolConst;
    bool const_b = bn.kind == TermKind::BvConst || bn.kind == TermKind::BoolConst;
    if (const_a && const_b) {
        uint64_t v = apply_binary(op, an.value, bn.value, an.width);
        return result_bool ? bool_const(v != 0) : bv_const(an.width, v);
    }
    if (op == TermOp::Eq && a == b) return bool_const(true);
    if (op == TermOp::Ne && a == b) return bool_const(false);
    if (op == TermOp::BoolAnd) {
        if (const_a) return an.value ? b : bool_const(false);
        if (const_b) return bn.value ? a : bool_const(false);
        if (a == b) return a;
    }
    if (op == TermOp::BoolOr) {
        if (const_a) return an.value ? bool_const(true) : b;
        if (const_b) return bn.value ? bool_const(true) : a;
        if (a == b) return a;
    }
    TermNode n;
    n.kind = TermKind::Binary;
    n.op = op;
    n.is_bool = result_bool;
    n.width = result_bool ? 0 : an.width;
    n.a = a;
    n.b = b;
    return intern(n);
}

TermId TermArena::resize(TermId t, int new_width) {
    const TermNode& tn = nodes_[t];
    MINIP4_CHECK(!tn.is_bool, "resize requires a bit-vector");
    if (tn.width == new_width) return t;
    if (new_width < tn.width) return extract(new_width - 1, 0, t);
    return concat(bv_const(new_width - tn.width, 0), t);
}

TermId TermArena::bool_to_bit(TermId b) {
    return ite(b, bv_const(1, 1), bv_const(1, 0));
}

TermId TermArena::bit_to_bool(TermId t) {
    MINIP4_CHECK(nodes_[t].width == 1, "bit_to_bool requires bit<1>");
    return binary(TermOp::Eq, t, bv_const(1, 1));
}

std::vector<TermId> TermArena::free_vars_of(const std::vector<TermId>& roots) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<TermId> stack(roots.begin(), roots.end());
    std::vector<TermId> vars;
    while (!stack.empty()) {
        TermId id = stack.back();
        stack.pop_back();
        if (id < 0 || seen[id]) continue;
        seen[id] = true;
        const TermNode& n = nodes_[id];
        if (n.kind == TermKind::FreeVar) vars.push_back(id);
        if (n.a != kNoTerm) stack.push_back(n.a);
        if (n.b != kNoTerm) stack.push_back(n.b);
        if (n.c != kNoTerm) stack.push_back(n.c);
    }
    std::sort(vars.begin(), vars.end());
    return vars;
}

uint64_t TermArena::taint_bits(TermId t) {
    if (taint_known_.size() < nodes_.size()) {
        taint_known_.resize(nodes_.size(), false);
        taint_memo_.resize(nodes_.size(), 0);
    }
    if (taint_known_[t]) return taint_memo_[t];
    const TermNode& n = nodes_[t];
    uint64_t full = n.is_bool ? 1 : n.width_mask();
    uint64_t result = 0;
    switch (n.kind) {
        case TermKind::BvConst:
        case TermKind::BoolConst: result = 0; break;
        case TermKind::FreeVar: result = n.tainted_source ? full : 0; break;
        case TermKind::Ite:
            result = taint_bits(n.a) ? full : (taint_bits(n.b) | taint_bits(n.c));
            break;
        case TermKind::Extract:
            result = (taint_bits(n.a) >> n.lo) & n.width_mask();
            break;
        case TermKind::Concat:
            result = (taint_bits(n.a) << nodes_[n.b].width) | taint_bits(n.b);
            break;
        case TermKind::Unary:
            if (n.op == TermOp::BvNeg) {
                result = taint_bits(n.a) ? full : 0;  // carries spread
            } else {
                result = taint_bits(n.a);
            }
            break;
        case TermKind::Binary: {
            uint64_t ta = taint_bits(n.a);
            uint64_t tb = taint_bits(n.b);
            switch (n.op) {
                case TermOp::And:
                case TermOp::Or:
                case TermOp::Xor: result = ta | tb; break;
                case TermOp::Shl:
                case TermOp::Shr: {
                    const TermNode& amount = nodes_[n.b];
                    if (tb) {
                        result = (ta | tb) ? full : 0;
                    } else if (amount.kind == TermKind::BvConst) {
                        uint64_t shifted = n.op == TermOp::Shl
                                               ? (amount.value >= 64 ? 0 : ta << amount.value)
                                               : (amount.value >= 64 ? 0 : ta >> amount.value);
                        result = shifted & n.width_mask();
                    } else {
                        result = ta ? full : 0;
                    }
                    break;
                }
                default:
                    // arithmetic carries and comparison results mix all bits
                    result = (ta | tb) ? full : 0;
                    break;
            }
            break;
        }
    }
    taint_memo_[t] = result & full;
    taint_known_[t] = true;
    return taint_memo_[t];
}

TermId TermArena::substitute(TermId root, const std::unordered_map<TermId, TermId>& repl) {
    std::unordered_map<TermId, TermId> memo;
    std::function<TermId(TermId)> go = [&](TermId id) -> TermId {
        auto r = repl.find(id);
        if (r != repl.end()) return r->second;
        auto m = memo.find(id);
        if (m != memo.end()) return m->second;
        const TermNode n = nodes_[id];  // copy: builders may reallocate nodes_
        TermId out = id;
        switch (n.kind) {
            case TermKind::BvConst:
            case TermKind::BoolConst:
            case TermKind::FreeVar: out = id; break;
            case TermKind::Ite: out = ite(go(n.a), go(n.b), go(n.c)); break;
            case TermKind::Extract: out = extract(n.hi, n.lo, go(n.a)); break;
            case TermKind::Concat: out = concat(go(n.a), go(n.b)); break;
            case TermKind::Unary: out = unary(n.op, go(n.a)); break;
            case TermKind::Binary: out = binary(n.op, go(n.a), go(n.b)); break;
        }
        memo[id] = out;
        return out;
    };
    return go(root);
}

std::string TermArena::render_flat(TermId t) const {
    const TermNode& n = nodes_[t];
    switch (n.kind) {
        case TermKind::BvConst: return std::to_string(n.value);
        case TermKind::BoolConst: return n.value ? "true" : "false";
        case TermKind::FreeVar: return var_names_[n.name];
        case TermKind::Ite:
            return "(" + render_flat(n.a) + " ? " + render_flat(n.b) + " : " + render_flat(n.c) +
                   ")";
        case TermKind::Extract:
            return render_flat(n.a) + "[" + std::to_string(n.hi) + ":" + std::to_string(n.lo) + "]";
        case TermKind::Concat: return "(" + render_flat(n.a) + " ++ " + render_flat(n.b) + ")";
        case TermKind::Unary: return std::string(op_symbol(n.op)) + render_flat(n.a);
        case TermKind::Binary:
            return "(" + render_flat(n.a) + " " + op_symbol(n.op) + " " + render_flat(n.b) + ")";
    }
    return "?";
}

std::string TermArena::render(TermId t, int indent) const {
    const TermNode& n = nodes_[t];
    std::string pad(indent * 4, ' ');
    if (n.kind == TermKind::Ite) {
        std::string out;
        out += pad + "if (" + render_flat(n.a) + ") :\n";
        const TermNode& then_n = nodes_[n.b];
        if (then_n.kind == TermKind::Ite) {
            out += render(n.b, indent + 1);
        } else {
            out += pad + "    " + render_flat(n.b) + "\n";
        }
        out += pad + "otherwise :\n";
        const TermNode& else_n = nodes_[n.c];
        if (else_n.kind == TermKind::Ite) {
            out += render(n.c, indent + 1);
        } else {
            out += pad + "    " + render_flat(n.c) + "\n";
        }
        return out;
    }
    return pad + render_flat(t) + "\n";
}

// ---------------------------------------------------------- ConcreteEval ---

ConcreteEval::ConcreteEval(const TermArena& arena, const std::vector<TermId>& roots)
    : arena_(arena) {
    std::vector<bool> seen(arena.size(), false);
    std::vector<TermId> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        TermId id = stack.back();
        stack.pop_back();
        if (id < 0 || seen[id]) continue;
        seen[id] = true;
        plan_.push_back(id);
        const TermNode& n = arena.node(id);
        if (n.kind == TermKind::FreeVar) vars_.push_back(id);
        if (n.a != kNoTerm) stack.push_back(n.a);
        if (n.b != kNoTerm) stack.push_back(n.b);
        if (n.c != kNoTerm) stack.push_back(n.c);
    }
    std::sort(plan_.begin(), plan_.end());
    std::sort(vars_.begin(), vars_.end());
    values_.assign(arena.size(), 0);
    has_value_.assign(arena.size(), 0);
}

void ConcreteEval::set_var(TermId var, uint64_t value) {
    const TermNode& n = arena_.node(var);
    values_[var] = n.is_bool ? (value & 1) : (value & n.width_mask());
    has_value_[var] = 1;
}

void ConcreteEval::clear_vars() {
    for (TermId v : vars_) has_value_[v] = 0;
}

void ConcreteEval::set_policy(uint64_t (*policy)(int, void*), void* ctx) {
    policy_ = policy;
    policy_ctx_ = ctx;
}

void ConcreteEval::run() {
    for (TermId id : plan_) {
        const TermNode& n = arena_.node(id);
        switch (n.kind) {
            case TermKind::BvConst:
            case TermKind::BoolConst: values_[id] = n.value; break;
            case TermKind::FreeVar:
                if (!has_value_[id]) {
                    if (n.tainted_source && policy_) {
                        values_[id] =
                            policy_(n.is_bool ? 0 : n.width, policy_ctx_) &
                            (n.is_bool ? 1 : n.width_mask());
                    } else {
                        throw MissingAssignment(arena_.var_name(n.name));
                    }
                }
                break;
            case TermKind::Ite: values_[id] = values_[n.a] ? values_[n.b] : values_[n.c]; break;
            case TermKind::Extract:
                values_[id] = (values_[n.a] >> n.lo) & n.width_mask();
                break;
            case TermKind::Concat:
                values_[id] = (values_[n.a] << arena_.node(n.b).width) | values_[n.b];
                break;
            case TermKind::Unary:
                switch (n.op) {
                    case TermOp::BvNot: values_[id] = ~values_[n.a] & n.width_mask(); break;
                    case TermOp::BvNeg: values_[id] = (~values_[n.a] + 1) & n.width_mask(); break;
                    case TermOp::BoolNot: values_[id] = !values_[n.a]; break;
                    default: throw InternalError("eval: bad unary op");
                }
                break;
            case TermKind::Binary:
                values_[id] = apply_binary(n.op, values_[n.a], values_[n.b],
                                           arena_.node(n.a).width);
                break;
        }
    }
}

}  // namespace minip4::sem
