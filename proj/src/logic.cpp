// Copyright 2026 The protomerge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "protomerge/logic.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "protomerge/error.hpp"
#include "protomerge/overloaded.hpp"

namespace protomerge {

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Valid: return "valid";
        case Verdict::Invalid: return "invalid";
        case Verdict::Undecidable: return "undecidable";
    }
    return "?";
}

namespace {

using i128 = __int128;

// Finite values always fit in int64, so finite products stay strictly below kInf.
constexpr i128 kInf = (static_cast<i128>(1) << 126) + 1;
constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr i128 kSmallRange = 4096;

bool is_inf(i128 v) { return v >= kInf || v <= -kInf; }

i128 sat_add(i128 x, i128 y) {
    if (is_inf(x)) return x;
    if (is_inf(y)) return y;
    return x + y;
}

i128 sat_neg(i128 x) { return -x; }

i128 sat_mul(i128 x, i128 y) {
    if (x == 0 || y == 0) return 0;
    if (is_inf(x) || is_inf(y)) return ((x > 0) == (y > 0)) ? kInf : -kInf;
    return x * y;
}

// Truncating division on extended integers; nullopt for inf / inf.
std::optional<i128> sat_div(i128 x, i128 y) {
    if (is_inf(y)) {
        if (is_inf(x)) return std::nullopt;
        return 0;
    }
    if (is_inf(x)) return ((x > 0) == (y > 0)) ? kInf : -kInf;
    return x / y;
}

struct Range {
    i128 lo = -kInf;
    i128 hi = kInf;

    bool empty() const { return lo > hi; }
    bool finite() const { return !is_inf(lo) && !is_inf(hi); }
    bool singleton() const { return lo == hi && finite(); }
    /// Number of values, or nullopt when unbounded.
    std::optional<i128> count() const {
        if (empty()) return 0;
        if (!finite()) return std::nullopt;
        return hi - lo + 1;
    }
};

Range hull(Range a, Range b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// ---------------------------------------------------------------------------
// Abstract index values

struct AbsInt {
    Range range;
    bool can_value = true;
    bool can_error = false;
};

AbsInt abs_top() { return {}; }

AbsInt abs_const(i128 v) { return {{v, v}, true, false}; }

AbsInt abs_error() { return {{1, 0}, false, true}; }

// Values outside int64 overflow at runtime; clip them and record the error.
AbsInt clip(AbsInt r) {
    if (!r.can_value) return r;
    if (!is_inf(r.range.lo) && r.range.lo < kMin64) {
        r.range.lo = kMin64;
        r.can_error = true;
    }
    if (!is_inf(r.range.hi) && r.range.hi > kMax64) {
        r.range.hi = kMax64;
        r.can_error = true;
    }
    if (!is_inf(r.range.lo) && r.range.lo > kMax64) r.can_value = false, r.can_error = true;
    if (!is_inf(r.range.hi) && r.range.hi < kMin64) r.can_value = false, r.can_error = true;
    return r;
}

AbsInt join(const AbsInt& a, const AbsInt& b) {
    AbsInt r;
    r.can_error = a.can_error || b.can_error;
    r.can_value = a.can_value || b.can_value;
    if (a.can_value && b.can_value) {
        r.range = hull(a.range, b.range);
    } else if (a.can_value) {
        r.range = a.range;
    } else if (b.can_value) {
        r.range = b.range;
    } else {
        r.range = {1, 0};
    }
    return r;
}

Range range_div(Range a, Range b) {
    // b excludes zero here.
    i128 corners_x[2] = {a.lo, a.hi};
    i128 corners_y[2] = {b.lo, b.hi};
    Range out{kInf, -kInf};
    for (i128 x : corners_x) {
        for (i128 y : corners_y) {
            auto q = sat_div(x, y);
            if (!q) return Range{};
            out.lo = std::min(out.lo, *q);
            out.hi = std::max(out.hi, *q);
        }
    }
    return out;
}

AbsInt arith(ArithOp op, const AbsInt& a, const AbsInt& b) {
    AbsInt r;
    r.can_error = a.can_error || b.can_error;
    r.can_value = a.can_value && b.can_value;
    if (!r.can_value) {
        r.range = {1, 0};
        return r;
    }
    switch (op) {
        case ArithOp::Add: r.range = {sat_add(a.range.lo, b.range.lo), sat_add(a.range.hi, b.range.hi)}; break;
        case ArithOp::Sub:
            r.range = {sat_add(a.range.lo, sat_neg(b.range.hi)), sat_add(a.range.hi, sat_neg(b.range.lo))};
            break;
        case ArithOp::Mul: {
            i128 c[4] = {sat_mul(a.range.lo, b.range.lo), sat_mul(a.range.lo, b.range.hi),
                         sat_mul(a.range.hi, b.range.lo), sat_mul(a.range.hi, b.range.hi)};
            r.range = {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
            break;
        }
        case ArithOp::Div: {
            if (b.range.lo == 0 && b.range.hi == 0) return abs_error();
            Range acc{1, 0};
            if (b.range.lo <= 0 && b.range.hi >= 0) r.can_error = true;
            if (b.range.lo < 0) acc = hull(acc, range_div(a.range, {b.range.lo, std::min<i128>(b.range.hi, -1)}));
            if (b.range.hi > 0) acc = hull(acc, range_div(a.range, {std::max<i128>(b.range.lo, 1), b.range.hi}));
            r.range = acc;
            break;
        }
    }
    return clip(r);
}

using AbsEnv = std::map<std::string, AbsInt>;

// Outcome sets of evaluating a proposition over a set of assignments.
struct Outcomes {
    bool t = false;
    bool f = false;
    bool e = false;
};

Outcomes abs_prop(const AbsEnv& env, const Proposition& prop);

AbsInt abs_index(const AbsEnv& env, const IndexTerm& term) {
    return std::visit(overloaded{
                          [](const IntLit& l) { return abs_const(l.value); },
                          [&](const Var& v) {
                              auto it = env.find(v.name);
                              return it == env.end() ? abs_top() : it->second;
                          },
                          [&](const BinOp& b) {
                              return arith(b.op, abs_index(env, *b.left), abs_index(env, *b.right));
                          },
                          [&](const Cond& c) {
                              Outcomes test = abs_prop(env, *c.test);
                              AbsInt r{{1, 0}, false, test.e};
                              if (test.t) r = join(r, abs_index(env, *c.then_term));
                              if (test.f) r = join(r, abs_index(env, *c.else_term));
                              return r;
                          },
                      },
                      term.node);
}

// Polynomials over variables for division- and conditional-free terms.
using Monomial = std::vector<std::string>;
using Poly = std::map<Monomial, i128>;

constexpr i128 kPolyLimit = static_cast<i128>(1) << 100;

std::optional<Poly> to_poly(const IndexTerm& term) {
    return std::visit(
        overloaded{
            [](const IntLit& l) -> std::optional<Poly> { return Poly{{Monomial{}, l.value}}; },
            [](const Var& v) -> std::optional<Poly> { return Poly{{Monomial{v.name}, 1}}; },
            [](const BinOp& b) -> std::optional<Poly> {
                if (b.op == ArithOp::Div) return std::nullopt;
                auto l = to_poly(*b.left);
                auto r = to_poly(*b.right);
                if (!l || !r) return std::nullopt;
                Poly out;
                if (b.op == ArithOp::Mul) {
                    for (const auto& [ml, cl] : *l) {
                        for (const auto& [mr, cr] : *r) {
                            Monomial m = ml;
                            m.insert(m.end(), mr.begin(), mr.end());
                            std::sort(m.begin(), m.end());
                            i128 c = cl * cr;
                            if (c > kPolyLimit || c < -kPolyLimit) return std::nullopt;
                            out[m] += c;
                        }
                    }
                } else {
                    out = *l;
                    for (const auto& [m, c] : *r) out[m] += (b.op == ArithOp::Add ? c : -c);
                }
                for (const auto& [m, c] : out) {
                    if (c > kPolyLimit || c < -kPolyLimit) return std::nullopt;
                }
                return out;
            },
            [](const Cond&) -> std::optional<Poly> { return std::nullopt; },
        },
        term.node);
}

// Constant difference lhs - rhs when it does not depend on any variable.
std::optional<i128> constant_difference(const IndexTerm& lhs, const IndexTerm& rhs) {
    auto l = to_poly(lhs);
    if (!l) return std::nullopt;
    auto r = to_poly(rhs);
    if (!r) return std::nullopt;
    for (const auto& [m, c] : *r) (*l)[m] -= c;
    i128 constant = 0;
    for (const auto& [m, c] : *l) {
        if (c == 0) continue;
        if (!m.empty()) return std::nullopt;
        constant = c;
    }
    return constant;
}

bool compare(CmpOp op, i128 x, i128 y) {
    switch (op) {
        case CmpOp::Eq: return x == y;
        case CmpOp::Ne: return x != y;
        case CmpOp::Lt: return x < y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Gt: return x > y;
        case CmpOp::Ge: return x >= y;
    }
    return false;
}

Outcomes abs_cmp(const AbsEnv& env, const Cmp& c) {
    AbsInt a = abs_index(env, c.left);
    AbsInt b = abs_index(env, c.right);
    if (!a.can_error && !b.can_error) {
        if (auto diff = constant_difference(c.left, c.right)) {
            bool holds = compare(c.op, *diff, 0);
            return {holds, !holds, false};
        }
    }
    Outcomes out;
    out.e = a.can_error || b.can_error;
    if (!a.can_value || !b.can_value) return out;
    const Range& x = a.range;
    const Range& y = b.range;
    bool overlap = x.lo <= y.hi && y.lo <= x.hi;
    bool same_point = x.singleton() && y.singleton() && x.lo == y.lo;
    switch (c.op) {
        case CmpOp::Eq: out.t = overlap, out.f = !same_point; break;
        case CmpOp::Ne: out.t = !same_point, out.f = overlap; break;
        case CmpOp::Lt: out.t = x.lo < y.hi, out.f = x.hi >= y.lo; break;
        case CmpOp::Le: out.t = x.lo <= y.hi, out.f = x.hi > y.lo; break;
        case CmpOp::Gt: out.t = x.hi > y.lo, out.f = x.lo <= y.hi; break;
        case CmpOp::Ge: out.t = x.hi >= y.lo, out.f = x.lo < y.hi; break;
    }
    return out;
}

Outcomes abs_prop(const AbsEnv& env, const Proposition& prop) {
    return std::visit(overloaded{
                          [](const True&) { return Outcomes{true, false, false}; },
                          [&](const Cmp& c) { return abs_cmp(env, c); },
                          [&](const And& a) {
                              Outcomes l = abs_prop(env, *a.left);
                              Outcomes out{false, l.f, l.e};
                              if (l.t) {
                                  Outcomes r = abs_prop(env, *a.right);
                                  out.t = r.t, out.f |= r.f, out.e |= r.e;
                              }
                              return out;
                          },
                          [&](const Or& o) {
                              Outcomes l = abs_prop(env, *o.left);
                              Outcomes out{l.t, false, l.e};
                              if (l.f) {
                                  Outcomes r = abs_prop(env, *o.right);
                                  out.t |= r.t, out.f = r.f, out.e |= r.e;
                              }
                              return out;
                          },
                          [&](const Not& n) {
                              Outcomes inner = abs_prop(env, *n.operand);
                              return Outcomes{inner.f, inner.t, inner.e};
                          },
                      },
                      prop.node);
}

// ---------------------------------------------------------------------------
// Domains of refinement predicates

// Over-approximation of a refinement's solution set; `exact` when it is precise.
struct VarDom {
    bool is_set = false;
    std::vector<std::int64_t> set;  // when is_set
    Range range;                    // when !is_set
    bool exact = true;
    bool may_error = false;

    bool empty() const { return is_set ? set.empty() : range.empty(); }

    Range hull_range() const {
        if (!is_set) return range;
        if (set.empty()) return {1, 0};
        return {set.front(), set.back()};
    }

    std::optional<i128> count() const {
        if (is_set) return static_cast<i128>(set.size());
        return range.count();
    }

    template <class F>
    void for_each(F&& f) const {
        if (is_set) {
            for (std::int64_t v : set) f(v);
        } else {
            for (i128 v = range.lo; v <= range.hi; ++v) f(static_cast<std::int64_t>(v));
        }
    }
};

VarDom dom_full(bool exact) { return VarDom{false, {}, {}, exact, !exact}; }

VarDom dom_range(Range r, bool exact) { return VarDom{false, {}, r, exact, false}; }

VarDom dom_set(std::vector<std::int64_t> values, bool exact) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return VarDom{true, std::move(values), {}, exact, false};
}

std::vector<std::int64_t> range_values(Range r) {
    std::vector<std::int64_t> out;
    for (i128 v = r.lo; v <= r.hi; ++v) out.push_back(static_cast<std::int64_t>(v));
    return out;
}

VarDom intersect(const VarDom& a, const VarDom& b) {
    VarDom out;
    out.exact = a.exact && b.exact;
    out.may_error = a.may_error || b.may_error;
    if (a.is_set || b.is_set) {
        const VarDom& s = a.is_set ? a : b;
        const VarDom& o = a.is_set ? b : a;
        out.is_set = true;
        for (std::int64_t v : s.set) {
            bool in = o.is_set ? std::binary_search(o.set.begin(), o.set.end(), v)
                               : (v >= o.range.lo && v <= o.range.hi);
            if (in) out.set.push_back(v);
        }
    } else {
        out.range = {std::max(a.range.lo, b.range.lo), std::min(a.range.hi, b.range.hi)};
    }
    return out;
}

VarDom unite(const VarDom& a, const VarDom& b) {
    bool exact = a.exact && b.exact && !a.may_error;
    bool may_error = a.may_error || b.may_error;
    if (a.empty()) return VarDom{b.is_set, b.set, b.range, exact, may_error};
    if (b.empty()) return VarDom{a.is_set, a.set, a.range, exact, may_error};
    auto small = [](const VarDom& d) {
        return d.is_set || (d.range.finite() && d.range.hi - d.range.lo < kSmallRange);
    };
    if (small(a) && small(b) && (a.is_set || b.is_set)) {
        std::vector<std::int64_t> values = a.is_set ? a.set : range_values(a.range);
        std::vector<std::int64_t> more = b.is_set ? b.set : range_values(b.range);
        values.insert(values.end(), more.begin(), more.end());
        VarDom out = dom_set(std::move(values), exact);
        out.may_error = may_error;
        return out;
    }
    Range ra = a.hull_range();
    Range rb = b.hull_range();
    Range h = hull(ra, rb);
    bool contiguous = !a.is_set && !b.is_set && sat_add(std::min(ra.hi, rb.hi), 1) >= std::max(ra.lo, rb.lo);
    VarDom out = dom_range(h, exact && contiguous);
    out.may_error = may_error;
    return out;
}

CmpOp mirror(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return CmpOp::Gt;
        case CmpOp::Le: return CmpOp::Ge;
        case CmpOp::Gt: return CmpOp::Lt;
        case CmpOp::Ge: return CmpOp::Le;
        default: return op;
    }
}

// Solution set of `binder op bound` where bound does not mention binder.
VarDom bound_domain(CmpOp op, const AbsInt& bound) {
    if (!bound.can_value) {
        VarDom out = dom_set({}, true);
        out.may_error = true;
        return out;
    }
    bool exact = bound.range.singleton() && !bound.can_error;
    const Range& s = bound.range;
    VarDom out;
    switch (op) {
        case CmpOp::Eq:
            out = (exact ? dom_set({static_cast<std::int64_t>(s.lo)}, true) : dom_range(s, false));
            break;
        case CmpOp::Ne: out = dom_full(false); out.may_error = false; break;
        case CmpOp::Le: out = dom_range({-kInf, s.hi}, exact); break;
        case CmpOp::Lt: out = dom_range({-kInf, sat_add(s.hi, -1)}, exact); break;
        case CmpOp::Ge: out = dom_range({s.lo, kInf}, exact); break;
        case CmpOp::Gt: out = dom_range({sat_add(s.lo, 1), kInf}, exact); break;
    }
    out.may_error = bound.can_error;
    if (bound.can_error) out.exact = false;
    return out;
}

VarDom analyze(const AbsEnv& env, const std::string& binder, const Proposition& pred) {
    return std::visit(overloaded{
                          [](const True&) { return dom_full(true); },
                          [&](const Cmp& c) {
                              auto is_binder = [&](const IndexTerm& t) {
                                  const auto* v = std::get_if<Var>(&t.node);
                                  return v != nullptr && v->name == binder;
                              };
                              AbsEnv inner = env;
                              inner.erase(binder);
                              if (is_binder(c.left) && free_vars(c.right).count(binder) == 0) {
                                  return bound_domain(c.op, abs_index(inner, c.right));
                              }
                              if (is_binder(c.right) && free_vars(c.left).count(binder) == 0) {
                                  return bound_domain(mirror(c.op), abs_index(inner, c.left));
                              }
                              return dom_full(false);
                          },
                          [&](const And& a) {
                              return intersect(analyze(env, binder, *a.left), analyze(env, binder, *a.right));
                          },
                          [&](const Or& o) {
                              return unite(analyze(env, binder, *o.left), analyze(env, binder, *o.right));
                          },
                          [](const Not&) { return dom_full(false); },
                      },
                      pred.node);
}

AbsInt to_abs(const VarDom& d) {
    if (d.empty()) return AbsInt{{1, 0}, false, false};
    return AbsInt{d.hull_range(), true, false};
}

// Domain of one context entry, or nullopt for entries that are not integer-based.
std::optional<VarDom> entry_domain(const AbsEnv& env, const Datatype& type) {
    if (std::holds_alternative<IntegerType>(type.node)) return dom_full(true);
    if (const auto* r = std::get_if<RefinedType>(&type.node)) {
        if (r->base != BaseType::Integer) return std::nullopt;
        VarDom d = analyze(env, r->binder, r->pred);
        return d;
    }
    return std::nullopt;
}

struct ContextAnalysis {
    std::map<std::string, VarDom> domains;  // integer-based entries only
    AbsEnv env;
};

// Domains of context entries up to (but excluding) `stop`, or all of them.
ContextAnalysis analyze_context(const TypingContext& ctx, const std::string* stop = nullptr) {
    ContextAnalysis out;
    for (const auto& entry : ctx.entries()) {
        if (stop != nullptr && entry.name == *stop) break;
        if (auto d = entry_domain(out.env, entry.type)) {
            // Dependence on a non-singleton earlier variable makes the domain a hull.
            if (const auto* r = std::get_if<RefinedType>(&entry.type.node)) {
                auto deps = free_vars(r->pred);
                deps.erase(r->binder);
                for (const auto& dep : deps) {
                    auto it = out.domains.find(dep);
                    if (it == out.domains.end() || !(it->second.count() == i128{1})) d->exact = false;
                }
            }
            out.env[entry.name] = to_abs(*d);
            out.domains.emplace(entry.name, std::move(*d));
        }
    }
    return out;
}

Domain to_public(const VarDom& d) {
    if (d.is_set) return FiniteSet{d.set};
    if (d.range.finite()) {
        return Interval{static_cast<std::int64_t>(d.range.lo), static_cast<std::int64_t>(d.range.hi)};
    }
    return Unbounded{};
}

bool refinement_holds(Assignment& env, const RefinedType& r, std::int64_t value) {
    auto saved = env.find(r.binder);
    std::optional<std::int64_t> old;
    if (saved != env.end()) old = saved->second;
    env[r.binder] = value;
    bool ok = false;
    try {
        ok = eval_prop(env, r.pred);
    } catch (const EvalError&) {
        ok = false;
    }
    if (old) {
        env[r.binder] = *old;
    } else {
        env.erase(r.binder);
    }
    return ok;
}

}  // namespace

Domain domain_of(const TypingContext& ctx, const std::string& name) {
    const Datatype* type = ctx.lookup(name);
    if (type == nullptr) throw LogicError("'" + name + "' is not bound in the context");
    ContextAnalysis before = analyze_context(ctx, &name);
    auto d = entry_domain(before.env, *type);
    if (!d) throw LogicError("'" + name + "' is not integer-refined");
    if (d->empty()) throw LogicError("refinement of '" + name + "' is unsatisfiable");
    return to_public(*d);
}

Verdict entails(const TypingContext& ctx, const Proposition& prop, const LogicOptions& options) {
    ContextAnalysis analysis = analyze_context(ctx);

    // Relevant variables: free variables of prop closed under refinement dependencies.
    std::set<std::string> relevant;
    std::set<std::string> params;
    auto deps_of = [&](const ContextEntry& e) {
        auto deps = free_vars(e.type);
        return deps;
    };
    for (const auto& v : free_vars(prop)) {
        if (ctx.contains(v)) {
            relevant.insert(v);
        } else {
            params.insert(v);
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& entry : ctx.entries()) {
            auto deps = deps_of(entry);
            bool in = relevant.count(entry.name) != 0;
            bool touches = std::any_of(deps.begin(), deps.end(), [&](const auto& d) { return relevant.count(d); });
            if (!in && touches) {
                relevant.insert(entry.name);
                changed = true;
                in = true;
            }
            if (in) {
                for (const auto& d : deps) {
                    if (!ctx.contains(d)) {
                        params.insert(d);
                    } else if (relevant.insert(d).second) {
                        changed = true;
                    }
                }
            }
        }
    }

    // An unsatisfiable context entails everything.
    for (const auto& [name, dom] : analysis.domains) {
        if (dom.empty()) return Verdict::Valid;
    }

    Outcomes abstract = abs_prop(analysis.env, prop);
    if (abstract.t && !abstract.f && !abstract.e) return Verdict::Valid;
    if (!abstract.t) {
        bool exact = std::all_of(relevant.begin(), relevant.end(), [&](const std::string& name) {
            auto it = analysis.domains.find(name);
            return it != analysis.domains.end() && it->second.exact;
        });
        if (exact) return Verdict::Invalid;
    }

    if (!params.empty()) return Verdict::Undecidable;
    std::vector<const ContextEntry*> order;
    i128 product = 1;
    for (const auto& entry : ctx.entries()) {
        if (relevant.count(entry.name) == 0) continue;
        auto it = analysis.domains.find(entry.name);
        if (it == analysis.domains.end()) return Verdict::Undecidable;
        auto count = it->second.count();
        if (!count) return Verdict::Undecidable;
        product *= *count;
        if (product > static_cast<i128>(options.enum_cap)) return Verdict::Undecidable;
        order.push_back(&entry);
    }

    Assignment env;
    bool counterexample = false;
    std::function<void(std::size_t)> walk = [&](std::size_t level) {
        if (counterexample) return;
        if (level == order.size()) {
            try {
                if (!eval_prop(env, prop)) counterexample = true;
            } catch (const EvalError&) {
                counterexample = true;
            }
            return;
        }
        const ContextEntry& entry = *order[level];
        const auto* refinement = std::get_if<RefinedType>(&entry.type.node);
        analysis.domains.at(entry.name).for_each([&](std::int64_t value) {
            if (counterexample) return;
            if (refinement != nullptr && !refinement_holds(env, *refinement, value)) return;
            env[entry.name] = value;
            walk(level + 1);
            env.erase(entry.name);
        });
    };
    walk(0);
    return counterexample ? Verdict::Invalid : Verdict::Valid;
}

namespace {

std::string fresh_name(const TypingContext& ctx, const std::set<std::string>& avoid) {
    for (int i = 0;; ++i) {
        std::string name = "v" + std::to_string(i);
        if (!ctx.contains(name) && avoid.count(name) == 0) return name;
    }
}

bool same_values(const VarDom& a, const VarDom& b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    if (!a.is_set && !b.is_set) return a.range.lo == b.range.lo && a.range.hi == b.range.hi;
    auto ca = a.count();
    auto cb = b.count();
    if (!ca || !cb || *ca != *cb) return false;
    const VarDom& s = a.is_set ? a : b;
    const VarDom& o = a.is_set ? b : a;
    if (o.is_set) return s.set == o.set;
    return s.set.front() == o.range.lo && s.set.back() == o.range.hi;
}

Verdict refinement_compare(const TypingContext& ctx, const std::string& b1, const Proposition& p1,
                           const std::string& b2, const Proposition& p2, const LogicOptions& options) {
    std::set<std::string> avoid = free_vars(p1);
    for (const auto& v : free_vars(p2)) avoid.insert(v);
    std::string v = fresh_name(ctx, avoid);
    Proposition q1 = substitute(p1, b1, var(v));
    Proposition q2 = substitute(p2, b2, var(v));
    if (q1 == q2) return Verdict::Valid;

    ContextAnalysis analysis = analyze_context(ctx);
    VarDom d1 = analyze(analysis.env, v, q1);
    VarDom d2 = analyze(analysis.env, v, q2);
    auto depends_on_ctx = [&](const Proposition& q) {
        auto fv = free_vars(q);
        fv.erase(v);
        for (const auto& name : fv) {
            auto it = analysis.domains.find(name);
            if (it == analysis.domains.end() || !(it->second.count() == i128{1})) return true;
        }
        return false;
    };
    if (d1.exact && d2.exact && !depends_on_ctx(q1) && !depends_on_ctx(q2)) {
        return same_values(d1, d2) ? Verdict::Valid : Verdict::Invalid;
    }

    Range h = hull(d1.hull_range(), d2.hull_range());
    if (h.empty()) return Verdict::Valid;
    std::vector<Proposition> bounds;
    if (!is_inf(h.lo)) bounds.push_back(cmp(CmpOp::Ge, var(v), lit(static_cast<std::int64_t>(h.lo))));
    if (!is_inf(h.hi)) bounds.push_back(le(var(v), lit(static_cast<std::int64_t>(h.hi))));
    TypingContext extended = ctx.extended(v, refined(v, BaseType::Integer, conj_all(std::move(bounds))));
    Proposition iff = disj(conj(q1, q2), conj(neg(q1), neg(q2)));
    return entails(extended, iff, options);
}

}  // namespace

Verdict dtype_compare(const TypingContext& ctx, const Datatype& lhs, const Datatype& rhs,
                      const LogicOptions& options) {
    if (has_hole(lhs) || has_hole(rhs)) throw LogicError("datatype equivalence requires hole-free datatypes");
    if (lhs == rhs) return Verdict::Valid;

    auto base_of = [](const Datatype& d) -> std::optional<BaseType> {
        if (std::holds_alternative<IntegerType>(d.node)) return BaseType::Integer;
        if (std::holds_alternative<FloatType>(d.node)) return BaseType::Float;
        if (const auto* r = std::get_if<RefinedType>(&d.node)) return r->base;
        return std::nullopt;
    };

    const auto* la = std::get_if<ArrayType>(&lhs.node);
    const auto* ra = std::get_if<ArrayType>(&rhs.node);
    if (la != nullptr || ra != nullptr) {
        if (la == nullptr || ra == nullptr) return Verdict::Invalid;
        Verdict elem = dtype_compare(ctx, *la->elem, *ra->elem, options);
        if (elem != Verdict::Valid) return elem;
        return entails(ctx, eq(la->length, ra->length), options);
    }

    auto lb = base_of(lhs);
    auto rb = base_of(rhs);
    if (!lb || !rb || *lb != *rb) return Verdict::Invalid;

    const auto* lr = std::get_if<RefinedType>(&lhs.node);
    const auto* rr = std::get_if<RefinedType>(&rhs.node);
    if (lr == nullptr && rr == nullptr) return Verdict::Valid;
    std::string b1 = lr != nullptr ? lr->binder : rr->binder;
    std::string b2 = rr != nullptr ? rr->binder : lr->binder;
    Proposition p1 = lr != nullptr ? lr->pred : ptrue();
    Proposition p2 = rr != nullptr ? rr->pred : ptrue();
    return refinement_compare(ctx, b1, p1, b2, p2, options);
}

bool dtype_equiv(const TypingContext& ctx, const Datatype& lhs, const Datatype& rhs, const LogicOptions& options) {
    Verdict v = dtype_compare(ctx, lhs, rhs, options);
    if (v == Verdict::Undecidable) throw UndecidableError("undecidable datatype equivalence");
    return v == Verdict::Valid;
}

TypingContext initial_context(std::int64_t size) {
    if (size < 2) throw LogicError("process count must be at least 2");
    return TypingContext({{"size", refined("x", BaseType::Integer, eq(var("x"), lit(size)))}});
}

TypingContext merged_context(std::int64_t size, const std::set<std::int64_t>& merged_ranks) {
    if (merged_ranks.empty()) throw LogicError("invalid rank set: empty");
    std::vector<Proposition> alternatives;
    for (std::int64_t r : merged_ranks) {
        if (r < 0 || r >= size) throw LogicError("invalid rank set: rank " + std::to_string(r) + " out of range");
        alternatives.push_back(eq(var("x"), lit(r)));
    }
    return initial_context(size).extended("rank", refined("x", BaseType::Integer, disj_all(std::move(alternatives))));
}

std::optional<std::int64_t> constant_value(const TypingContext& ctx, const IndexTerm& term) {
    ContextAnalysis analysis = analyze_context(ctx);
    Assignment env;
    for (const auto& [name, dom] : analysis.domains) {
        if (dom.count() == i128{1}) env[name] = static_cast<std::int64_t>(dom.hull_range().lo);
    }
    try {
        return eval_index(env, term);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

}  // namespace protomerge
