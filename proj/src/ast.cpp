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

#include "protomerge/ast.hpp"

#include <algorithm>
#include <limits>
#include <type_traits>

#include "protomerge/error.hpp"
#include "protomerge/overloaded.hpp"

namespace protomerge {

TypingContext::TypingContext(std::vector<ContextEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& entry : entries_) {
        if (!seen.insert(entry.name).second) {
            throw LogicError("duplicate context entry '" + entry.name + "'");
        }
    }
}

const Datatype* TypingContext::lookup(const std::string& name) const {
    for (const auto& entry : entries_) {
        if (entry.name == name) return &entry.type;
    }
    return nullptr;
}

TypingContext TypingContext::extended(std::string name, Datatype type) const {
    if (contains(name)) throw LogicError("context already binds '" + name + "'");
    TypingContext result = *this;
    result.entries_.push_back({std::move(name), std::move(type)});
    return result;
}

const char* to_string(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::DeadlockSuspected: return "DeadlockSuspected";
        case DiagnosticKind::DatatypeMismatch: return "DatatypeMismatch";
        case DiagnosticKind::EntailmentFailed: return "EntailmentFailed";
        case DiagnosticKind::EntailmentUndecidable: return "EntailmentUndecidable";
        case DiagnosticKind::UnsolvableEquations: return "UnsolvableEquations";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Construction helpers

IndexTerm lit(std::int64_t value) { return {IntLit{value}}; }
IndexTerm var(std::string name) { return {Var{std::move(name)}}; }
IndexTerm binop(ArithOp op, IndexTerm left, IndexTerm right) {
    return {BinOp{op, std::move(left), std::move(right)}};
}
IndexTerm cond(Proposition test, IndexTerm then_term, IndexTerm else_term) {
    return {Cond{std::move(test), std::move(then_term), std::move(else_term)}};
}
IndexTerm operator+(IndexTerm a, IndexTerm b) { return binop(ArithOp::Add, std::move(a), std::move(b)); }
IndexTerm operator-(IndexTerm a, IndexTerm b) { return binop(ArithOp::Sub, std::move(a), std::move(b)); }
IndexTerm operator*(IndexTerm a, IndexTerm b) { return binop(ArithOp::Mul, std::move(a), std::move(b)); }
IndexTerm operator/(IndexTerm a, IndexTerm b) { return binop(ArithOp::Div, std::move(a), std::move(b)); }

Proposition ptrue() { return {True{}}; }
Proposition cmp(CmpOp op, IndexTerm left, IndexTerm right) {
    return {Cmp{op, std::move(left), std::move(right)}};
}
Proposition eq(IndexTerm left, IndexTerm right) { return cmp(CmpOp::Eq, std::move(left), std::move(right)); }
Proposition ne(IndexTerm left, IndexTerm right) { return cmp(CmpOp::Ne, std::move(left), std::move(right)); }
Proposition le(IndexTerm left, IndexTerm right) { return cmp(CmpOp::Le, std::move(left), std::move(right)); }
Proposition lt(IndexTerm left, IndexTerm right) { return cmp(CmpOp::Lt, std::move(left), std::move(right)); }
Proposition conj(Proposition left, Proposition right) { return {And{std::move(left), std::move(right)}}; }
Proposition disj(Proposition left, Proposition right) { return {Or{std::move(left), std::move(right)}}; }
Proposition neg(Proposition operand) { return {Not{std::move(operand)}}; }

Proposition conj_all(std::vector<Proposition> props) {
    if (props.empty()) return ptrue();
    Proposition result = std::move(props.front());
    for (std::size_t i = 1; i < props.size(); ++i) result = conj(std::move(result), std::move(props[i]));
    return result;
}

Proposition disj_all(std::vector<Proposition> props) {
    if (props.empty()) return neg(ptrue());
    Proposition result = std::move(props.front());
    for (std::size_t i = 1; i < props.size(); ++i) result = disj(std::move(result), std::move(props[i]));
    return result;
}

Datatype integer_type() { return {IntegerType{}}; }
Datatype float_type() { return {FloatType{}}; }
Datatype array_of(Datatype elem, IndexTerm length) { return {ArrayType{std::move(elem), std::move(length)}}; }
Datatype refined(std::string binder, BaseType base, Proposition pred) {
    return {RefinedType{std::move(binder), base, std::move(pred)}};
}
Datatype hole(std::string id) { return {Hole{std::move(id)}}; }

ProtocolType skip() { return {Skip{}}; }
ProtocolType message(IndexTerm from, IndexTerm to, Datatype payload) {
    return {Message{std::move(from), std::move(to), std::move(payload)}};
}
ProtocolType allreduce(ReduceOp op, Datatype payload) {
    return {Allreduce{op, kAnonymousBinder, std::move(payload), skip()}};
}
ProtocolType allreduce(ReduceOp op, std::string binder, Datatype payload, ProtocolType cont) {
    return {Allreduce{op, std::move(binder), std::move(payload), std::move(cont)}};
}
ProtocolType foreach_(std::string binder, IndexTerm lo, IndexTerm hi, ProtocolType body) {
    return {Foreach{std::move(binder), std::move(lo), std::move(hi), std::move(body)}};
}
ProtocolType seq(ProtocolType first, ProtocolType second) { return {Seq{std::move(first), std::move(second)}}; }

ProtocolType seq_all(std::vector<ProtocolType> items) {
    if (items.empty()) return skip();
    ProtocolType result = std::move(items.back());
    for (std::size_t i = items.size() - 1; i-- > 0;) result = seq(std::move(items[i]), std::move(result));
    return result;
}

Process pskip() { return {PSkip{}}; }
Process send(IndexTerm to, Datatype payload) { return {Send{std::move(to), std::move(payload)}}; }
Process recv(IndexTerm from, Datatype payload) { return {Recv{std::move(from), std::move(payload)}}; }
Process allreduce_stmt(ReduceOp op, Datatype payload) { return {AllreduceStmt{op, std::move(payload)}}; }
Process for_(std::string binder, IndexTerm lo, IndexTerm hi, Process body) {
    return {For{std::move(binder), std::move(lo), std::move(hi), std::move(body)}};
}
Process if_(Proposition test, Process then_branch, Process else_branch) {
    return {If{std::move(test), std::move(then_branch), std::move(else_branch)}};
}
Process pseq(Process first, Process second) { return {PSeq{std::move(first), std::move(second)}}; }
Process constrain(Datatype lhs, Datatype rhs) { return {Constrain{std::move(lhs), std::move(rhs)}}; }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void check_overflow(bool overflowed) {
    if (overflowed) throw EvalError(EvalError::Kind::Overflow, "integer overflow in index term");
}

}  // namespace

std::int64_t eval_index(const Assignment& env, const IndexTerm& term) {
    return std::visit(
        overloaded{
            [](const IntLit& l) { return l.value; },
            [&](const Var& v) -> std::int64_t {
                auto it = env.find(v.name);
                if (it == env.end()) {
                    throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable '" + v.name + "'");
                }
                return it->second;
            },
            [&](const BinOp& b) -> std::int64_t {
                std::int64_t x = eval_index(env, *b.left);
                std::int64_t y = eval_index(env, *b.right);
                std::int64_t r = 0;
                switch (b.op) {
                    case ArithOp::Add: check_overflow(__builtin_add_overflow(x, y, &r));
                        return r;
                    case ArithOp::Sub: check_overflow(__builtin_sub_overflow(x, y, &r));
                        return r;
                    case ArithOp::Mul: check_overflow(__builtin_mul_overflow(x, y, &r));
                        return r;
                    case ArithOp::Div:
                        if (y == 0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
                        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) {
                            throw EvalError(EvalError::Kind::Overflow, "integer overflow in index term");
                        }
                        return x / y;
                }
                return 0;
            },
            [&](const Cond& c) {
                return eval_prop(env, *c.test) ? eval_index(env, *c.then_term) : eval_index(env, *c.else_term);
            },
        },
        term.node);
}

bool eval_prop(const Assignment& env, const Proposition& prop) {
    return std::visit(
        overloaded{
            [](const True&) { return true; },
            [&](const Cmp& c) {
                std::int64_t x = eval_index(env, c.left);
                std::int64_t y = eval_index(env, c.right);
                switch (c.op) {
                    case CmpOp::Eq: return x == y;
                    case CmpOp::Ne: return x != y;
                    case CmpOp::Lt: return x < y;
                    case CmpOp::Le: return x <= y;
                    case CmpOp::Gt: return x > y;
                    case CmpOp::Ge: return x >= y;
                }
                return false;
            },
            [&](const And& a) { return eval_prop(env, *a.left) && eval_prop(env, *a.right); },
            [&](const Or& o) { return eval_prop(env, *o.left) || eval_prop(env, *o.right); },
            [&](const Not& n) { return !eval_prop(env, *n.operand); },
        },
        prop.node);
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const IndexTerm& term, std::set<std::string>& out);

void collect_free(const Proposition& prop, std::set<std::string>& out) {
    std::visit(overloaded{
                   [](const True&) {},
                   [&](const Cmp& c) {
                       collect_free(c.left, out);
                       collect_free(c.right, out);
                   },
                   [&](const And& a) {
                       collect_free(*a.left, out);
                       collect_free(*a.right, out);
                   },
                   [&](const Or& o) {
                       collect_free(*o.left, out);
                       collect_free(*o.right, out);
                   },
                   [&](const Not& n) { collect_free(*n.operand, out); },
               },
               prop.node);
}

void collect_free(const IndexTerm& term, std::set<std::string>& out) {
    std::visit(overloaded{
                   [](const IntLit&) {},
                   [&](const Var& v) { out.insert(v.name); },
                   [&](const BinOp& b) {
                       collect_free(*b.left, out);
                       collect_free(*b.right, out);
                   },
                   [&](const Cond& c) {
                       collect_free(*c.test, out);
                       collect_free(*c.then_term, out);
                       collect_free(*c.else_term, out);
                   },
               },
               term.node);
}

}  // namespace

std::set<std::string> free_vars(const IndexTerm& term) {
    std::set<std::string> out;
    collect_free(term, out);
    return out;
}

std::set<std::string> free_vars(const Proposition& prop) {
    std::set<std::string> out;
    collect_free(prop, out);
    return out;
}

std::set<std::string> free_vars(const Datatype& type) {
    return std::visit(overloaded{
                          [](const ArrayType& a) {
                              auto out = free_vars(*a.elem);
                              collect_free(a.length, out);
                              return out;
                          },
                          [](const RefinedType& r) {
                              auto out = free_vars(r.pred);
                              out.erase(r.binder);
                              return out;
                          },
                          [](const auto&) { return std::set<std::string>{}; },
                      },
                      type.node);
}

bool has_hole(const Datatype& type) {
    return std::visit(overloaded{
                          [](const Hole&) { return true; },
                          [](const ArrayType& a) { return has_hole(*a.elem); },
                          [](const auto&) { return false; },
                      },
                      type.node);
}

bool has_hole(const ProtocolType& type) {
    return std::visit(overloaded{
                          [](const Skip&) { return false; },
                          [](const Message& m) { return has_hole(m.payload); },
                          [](const Allreduce& a) { return has_hole(a.payload) || has_hole(*a.cont); },
                          [](const Foreach& f) { return has_hole(*f.body); },
                          [](const Seq& s) { return has_hole(*s.first) || has_hole(*s.second); },
                      },
                      type.node);
}

// ---------------------------------------------------------------------------
// Substitution of index variables

IndexTerm substitute(const IndexTerm& term, const std::string& name, const IndexTerm& value) {
    return std::visit(overloaded{
                          [&](const IntLit&) { return term; },
                          [&](const Var& v) { return v.name == name ? value : term; },
                          [&](const BinOp& b) {
                              return binop(b.op, substitute(*b.left, name, value), substitute(*b.right, name, value));
                          },
                          [&](const Cond& c) {
                              return cond(substitute(*c.test, name, value), substitute(*c.then_term, name, value),
                                          substitute(*c.else_term, name, value));
                          },
                      },
                      term.node);
}

Proposition substitute(const Proposition& prop, const std::string& name, const IndexTerm& value) {
    return std::visit(overloaded{
                          [&](const True&) { return prop; },
                          [&](const Cmp& c) {
                              return cmp(c.op, substitute(c.left, name, value), substitute(c.right, name, value));
                          },
                          [&](const And& a) {
                              return conj(substitute(*a.left, name, value), substitute(*a.right, name, value));
                          },
                          [&](const Or& o) {
                              return disj(substitute(*o.left, name, value), substitute(*o.right, name, value));
                          },
                          [&](const Not& n) { return neg(substitute(*n.operand, name, value)); },
                      },
                      prop.node);
}

Datatype substitute(const Datatype& type, const std::string& name, const IndexTerm& value) {
    return std::visit(overloaded{
                          [&](const ArrayType& a) {
                              return array_of(substitute(*a.elem, name, value), substitute(a.length, name, value));
                          },
                          [&](const RefinedType& r) {
                              if (r.binder == name) return type;
                              return refined(r.binder, r.base, substitute(r.pred, name, value));
                          },
                          [&](const auto&) { return type; },
                      },
                      type.node);
}

ProtocolType substitute(const ProtocolType& type, const std::string& name, const IndexTerm& value) {
    return std::visit(
        overloaded{
            [&](const Skip&) { return type; },
            [&](const Message& m) {
                return message(substitute(m.from, name, value), substitute(m.to, name, value),
                               substitute(m.payload, name, value));
            },
            [&](const Allreduce& a) {
                ProtocolType cont = a.binder == name ? *a.cont : substitute(*a.cont, name, value);
                return allreduce(a.op, a.binder, substitute(a.payload, name, value), std::move(cont));
            },
            [&](const Foreach& f) {
                ProtocolType body = f.binder == name ? *f.body : substitute(*f.body, name, value);
                return foreach_(f.binder, substitute(f.lo, name, value), substitute(f.hi, name, value),
                                std::move(body));
            },
            [&](const Seq& s) { return seq(substitute(*s.first, name, value), substitute(*s.second, name, value)); },
        },
        type.node);
}

// ---------------------------------------------------------------------------
// Hole substitution

Datatype apply(const Substitution& subst, const Datatype& type) {
    return std::visit(overloaded{
                          [&](const Hole& h) {
                              auto it = subst.find(h.id);
                              if (it == subst.end() || it->second == type) return type;
                              return apply(subst, it->second);
                          },
                          [&](const ArrayType& a) { return array_of(apply(subst, *a.elem), a.length); },
                          [&](const auto&) { return type; },
                      },
                      type.node);
}

ProtocolType apply(const Substitution& subst, const ProtocolType& type) {
    return std::visit(
        overloaded{
            [&](const Skip&) { return type; },
            [&](const Message& m) { return message(m.from, m.to, apply(subst, m.payload)); },
            [&](const Allreduce& a) { return allreduce(a.op, a.binder, apply(subst, a.payload), apply(subst, *a.cont)); },
            [&](const Foreach& f) { return foreach_(f.binder, f.lo, f.hi, apply(subst, *f.body)); },
            [&](const Seq& s) { return seq(apply(subst, *s.first), apply(subst, *s.second)); },
        },
        type.node);
}

EquationSystem apply(const Substitution& subst, const EquationSystem& eqs) {
    EquationSystem out;
    out.reserve(eqs.size());
    for (const auto& e : eqs) out.push_back({apply(subst, e.lhs), apply(subst, e.rhs)});
    return out;
}

// ---------------------------------------------------------------------------
// Constant folding

IndexTerm fold_constants(const IndexTerm& term) {
    if (free_vars(term).empty()) return lit(eval_index({}, term));
    return std::visit(overloaded{
                          [&](const BinOp& b) {
                              return binop(b.op, fold_constants(*b.left), fold_constants(*b.right));
                          },
                          [&](const auto&) { return term; },
                      },
                      term.node);
}

std::optional<std::int64_t> as_literal(const IndexTerm& term) {
    if (const auto* l = std::get_if<IntLit>(&term.node)) return l->value;
    return std::nullopt;
}

}  // namespace protomerge
