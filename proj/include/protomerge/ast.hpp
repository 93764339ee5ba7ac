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

#ifndef PROTOMERGE_AST_HPP_
#define PROTOMERGE_AST_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace protomerge {

/// Immutable, shared, deep-compared box for recursive AST members.
template <class T>
class Box {
  public:
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    bool operator==(const Box& other) const { return ptr_ == other.ptr_ || *ptr_ == *other.ptr_; }

  private:
    std::shared_ptr<const T> ptr_;
};

struct IndexTerm;
struct Proposition;

// ---------------------------------------------------------------------------
// Index terms

enum class ArithOp { Add, Sub, Mul, Div };

struct IntLit {
    std::int64_t value;
    bool operator==(const IntLit&) const = default;
};

struct Var {
    std::string name;
    bool operator==(const Var&) const = default;
};

struct BinOp {
    ArithOp op;
    Box<IndexTerm> left;
    Box<IndexTerm> right;
    bool operator==(const BinOp&) const = default;
};

struct Cond {
    Box<Proposition> test;
    Box<IndexTerm> then_term;
    Box<IndexTerm> else_term;
    bool operator==(const Cond&) const = default;
};

/// Integer arithmetic appearing in types: endpoints, array lengths, loop bounds.
struct IndexTerm {
    std::variant<IntLit, Var, BinOp, Cond> node;
    bool operator==(const IndexTerm&) const = default;
};

// ---------------------------------------------------------------------------
// Propositions

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct True {
    bool operator==(const True&) const = default;
};

struct Cmp {
    CmpOp op;
    IndexTerm left;
    IndexTerm right;
    bool operator==(const Cmp&) const = default;
};

struct And {
    Box<Proposition> left;
    Box<Proposition> right;
    bool operator==(const And&) const = default;
};

struct Or {
    Box<Proposition> left;
    Box<Proposition> right;
    bool operator==(const Or&) const = default;
};

struct Not {
    Box<Proposition> operand;
    bool operator==(const Not&) const = default;
};

struct Proposition {
    std::variant<True, Cmp, And, Or, Not> node;
    bool operator==(const Proposition&) const = default;
};

// ---------------------------------------------------------------------------
// Datatypes

enum class BaseType { Integer, Float };

struct Datatype;

struct IntegerType {
    bool operator==(const IntegerType&) const = default;
};

struct FloatType {
    bool operator==(const FloatType&) const = default;
};

struct ArrayType {
    Box<Datatype> elem;
    IndexTerm length;
    bool operator==(const ArrayType&) const = default;
};

struct RefinedType {
    std::string binder;
    BaseType base;
    Proposition pred;
    bool operator==(const RefinedType&) const = default;
};

/// Datatype variable introduced during extraction; never present in solved types.
struct Hole {
    std::string id;
    bool operator==(const Hole&) const = default;
};

struct Datatype {
    std::variant<IntegerType, FloatType, ArrayType, RefinedType, Hole> node;
    bool operator==(const Datatype&) const = default;
};

enum class ReduceOp { Min, Max, Sum, Prod };

// ---------------------------------------------------------------------------
// Protocol types

struct ProtocolType;

struct Skip {
    bool operator==(const Skip&) const = default;
};

struct Message {
    IndexTerm from;
    IndexTerm to;
    Datatype payload;
    bool operator==(const Message&) const = default;
};

/// `allreduce op x: D { cont }`; the binder-less form uses kAnonymousBinder and a Skip continuation.
struct Allreduce {
    ReduceOp op;
    std::string binder;
    Datatype payload;
    Box<ProtocolType> cont;
    bool operator==(const Allreduce&) const = default;
};

struct Foreach {
    std::string binder;
    IndexTerm lo;
    IndexTerm hi;
    Box<ProtocolType> body;
    bool operator==(const Foreach&) const = default;
};

struct Seq {
    Box<ProtocolType> first;
    Box<ProtocolType> second;
    bool operator==(const Seq&) const = default;
};

struct ProtocolType {
    std::variant<Skip, Message, Allreduce, Foreach, Seq> node;
    bool operator==(const ProtocolType&) const = default;
};

/// Binder of an allreduce whose result is never referenced.
inline constexpr const char* kAnonymousBinder = "_";

// ---------------------------------------------------------------------------
// Typing contexts

struct ContextEntry {
    std::string name;
    Datatype type;
    bool operator==(const ContextEntry&) const = default;
};

/// Ordered variable bindings. Later entries may mention earlier names.
class TypingContext {
  public:
    TypingContext() = default;
    explicit TypingContext(std::vector<ContextEntry> entries);

    const std::vector<ContextEntry>& entries() const { return entries_; }
    const Datatype* lookup(const std::string& name) const;
    bool contains(const std::string& name) const { return lookup(name) != nullptr; }

    /// Returns a copy with one more entry. Throws if the name is already bound.
    TypingContext extended(std::string name, Datatype type) const;

    bool operator==(const TypingContext&) const = default;

  private:
    std::vector<ContextEntry> entries_;
};

// ---------------------------------------------------------------------------
// Processes (the per-rank program DSL)

struct Process;

struct PSkip {
    bool operator==(const PSkip&) const = default;
};

struct Send {
    IndexTerm to;
    Datatype payload;
    bool operator==(const Send&) const = default;
};

struct Recv {
    IndexTerm from;
    Datatype payload;
    bool operator==(const Recv&) const = default;
};

struct AllreduceStmt {
    ReduceOp op;
    Datatype payload;
    bool operator==(const AllreduceStmt&) const = default;
};

struct For {
    std::string binder;
    IndexTerm lo;
    IndexTerm hi;
    Box<Process> body;
    bool operator==(const For&) const = default;
};

struct If {
    Proposition test;
    Box<Process> then_branch;
    Box<Process> else_branch;
    bool operator==(const If&) const = default;
};

struct PSeq {
    Box<Process> first;
    Box<Process> second;
    bool operator==(const PSeq&) const = default;
};

/// `constrain D1 = D2`: a datatype equality site; contributes no communication.
struct Constrain {
    Datatype lhs;
    Datatype rhs;
    bool operator==(const Constrain&) const = default;
};

struct Process {
    std::variant<PSkip, Send, Recv, AllreduceStmt, For, If, PSeq, Constrain> node;
    bool operator==(const Process&) const = default;
};

// ---------------------------------------------------------------------------
// Equations and substitutions over datatypes

struct Equation {
    Datatype lhs;
    Datatype rhs;
    bool operator==(const Equation&) const = default;
};

using EquationSystem = std::vector<Equation>;
using Substitution = std::map<std::string, Datatype>;

// ---------------------------------------------------------------------------
// Diagnostics

enum class DiagnosticKind {
    DeadlockSuspected,
    DatatypeMismatch,
    EntailmentFailed,
    EntailmentUndecidable,
    UnsolvableEquations,
};

struct Diagnostic {
    DiagnosticKind kind;
    std::string location;
    std::vector<std::string> rule_trace;
    std::string message;
};

const char* to_string(DiagnosticKind kind);

// ---------------------------------------------------------------------------
// Construction helpers

IndexTerm lit(std::int64_t value);
IndexTerm var(std::string name);
IndexTerm binop(ArithOp op, IndexTerm left, IndexTerm right);
IndexTerm cond(Proposition test, IndexTerm then_term, IndexTerm else_term);
IndexTerm operator+(IndexTerm a, IndexTerm b);
IndexTerm operator-(IndexTerm a, IndexTerm b);
IndexTerm operator*(IndexTerm a, IndexTerm b);
IndexTerm operator/(IndexTerm a, IndexTerm b);

Proposition ptrue();
Proposition cmp(CmpOp op, IndexTerm left, IndexTerm right);
Proposition eq(IndexTerm left, IndexTerm right);
Proposition ne(IndexTerm left, IndexTerm right);
Proposition le(IndexTerm left, IndexTerm right);
Proposition lt(IndexTerm left, IndexTerm right);
Proposition conj(Proposition left, Proposition right);
Proposition disj(Proposition left, Proposition right);
Proposition neg(Proposition operand);
/// Left-nested conjunction; True when empty.
Proposition conj_all(std::vector<Proposition> props);
/// Left-nested disjunction; `not true` when empty.
Proposition disj_all(std::vector<Proposition> props);

Datatype integer_type();
Datatype float_type();
Datatype array_of(Datatype elem, IndexTerm length);
Datatype refined(std::string binder, BaseType base, Proposition pred);
Datatype hole(std::string id);

ProtocolType skip();
ProtocolType message(IndexTerm from, IndexTerm to, Datatype payload);
ProtocolType allreduce(ReduceOp op, Datatype payload);
ProtocolType allreduce(ReduceOp op, std::string binder, Datatype payload, ProtocolType cont);
ProtocolType foreach_(std::string binder, IndexTerm lo, IndexTerm hi, ProtocolType body);
ProtocolType seq(ProtocolType first, ProtocolType second);
/// Right-nested sequence; Skip when empty.
ProtocolType seq_all(std::vector<ProtocolType> items);

Process pskip();
Process send(IndexTerm to, Datatype payload);
Process recv(IndexTerm from, Datatype payload);
Process allreduce_stmt(ReduceOp op, Datatype payload);
Process for_(std::string binder, IndexTerm lo, IndexTerm hi, Process body);
Process if_(Proposition test, Process then_branch, Process else_branch);
Process pseq(Process first, Process second);
Process constrain(Datatype lhs, Datatype rhs);

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<std::string, std::int64_t>;

/// Truncating integer arithmetic. Throws EvalError on a zero divisor, unbound variable or overflow.
std::int64_t eval_index(const Assignment& env, const IndexTerm& term);
bool eval_prop(const Assignment& env, const Proposition& prop);

// ---------------------------------------------------------------------------
// Traversal and substitution

std::set<std::string> free_vars(const IndexTerm& term);
std::set<std::string> free_vars(const Proposition& prop);
std::set<std::string> free_vars(const Datatype& type);
bool has_hole(const Datatype& type);
bool has_hole(const ProtocolType& type);

IndexTerm substitute(const IndexTerm& term, const std::string& name, const IndexTerm& value);
Proposition substitute(const Proposition& prop, const std::string& name, const IndexTerm& value);
Datatype substitute(const Datatype& type, const std::string& name, const IndexTerm& value);
ProtocolType substitute(const ProtocolType& type, const std::string& name, const IndexTerm& value);

/// Replaces holes by their images; images are themselves resolved transitively.
Datatype apply(const Substitution& subst, const Datatype& type);
ProtocolType apply(const Substitution& subst, const ProtocolType& type);
EquationSystem apply(const Substitution& subst, const EquationSystem& eqs);

/// Folds closed subterms to literals. Throws EvalError when a closed subterm cannot be evaluated.
IndexTerm fold_constants(const IndexTerm& term);

std::optional<std::int64_t> as_literal(const IndexTerm& term);

}  // namespace protomerge

#endif  // PROTOMERGE_AST_HPP_
