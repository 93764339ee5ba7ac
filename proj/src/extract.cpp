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

#include "protomerge/extract.hpp"

#include <deque>

#include "protomerge/error.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/overloaded.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {

namespace {

struct Specializer {
    std::int64_t rank;
    std::int64_t size;

    IndexTerm control(const IndexTerm& term, const std::set<std::string>& shadowed) const {
        IndexTerm out = term;
        if (shadowed.count("rank") == 0) out = substitute(out, "rank", lit(rank));
        if (shadowed.count("size") == 0) out = substitute(out, "size", lit(size));
        return fold_constants(out);
    }

    Proposition control(const Proposition& prop, const std::set<std::string>& shadowed) const {
        Proposition out = prop;
        if (shadowed.count("rank") == 0) out = substitute(out, "rank", lit(rank));
        if (shadowed.count("size") == 0) out = substitute(out, "size", lit(size));
        return out;
    }

    Datatype payload(const Datatype& type, const std::set<std::string>& shadowed) const {
        if (shadowed.count("rank") != 0) return type;
        return substitute(type, "rank", lit(rank));
    }

    Process run(const Process& p, const std::set<std::string>& shadowed) const {
        return std::visit(
            overloaded{
                [&](const PSkip&) { return p; },
                [&](const Send& s) { return send(control(s.to, shadowed), payload(s.payload, shadowed)); },
                [&](const Recv& r) { return recv(control(r.from, shadowed), payload(r.payload, shadowed)); },
                [&](const AllreduceStmt& a) { return allreduce_stmt(a.op, payload(a.payload, shadowed)); },
                [&](const Constrain& c) {
                    return constrain(payload(c.lhs, shadowed), payload(c.rhs, shadowed));
                },
                [&](const For& f) {
                    IndexTerm lo = control(f.lo, shadowed);
                    IndexTerm hi = control(f.hi, shadowed);
                    auto l = as_literal(lo);
                    auto h = as_literal(hi);
                    if (l && h && *h < *l) return pskip();
                    std::set<std::string> inner = shadowed;
                    inner.insert(f.binder);
                    return for_(f.binder, lo, hi, run(*f.body, inner));
                },
                [&](const If& i) {
                    Proposition test = control(i.test, shadowed);
                    if (free_vars(test).empty()) {
                        return eval_prop({}, test) ? run(*i.then_branch, shadowed) : run(*i.else_branch, shadowed);
                    }
                    return if_(test, run(*i.then_branch, shadowed), run(*i.else_branch, shadowed));
                },
                [&](const PSeq& s) { return pseq(run(*s.first, shadowed), run(*s.second, shadowed)); },
            },
            p.node);
    }
};

void collect_into(const Process& p, std::int64_t self, EquationSystem& eqs, ProtocolType& out) {
    out = std::visit(overloaded{
                         [](const PSkip&) { return skip(); },
                         [&](const Send& s) { return message(lit(self), s.to, s.payload); },
                         [&](const Recv& r) { return message(r.from, lit(self), r.payload); },
                         [](const AllreduceStmt& a) { return allreduce(a.op, a.payload); },
                         [&](const Constrain& c) {
                             eqs.push_back({c.lhs, c.rhs});
                             return skip();
                         },
                         [&](const For& f) {
                             ProtocolType body = skip();
                             collect_into(*f.body, self, eqs, body);
                             return foreach_(f.binder, f.lo, f.hi, body);
                         },
                         [&](const If& i) -> ProtocolType {
                             throw ExtractError("residual conditional after specialization: if " +
                                                print_prop(i.test));
                         },
                         [&](const PSeq& s) {
                             ProtocolType first = skip();
                             ProtocolType second = skip();
                             collect_into(*s.first, self, eqs, first);
                             collect_into(*s.second, self, eqs, second);
                             return seq(first, second);
                         },
                     },
                     p.node);
}

bool occurs(const std::string& id, const Datatype& type) {
    return std::visit(overloaded{
                          [&](const Hole& h) { return h.id == id; },
                          [&](const ArrayType& a) { return occurs(id, *a.elem); },
                          [](const auto&) { return false; },
                      },
                      type.node);
}

[[noreturn]] void unsolvable(const std::string& message) {
    throw SolveError(Diagnostic{DiagnosticKind::UnsolvableEquations, "equations", {}, message});
}

}  // namespace

Process specialize(const Process& process, std::int64_t rank, std::int64_t size) {
    return Specializer{rank, size}.run(process, {});
}

Collected collect(const TypingContext&, const Process& process, std::int64_t self_rank) {
    Collected out{{}, skip()};
    collect_into(process, self_rank, out.equations, out.type);
    return out;
}

Substitution solve(const TypingContext& ctx, const EquationSystem& equations, const LogicOptions& options) {
    Substitution subst;
    std::deque<Equation> work(equations.begin(), equations.end());
    auto bind = [&](const std::string& id, const Datatype& value) {
        if (occurs(id, value)) unsolvable("occurs check: ?" + id + " = " + print_datatype(value));
        Substitution single{{id, value}};
        for (auto& [key, type] : subst) type = protomerge::apply(single, type);
        subst[id] = value;
    };
    while (!work.empty()) {
        Equation e = work.front();
        work.pop_front();
        Datatype lhs = protomerge::apply(subst, e.lhs);
        Datatype rhs = protomerge::apply(subst, e.rhs);
        const auto* lh = std::get_if<Hole>(&lhs.node);
        const auto* rh = std::get_if<Hole>(&rhs.node);
        if (lh != nullptr && rh != nullptr && lh->id == rh->id) continue;
        if (lh != nullptr) {
            bind(lh->id, rhs);
            continue;
        }
        if (rh != nullptr) {
            bind(rh->id, lhs);
            continue;
        }
        const auto* la = std::get_if<ArrayType>(&lhs.node);
        const auto* ra = std::get_if<ArrayType>(&rhs.node);
        if (la != nullptr && ra != nullptr && (has_hole(lhs) || has_hole(rhs))) {
            Verdict len = entails(ctx, eq(la->length, ra->length), options);
            if (len == Verdict::Undecidable) {
                throw UndecidableError("undecidable array length equality: " + print_datatype(lhs) + " = " +
                                       print_datatype(rhs));
            }
            if (len == Verdict::Invalid) unsolvable("array lengths differ: " + print_datatype(lhs) + " = " + print_datatype(rhs));
            work.push_front({*la->elem, *ra->elem});
            continue;
        }
        if (has_hole(lhs) || has_hole(rhs)) {
            unsolvable("constructor clash: " + print_datatype(lhs) + " = " + print_datatype(rhs));
        }
        if (!dtype_equiv(ctx, lhs, rhs, options)) {
            unsolvable("datatypes differ: " + print_datatype(lhs) + " = " + print_datatype(rhs));
        }
    }
    return subst;
}

ProtocolType extract_local_type(const TypingContext& ctx, const Process& process, std::int64_t self_rank,
                                std::int64_t size, const LogicOptions& options) {
    Collected collected = collect(ctx, specialize(process, self_rank, size), self_rank);
    Substitution subst = solve(ctx, collected.equations, options);
    ProtocolType type = protomerge::apply(subst, collected.type);
    if (has_hole(type)) unsolvable("underdetermined datatype hole in " + print_protocol_inline(type));
    return normalize_seq(type);
}

}  // namespace protomerge
