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

#include "protomerge/merge.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "protomerge/overloaded.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {

const std::vector<Rule>& all_rules() {
    static const std::vector<Rule> rules = {
        Rule::SkipSkip,    Rule::SkipMsgS,       Rule::MsgSSkip,     Rule::MsgSMsgS,       Rule::MsgSkip,
        Rule::MsgMsgS,     Rule::SkipMsg,        Rule::MsgSMsg,      Rule::MsgMsgEq,       Rule::MsgMsgRight,
        Rule::MsgMsgLeft,  Rule::AllredAllred,   Rule::ForeachForeach, Rule::SeqSeq,       Rule::MsgTMsgTLeft,
        Rule::MsgTMsgTRight, Rule::SkipMsgT,     Rule::MsgTSkipT,
    };
    return rules;
}

const char* rule_name(Rule rule) {
    switch (rule) {
        case Rule::SkipSkip: return "skip-skip";
        case Rule::SkipMsgS: return "skip-msgS";
        case Rule::MsgSSkip: return "msgS-skip";
        case Rule::MsgSMsgS: return "msgS-msgS";
        case Rule::MsgSkip: return "msg-skip";
        case Rule::MsgMsgS: return "msg-msgS";
        case Rule::SkipMsg: return "skip-msg";
        case Rule::MsgSMsg: return "msgS-msg";
        case Rule::MsgMsgEq: return "msg-msg-eq";
        case Rule::MsgMsgRight: return "msg-msg-right";
        case Rule::MsgMsgLeft: return "msg-msg-left";
        case Rule::AllredAllred: return "allred-allred";
        case Rule::ForeachForeach: return "foreach-foreach";
        case Rule::SeqSeq: return "seq-seq";
        case Rule::MsgTMsgTLeft: return "msgT-msgT-left";
        case Rule::MsgTMsgTRight: return "msgT-msgT-right";
        case Rule::SkipMsgT: return "skip-msgT";
        case Rule::MsgTSkipT: return "msgT-skipT";
    }
    return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
    for (Rule rule : all_rules()) {
        if (name == rule_name(rule)) return rule;
    }
    return std::nullopt;
}

std::vector<std::string> MergeTrace::rule_names() const {
    std::vector<std::string> out;
    out.reserve(steps.size());
    for (const auto& step : steps) out.push_back(step.rule);
    return out;
}

std::string MergeTrace::to_text() const {
    std::string out;
    for (const auto& step : steps) {
        out += step.rule + ": " + step.left + " || " + step.right + "\n";
        for (const auto& p : step.premises) {
            out += "  premise " + print_prop(p.prop) + " : " + to_string(p.verdict) + "\n";
        }
        for (const auto& d : step.datatype_checks) out += "  datatypes " + d + "\n";
    }
    return out;
}

namespace {

void flatten(const ProtocolType& type, std::vector<ProtocolType>& out) {
    std::visit(overloaded{
                   [](const Skip&) {},
                   [&](const Seq& s) {
                       flatten(*s.first, out);
                       flatten(*s.second, out);
                   },
                   [&](const Foreach& f) { out.push_back(foreach_(f.binder, f.lo, f.hi, normalize_seq(*f.body))); },
                   [&](const Allreduce& a) {
                       out.push_back(allreduce(a.op, a.binder, a.payload, normalize_seq(*a.cont)));
                   },
                   [&](const Message&) { out.push_back(type); },
               },
               type.node);
}

}  // namespace

ProtocolType normalize_seq(const ProtocolType& type) {
    std::vector<ProtocolType> items;
    flatten(type, items);
    return seq_all(std::move(items));
}

namespace {

struct Found {
    ProtocolType type;
    std::vector<TraceStep> steps;
};

struct Attempt {
    TraceStep step;
    std::string summary;
};

// A premise as shown in traces and as handed to entails.
struct Premise {
    Proposition display;
    Proposition actual;
};

std::string fresh_binder(const std::string& base, const TypingContext& ctx, const std::set<std::string>& avoid) {
    for (int i = 1;; ++i) {
        std::string name = base + std::to_string(i);
        if (!ctx.contains(name) && avoid.count(name) == 0) return name;
    }
}

std::set<std::string> protocol_vars(const ProtocolType& type) {
    std::set<std::string> out;
    auto add = [&](const std::set<std::string>& s) { out.insert(s.begin(), s.end()); };
    std::visit(overloaded{
                   [](const Skip&) {},
                   [&](const Message& m) {
                       add(free_vars(m.from));
                       add(free_vars(m.to));
                       add(free_vars(m.payload));
                   },
                   [&](const Allreduce& a) {
                       out.insert(a.binder);
                       add(free_vars(a.payload));
                       add(protocol_vars(*a.cont));
                   },
                   [&](const Foreach& f) {
                       out.insert(f.binder);
                       add(free_vars(f.lo));
                       add(free_vars(f.hi));
                       add(protocol_vars(*f.body));
                   },
                   [&](const Seq& s) {
                       add(protocol_vars(*s.first));
                       add(protocol_vars(*s.second));
                   },
               },
               type.node);
    return out;
}

class Engine {
  public:
    Engine(const MergeOptions& options, std::vector<std::int64_t> ranks, std::int64_t k)
        : options_(options), ranks_(std::move(ranks)), k_(k) {}

    std::optional<Found> merge(const TypingContext& ctx, const ProtocolType& l, const ProtocolType& r, int depth,
                               const std::string& path) {
        std::string key = print_context(ctx) + "\n" + print_protocol_inline(l) + "\n||\n" + print_protocol_inline(r);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        std::vector<Attempt> attempts;
        std::optional<Found> found;
        for (Rule rule : search_order()) {
            found = try_rule(rule, ctx, l, r, depth, path, attempts);
            if (found) break;
        }
        if (!found) {
            bool lseq = std::holds_alternative<Seq>(l.node);
            bool rseq = std::holds_alternative<Seq>(r.node);
            // A bare operand facing a sequence is read as `X; skip`, then as `skip; X`.
            if (lseq && !rseq) {
                found = merge(ctx, l, seq(r, skip()), depth, path);
                if (!found) found = merge(ctx, l, seq(skip(), r), depth, path);
            } else if (rseq && !lseq) {
                found = merge(ctx, seq(l, skip()), r, depth, path);
                if (!found) found = merge(ctx, seq(skip(), l), r, depth, path);
            }
        }
        if (!found) record_failure(l, r, depth, path, std::move(attempts));
        memo_.emplace(std::move(key), found);
        return found;
    }

    std::optional<Found> try_rule(Rule rule, const TypingContext& ctx, const ProtocolType& l, const ProtocolType& r,
                                  int depth, const std::string& path, std::vector<Attempt>& attempts) {
        const auto* lm = std::get_if<Message>(&l.node);
        const auto* rm = std::get_if<Message>(&r.node);
        const auto* ls = std::get_if<Seq>(&l.node);
        const auto* rs = std::get_if<Seq>(&r.node);
        bool lskip = std::holds_alternative<Skip>(l.node);
        bool rskip = std::holds_alternative<Skip>(r.node);
        const Message* lhead = ls != nullptr ? std::get_if<Message>(&ls->first->node) : nullptr;
        const Message* rhead = rs != nullptr ? std::get_if<Message>(&rs->first->node) : nullptr;

        TraceStep step{rule_name(rule), print_protocol_inline(l), print_protocol_inline(r), {}, {}};
        std::string why;
        auto fail = [&](const std::string& reason) -> std::optional<Found> {
            attempts.push_back({step, std::string(rule_name(rule)) + ": " + reason});
            return std::nullopt;
        };
        auto done = [&](const ProtocolType& type, std::initializer_list<const Found*> subs) -> std::optional<Found> {
            Found f{normalize_seq(type), {step}};
            for (const Found* sub : subs) f.steps.insert(f.steps.end(), sub->steps.begin(), sub->steps.end());
            return f;
        };
        auto holds = [&](std::vector<Premise> premises) { return check(ctx, step, premises, why); };

        switch (rule) {
            case Rule::SkipSkip:
                if (!lskip || !rskip) return std::nullopt;
                return done(skip(), {});
            case Rule::SkipMsgS:
                if (!lskip || rm == nullptr) return std::nullopt;
                if (!holds({not_k(*rm)})) return fail(why);
                return done(skip(), {});
            case Rule::MsgSSkip:
                if (lm == nullptr || !rskip) return std::nullopt;
                if (!holds({not_rank(*lm)})) return fail(why);
                return done(skip(), {});
            case Rule::MsgSMsgS:
                if (lm == nullptr || rm == nullptr) return std::nullopt;
                if (!holds({not_rank(*lm), not_k(*rm)})) return fail(why);
                return done(skip(), {});
            case Rule::MsgSkip:
                if (lm == nullptr || !rskip) return std::nullopt;
                if (!holds({rank_either(*lm), not_k(*lm)})) return fail(why);
                return done(l, {});
            case Rule::MsgMsgS:
                if (lm == nullptr || rm == nullptr) return std::nullopt;
                if (!holds({rank_either(*lm), not_k(*lm), not_k(*rm)})) return fail(why);
                return done(l, {});
            case Rule::SkipMsg:
                if (!lskip || rm == nullptr) return std::nullopt;
                if (!holds({not_rank(*rm), k_either(*rm)})) return fail(why);
                return done(r, {});
            case Rule::MsgSMsg:
                if (lm == nullptr || rm == nullptr) return std::nullopt;
                if (!holds({not_rank(*lm), not_rank(*rm), k_either(*rm)})) return fail(why);
                return done(r, {});
            case Rule::MsgMsgEq:
                if (lm == nullptr || rm == nullptr) return std::nullopt;
                if (!holds({rank_either(*lm), k_either(*rm), same(lm->from, rm->from), same(lm->to, rm->to)})) {
                    return fail(why);
                }
                if (!same_dtype(ctx, step, lm->payload, rm->payload, why)) return fail(why);
                return done(l, {});
            case Rule::MsgMsgRight:
            case Rule::MsgMsgLeft:
                if (lm == nullptr || rm == nullptr) return std::nullopt;
                if (!holds({rank_either(*lm), k_either(*rm), not_k(*lm), not_rank(*rm)})) return fail(why);
                return done(rule == Rule::MsgMsgRight ? seq(r, l) : seq(l, r), {});
            case Rule::AllredAllred: return allred(ctx, l, r, depth, path, step, attempts);
            case Rule::ForeachForeach: return foreach_rule(ctx, l, r, depth, path, step, attempts);
            case Rule::SeqSeq: {
                if (ls == nullptr || rs == nullptr) return std::nullopt;
                auto head = merge(ctx, *ls->first, *rs->first, depth + 1, path + "/head");
                if (!head) return fail("heads do not merge");
                auto tail = merge(ctx, *ls->second, *rs->second, depth + 1, path + "/tail");
                if (!tail) return fail("tails do not merge");
                return done(seq(head->type, tail->type), {&*head, &*tail});
            }
            case Rule::MsgTMsgTLeft: {
                if (lhead == nullptr || rhead == nullptr) return std::nullopt;
                if (!holds({rank_either(*lhead), k_either(*rhead), not_k(*lhead)})) return fail(why);
                auto rest = merge(ctx, *ls->second, r, depth + 1, path + "/left-tail");
                if (!rest) return fail("remainder does not merge");
                return done(seq(*ls->first, rest->type), {&*rest});
            }
            case Rule::MsgTMsgTRight: {
                if (lhead == nullptr || rhead == nullptr) return std::nullopt;
                if (!holds({rank_either(*lhead), k_either(*rhead), not_rank(*rhead)})) return fail(why);
                auto rest = merge(ctx, l, *rs->second, depth + 1, path + "/right-tail");
                if (!rest) return fail("remainder does not merge");
                return done(seq(*rs->first, rest->type), {&*rest});
            }
            case Rule::SkipMsgT: {
                if (!lskip || rhead == nullptr) return std::nullopt;
                auto first = merge(ctx, skip(), *rs->first, depth + 1, path + "/head");
                if (!first) return fail("skip does not merge with the head message");
                auto rest = merge(ctx, skip(), *rs->second, depth + 1, path + "/tail");
                if (!rest) return fail("skip does not merge with the remainder");
                return done(seq(first->type, rest->type), {&*first, &*rest});
            }
            case Rule::MsgTSkipT: {
                if (lhead == nullptr || !rskip) return std::nullopt;
                auto first = merge(ctx, *ls->first, skip(), depth + 1, path + "/head");
                if (!first) return fail("the head message does not merge with skip");
                auto rest = merge(ctx, *ls->second, skip(), depth + 1, path + "/tail");
                if (!rest) return fail("the remainder does not merge with skip");
                return done(seq(first->type, rest->type), {&*first, &*rest});
            }
        }
        return std::nullopt;
    }

    Diagnostic diagnostic() const {
        DiagnosticKind kind = DiagnosticKind::DeadlockSuspected;
        if (undecidable_) {
            kind = DiagnosticKind::EntailmentUndecidable;
        } else if (dtype_mismatch_) {
            kind = DiagnosticKind::DatatypeMismatch;
        } else if (bounds_mismatch_) {
            kind = DiagnosticKind::EntailmentFailed;
        }
        std::vector<std::string> rule_trace;
        for (const auto& a : deepest_attempts_) rule_trace.push_back(a.summary);
        return Diagnostic{kind, location_, rule_trace, std::string("no merge rule applies (") + to_string(kind) + ") at " + location_};
    }

    MergeTrace failure_trace() const {
        MergeTrace trace;
        for (const auto& a : deepest_attempts_) trace.steps.push_back(a.step);
        return trace;
    }

  private:
    static const std::vector<Rule>& search_order() {
        static const std::vector<Rule> order = {
            Rule::SkipSkip,      Rule::SkipMsgS,     Rule::MsgSSkip,     Rule::MsgSMsgS,
            Rule::MsgSkip,       Rule::MsgMsgS,      Rule::SkipMsg,      Rule::MsgSMsg,
            Rule::MsgMsgEq,      Rule::AllredAllred, Rule::ForeachForeach, Rule::SeqSeq,
            Rule::SkipMsgT,      Rule::MsgTSkipT,    Rule::MsgMsgRight,  Rule::MsgMsgLeft,
            Rule::MsgTMsgTLeft,  Rule::MsgTMsgTRight,
        };
        return order;
    }

    Proposition in_ranks(const IndexTerm& i) const {
        std::vector<Proposition> alts;
        for (std::int64_t r : ranks_) alts.push_back(eq(i, lit(r)));
        return disj_all(std::move(alts));
    }

    Proposition outside_ranks(const IndexTerm& i) const {
        std::vector<Proposition> all;
        for (std::int64_t r : ranks_) all.push_back(ne(i, lit(r)));
        return conj_all(std::move(all));
    }

    // (i1 = rank or i2 = rank)
    Premise rank_either(const Message& m) const {
        return {disj(eq(m.from, var("rank")), eq(m.to, var("rank"))), disj(in_ranks(m.from), in_ranks(m.to))};
    }

    // i1, i2 != rank
    Premise not_rank(const Message& m) const {
        return {conj(ne(m.from, var("rank")), ne(m.to, var("rank"))), conj(outside_ranks(m.from), outside_ranks(m.to))};
    }

    // (i3 = k or i4 = k)
    Premise k_either(const Message& m) const {
        Proposition p = disj(eq(m.from, lit(k_)), eq(m.to, lit(k_)));
        return {p, p};
    }

    // i1, i2 != k
    Premise not_k(const Message& m) const {
        Proposition p = conj(ne(m.from, lit(k_)), ne(m.to, lit(k_)));
        return {p, p};
    }

    static Premise same(const IndexTerm& a, const IndexTerm& b) { return {eq(a, b), eq(a, b)}; }

    bool check(const TypingContext& ctx, TraceStep& step, const std::vector<Premise>& premises, std::string& why) {
        for (const auto& p : premises) {
            Verdict v = entails(ctx, p.actual, options_.logic);
            step.premises.push_back({p.display, v});
            if (v == Verdict::Undecidable) undecidable_ = true;
            if (v != Verdict::Valid) {
                why = "premise " + print_prop(p.display) + " is " + to_string(v);
                return false;
            }
        }
        return true;
    }

    bool same_dtype(const TypingContext& ctx, TraceStep& step, const Datatype& a, const Datatype& b, std::string& why) {
        Verdict v = dtype_compare(ctx, a, b, options_.logic);
        std::string text = print_datatype(a) + " == " + print_datatype(b);
        step.datatype_checks.push_back(text + " : " + to_string(v));
        if (v == Verdict::Valid) return true;
        if (v == Verdict::Undecidable) {
            undecidable_ = true;
        } else {
            dtype_mismatch_ = true;
        }
        why = "datatypes " + text + " " + to_string(v);
        return false;
    }

    std::optional<Found> allred(const TypingContext& ctx, const ProtocolType& l, const ProtocolType& r, int depth,
                                const std::string& path, TraceStep& step, std::vector<Attempt>& attempts) {
        const auto* a1 = std::get_if<Allreduce>(&l.node);
        const auto* a2 = std::get_if<Allreduce>(&r.node);
        if (a1 == nullptr || a2 == nullptr) return std::nullopt;
        auto fail = [&](const std::string& reason) -> std::optional<Found> {
            attempts.push_back({step, std::string("allred-allred: ") + reason});
            return std::nullopt;
        };
        if (a1->op != a2->op) {
            dtype_mismatch_ = true;
            step.datatype_checks.push_back(std::string("operator ") + to_string(a1->op) + " == " + to_string(a2->op) +
                                           " : invalid");
            return fail(std::string("operators differ: ") + to_string(a1->op) + " vs " + to_string(a2->op));
        }
        std::string why;
        if (!same_dtype(ctx, step, a1->payload, a2->payload, why)) return fail(why);

        ProtocolType c1 = *a1->cont;
        ProtocolType c2 = *a2->cont;
        std::string binder = a1->binder != kAnonymousBinder ? a1->binder : a2->binder;
        TypingContext inner = ctx;
        if (binder != kAnonymousBinder) {
            std::set<std::string> avoid = protocol_vars(c1);
            auto more = protocol_vars(c2);
            avoid.insert(more.begin(), more.end());
            std::string x = ctx.contains(binder) ? fresh_binder(binder, ctx, avoid) : binder;
            if (a1->binder != kAnonymousBinder && a1->binder != x) c1 = substitute(c1, a1->binder, var(x));
            if (a2->binder != kAnonymousBinder && a2->binder != x) c2 = substitute(c2, a2->binder, var(x));
            inner = ctx.extended(x, a1->payload);
            binder = x;
        }
        auto cont = merge(inner, c1, c2, depth + 1, path + "/cont");
        if (!cont) return fail("continuations do not merge");
        Found f{allreduce(a1->op, binder, a1->payload, cont->type), {step}};
        f.steps.insert(f.steps.end(), cont->steps.begin(), cont->steps.end());
        return f;
    }

    std::optional<Found> foreach_rule(const TypingContext& ctx, const ProtocolType& l, const ProtocolType& r, int depth,
                                      const std::string& path, TraceStep& step, std::vector<Attempt>& attempts) {
        const auto* f1 = std::get_if<Foreach>(&l.node);
        const auto* f2 = std::get_if<Foreach>(&r.node);
        if (f1 == nullptr || f2 == nullptr) return std::nullopt;
        auto fail = [&](const std::string& reason) -> std::optional<Found> {
            attempts.push_back({step, std::string("foreach-foreach: ") + reason});
            return std::nullopt;
        };
        for (const auto& [a, b] : {std::pair{f1->lo, f2->lo}, std::pair{f1->hi, f2->hi}}) {
            Verdict v = entails(ctx, eq(a, b), options_.logic);
            step.premises.push_back({eq(a, b), v});
            if (v == Verdict::Undecidable) undecidable_ = true;
            if (v == Verdict::Invalid) bounds_mismatch_ = true;
            if (v != Verdict::Valid) return fail("premise " + print_prop(eq(a, b)) + " is " + to_string(v));
        }
        std::set<std::string> avoid = protocol_vars(*f1->body);
        auto more = protocol_vars(*f2->body);
        avoid.insert(more.begin(), more.end());
        std::string x = ctx.contains(f1->binder) ? fresh_binder(f1->binder, ctx, avoid) : f1->binder;
        ProtocolType b1 = x == f1->binder ? *f1->body : substitute(*f1->body, f1->binder, var(x));
        ProtocolType b2 = x == f2->binder ? *f2->body : substitute(*f2->body, f2->binder, var(x));

        std::set<std::string> bound_vars = free_vars(f1->lo);
        auto hi_vars = free_vars(f1->hi);
        bound_vars.insert(hi_vars.begin(), hi_vars.end());
        std::string y = "y";
        for (int i = 1; bound_vars.count(y) != 0; ++i) y = "y" + std::to_string(i);
        TypingContext inner =
            ctx.extended(x, refined(y, BaseType::Integer, conj(le(f1->lo, var(y)), le(var(y), f1->hi))));
        auto body = merge(inner, b1, b2, depth + 1, path + "/body");
        if (!body) return fail("bodies do not merge");
        Found f{foreach_(x, f1->lo, f1->hi, body->type), {step}};
        f.steps.insert(f.steps.end(), body->steps.begin(), body->steps.end());
        return f;
    }

    void record_failure(const ProtocolType& l, const ProtocolType& r, int depth, const std::string& path,
                        std::vector<Attempt> attempts) {
        if (depth <= deepest_) return;
        deepest_ = depth;
        location_ = path + ": " + print_protocol_inline(l) + " || " + print_protocol_inline(r);
        if (attempts.empty()) {
            TraceStep none{"none", print_protocol_inline(l), print_protocol_inline(r), {}, {}};
            attempts.push_back({none, "no rule matches these shapes"});
        }
        deepest_attempts_ = std::move(attempts);
    }

    const MergeOptions& options_;
    std::vector<std::int64_t> ranks_;
    std::int64_t k_;
    std::map<std::string, std::optional<Found>> memo_;
    bool undecidable_ = false;
    bool dtype_mismatch_ = false;
    bool bounds_mismatch_ = false;
    int deepest_ = -1;
    std::string location_;
    std::vector<Attempt> deepest_attempts_;
};

std::vector<std::int64_t> merged_ranks(const TypingContext& ctx, std::int64_t k) {
    Domain d = domain_of(ctx, "rank");
    std::vector<std::int64_t> ranks;
    if (const auto* s = std::get_if<FiniteSet>(&d)) {
        ranks = s->values;
    } else if (const auto* i = std::get_if<Interval>(&d)) {
        if (i->hi - i->lo > 4096) throw LogicError("rank domain is too large");
        for (std::int64_t v = i->lo; v <= i->hi; ++v) ranks.push_back(v);
    } else {
        throw LogicError("rank domain is unbounded");
    }
    if (std::find(ranks.begin(), ranks.end(), k) != ranks.end()) {
        throw LogicError("rank " + std::to_string(k) + " is already merged");
    }
    return ranks;
}

}  // namespace

MergeResult merge_types(const TypingContext& ctx, const ProtocolType& left, const ProtocolType& right, std::int64_t k,
                        const MergeOptions& options) {
    Engine engine(options, merged_ranks(ctx, k), k);
    auto found = engine.merge(ctx, normalize_seq(left), normalize_seq(right), 0, "root");
    if (!found) throw MergeFailure(engine.diagnostic(), engine.failure_trace());
    return {normalize_seq(found->type), MergeTrace{found->steps}};
}

std::optional<ProtocolType> apply_rule(Rule rule, const TypingContext& ctx, const ProtocolType& left,
                                       const ProtocolType& right, std::int64_t k, const MergeOptions& options) {
    Engine engine(options, merged_ranks(ctx, k), k);
    std::vector<Attempt> attempts;
    auto found = engine.try_rule(rule, ctx, left, right, 0, "root", attempts);
    if (!found) return std::nullopt;
    return found->type;
}

ProtocolType unfold_foreach(const TypingContext& ctx, const ProtocolType& type) {
    const auto* f = std::get_if<Foreach>(&type.node);
    if (f == nullptr) throw UnfoldError(UnfoldError::Kind::NonConstantBounds, "not a foreach loop");
    auto lo = constant_value(ctx, f->lo);
    auto hi = constant_value(ctx, f->hi);
    if (!lo || !hi) {
        throw UnfoldError(UnfoldError::Kind::NonConstantBounds,
                          "foreach bounds are not constant: " + print_index(f->lo) + ".." + print_index(f->hi));
    }
    std::vector<ProtocolType> items;
    for (std::int64_t i = *lo; i <= *hi; ++i) items.push_back(substitute(*f->body, f->binder, lit(i)));
    return normalize_seq(seq_all(std::move(items)));
}

namespace {

ProtocolType head_of(const ProtocolType& type) {
    if (const auto* s = std::get_if<Seq>(&type.node)) return *s->first;
    return type;
}

// The type with its head foreach unfolded, when that loop has constant bounds within the cap.
std::optional<ProtocolType> unfold_head(const TypingContext& ctx, const ProtocolType& type, std::size_t cap) {
    ProtocolType head = head_of(type);
    const auto* f = std::get_if<Foreach>(&head.node);
    if (f == nullptr) return std::nullopt;
    auto lo = constant_value(ctx, f->lo);
    auto hi = constant_value(ctx, f->hi);
    if (!lo || !hi) return std::nullopt;
    if (*hi >= *lo && static_cast<std::uint64_t>(*hi - *lo) + 1 > cap) return std::nullopt;
    ProtocolType unfolded = unfold_foreach(ctx, head);
    if (const auto* s = std::get_if<Seq>(&type.node)) return normalize_seq(seq(unfolded, *s->second));
    return unfolded;
}

std::string rank_list(const std::set<std::int64_t>& ranks) {
    std::string out;
    for (std::int64_t r : ranks) out += (out.empty() ? "" : ",") + std::to_string(r);
    return "{" + out + "}";
}

}  // namespace

MergeAllResult merge_all(std::int64_t n, const std::vector<std::pair<std::int64_t, ProtocolType>>& local_types,
                         const std::vector<std::int64_t>& order, const MergeOptions& options) {
    if (n < 2) throw std::invalid_argument("process count must be at least 2");
    std::map<std::int64_t, ProtocolType> by_rank;
    for (const auto& [rank, type] : local_types) {
        if (rank < 0 || rank >= n) throw std::invalid_argument("rank " + std::to_string(rank) + " out of range");
        if (!by_rank.emplace(rank, normalize_seq(type)).second) {
            throw std::invalid_argument("rank " + std::to_string(rank) + " given twice");
        }
    }
    if (static_cast<std::int64_t>(by_rank.size()) != n) throw std::invalid_argument("local types must cover every rank");
    std::vector<std::int64_t> sequence = order;
    if (sequence.empty()) {
        for (std::int64_t r = 0; r < n; ++r) sequence.push_back(r);
    }
    std::vector<std::int64_t> sorted = sequence;
    std::sort(sorted.begin(), sorted.end());
    for (std::int64_t r = 0; r < n; ++r) {
        if (static_cast<std::int64_t>(sorted.size()) != n || sorted[r] != r) {
            throw std::invalid_argument("merge order must be a permutation of 0.." + std::to_string(n - 1));
        }
    }

    MergeAllResult out{by_rank.at(sequence.front()), {}};
    std::set<std::int64_t> merged{sequence.front()};
    for (std::size_t step = 1; step < sequence.size(); ++step) {
        std::int64_t k = sequence[step];
        TypingContext ctx = merged_context(n, merged);
        const ProtocolType& local = by_rank.at(k);
        std::string where = "merging rank " + std::to_string(k) + " into " + rank_list(merged);
        try {
            MergeResult r;
            try {
                r = merge_types(ctx, out.type, local, k, options);
            } catch (const MergeFailure&) {
                auto left = unfold_head(ctx, out.type, options.unroll);
                auto right = unfold_head(ctx, local, options.unroll);
                if (left.has_value() == right.has_value()) throw;
                r = left ? merge_types(ctx, *left, local, k, options) : merge_types(ctx, out.type, *right, k, options);
            }
            out.type = r.type;
            out.traces.push_back(std::move(r.trace));
        } catch (const MergeFailure& failure) {
            Diagnostic d = failure.diagnostic();
            d.location = where + ": " + d.location;
            d.message = where + ": " + d.message;
            throw MergeFailure(std::move(d), failure.trace());
        }
        merged.insert(k);
    }
    out.type = normalize_seq(substitute(out.type, "size", lit(n)));
    return out;
}

}  // namespace protomerge
