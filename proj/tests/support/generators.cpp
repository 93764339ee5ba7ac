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

#include "generators.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "protomerge/logic.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge::testing {

namespace {

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(items.size()) - 1))];
}

const std::vector<std::string> kNames = {"a", "b", "x", "y", "iter", "pipe", "size", "rank"};
const std::vector<ArithOp> kArith = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div};
const std::vector<CmpOp> kCmp = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
const std::vector<ReduceOp> kReduce = {ReduceOp::Min, ReduceOp::Max, ReduceOp::Sum, ReduceOp::Prod};

}  // namespace

IndexTerm random_index(Rng& rng, const std::vector<std::string>& vars, int depth) {
    int choice = static_cast<int>(uniform(rng, 0, depth <= 0 ? 1 : 5));
    switch (choice) {
        case 0: return lit(uniform(rng, -8, 12));
        case 1:
            if (vars.empty()) return lit(uniform(rng, -8, 12));
            return var(pick(rng, vars));
        case 5:
            return cond(random_prop(rng, vars, depth - 1), random_index(rng, vars, depth - 1),
                        random_index(rng, vars, depth - 1));
        default:
            return binop(pick(rng, kArith), random_index(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
    }
}

Proposition random_prop(Rng& rng, const std::vector<std::string>& vars, int depth) {
    int choice = static_cast<int>(uniform(rng, 0, depth <= 0 ? 1 : 5));
    switch (choice) {
        case 0:
            if (coin(rng, 0.2)) return ptrue();
            [[fallthrough]];
        case 1: return cmp(pick(rng, kCmp), random_index(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
        case 2: return conj(random_prop(rng, vars, depth - 1), random_prop(rng, vars, depth - 1));
        case 3: return disj(random_prop(rng, vars, depth - 1), random_prop(rng, vars, depth - 1));
        case 4: return neg(random_prop(rng, vars, depth - 1));
        default: return cmp(pick(rng, kCmp), random_index(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
    }
}

Datatype random_datatype(Rng& rng, const std::vector<std::string>& vars, int depth) {
    int choice = static_cast<int>(uniform(rng, 0, depth <= 0 ? 2 : 4));
    switch (choice) {
        case 0: return integer_type();
        case 1: return float_type();
        case 2: return hole("h" + std::to_string(uniform(rng, 0, 3)));
        case 3: return array_of(random_datatype(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
        default: {
            std::string binder = coin(rng) ? "v" : "w";
            std::vector<std::string> inner = vars;
            inner.push_back(binder);
            return refined(binder, coin(rng) ? BaseType::Integer : BaseType::Float,
                           random_prop(rng, inner, depth - 1));
        }
    }
}

ProtocolType random_protocol(Rng& rng, int depth) {
    int choice = static_cast<int>(uniform(rng, 0, depth <= 0 ? 1 : 5));
    switch (choice) {
        case 0: return skip();
        case 1:
            return message(random_index(rng, kNames, depth - 1), random_index(rng, kNames, depth - 1),
                           random_datatype(rng, kNames, depth - 1));
        case 2:
            if (coin(rng)) return allreduce(pick(rng, kReduce), random_datatype(rng, kNames, depth - 1));
            return allreduce(pick(rng, kReduce), pick(rng, kNames), random_datatype(rng, kNames, depth - 1),
                             random_protocol(rng, depth - 1));
        case 3:
            return foreach_(pick(rng, kNames), random_index(rng, kNames, depth - 1),
                            random_index(rng, kNames, depth - 1), random_protocol(rng, depth - 1));
        default: return seq(random_protocol(rng, depth - 1), random_protocol(rng, depth - 1));
    }
}

Process random_process(Rng& rng, int depth) {
    int choice = static_cast<int>(uniform(rng, 0, depth <= 0 ? 3 : 7));
    switch (choice) {
        case 0: return pskip();
        case 1: return send(random_index(rng, kNames, depth - 1), random_datatype(rng, kNames, depth - 1));
        case 2: return recv(random_index(rng, kNames, depth - 1), random_datatype(rng, kNames, depth - 1));
        case 3: return allreduce_stmt(pick(rng, kReduce), random_datatype(rng, kNames, depth - 1));
        case 4:
            return for_(pick(rng, kNames), random_index(rng, kNames, depth - 1), random_index(rng, kNames, depth - 1),
                        random_process(rng, depth - 1));
        case 5:
            return if_(random_prop(rng, kNames, depth - 1), random_process(rng, depth - 1),
                       random_process(rng, depth - 1));
        case 6: return constrain(random_datatype(rng, kNames, depth - 1), random_datatype(rng, kNames, depth - 1));
        default: return pseq(random_process(rng, depth - 1), random_process(rng, depth - 1));
    }
}

BoxedContext random_boxed_context(Rng& rng, std::int64_t max_product) {
    for (;;) {
        BoxedContext out;
        std::vector<ContextEntry> entries;
        std::vector<std::string> earlier;
        int count = static_cast<int>(uniform(rng, 1, 3));
        std::int64_t budget = max_product;
        for (int i = 0; i < count; ++i) {
            std::string name = "x" + std::to_string(i);
            std::int64_t per_var = std::max<std::int64_t>(1, budget / std::max(1, (count - i)));
            std::int64_t width = uniform(rng, 1, std::min<std::int64_t>(per_var, 25));
            std::int64_t lo = uniform(rng, -6, 6);
            std::int64_t hi = lo + width - 1;
            budget = std::max<std::int64_t>(1, budget / width);
            Proposition box = conj(le(lit(lo), var("v")), le(var("v"), lit(hi)));
            Proposition pred = box;
            switch (uniform(rng, 0, 3)) {
                case 0: break;
                case 1: {
                    std::vector<Proposition> alts;
                    for (int j = 0, m = static_cast<int>(uniform(rng, 1, 3)); j < m; ++j) {
                        alts.push_back(eq(var("v"), lit(uniform(rng, lo, hi))));
                    }
                    pred = disj_all(alts);
                    break;
                }
                case 2: {
                    std::vector<std::string> scope = earlier;
                    scope.push_back("v");
                    pred = conj(box, random_prop(rng, scope, 2));
                    break;
                }
                default: pred = conj(box, ne(var("v"), lit(uniform(rng, lo, hi)))); break;
            }
            entries.push_back({name, refined("v", BaseType::Integer, pred)});
            out.boxes.push_back({name, {lo, hi}});
            earlier.push_back(name);
        }
        out.ctx = TypingContext(entries);
        // Require at least one satisfying assignment.
        if (!brute_force_entails(out, neg(ptrue()))) return out;
    }
}

std::vector<Message> flatten_messages(const ProtocolType& type) {
    std::vector<Message> out;
    std::vector<const ProtocolType*> stack{&type};
    while (!stack.empty()) {
        const ProtocolType* t = stack.back();
        stack.pop_back();
        if (const auto* s = std::get_if<Seq>(&t->node)) {
            stack.push_back(&*s->second);
            stack.push_back(&*s->first);
        } else if (const auto* m = std::get_if<Message>(&t->node)) {
            out.push_back(*m);
        } else if (!std::holds_alternative<Skip>(t->node)) {
            throw std::invalid_argument("not a message sequence: " + print_protocol_inline(*t));
        }
    }
    return out;
}

ProtocolInstance random_protocol_instance(Rng& rng, std::size_t max_actions) {
    static const std::vector<Datatype> payloads = {
        array_of(float_type(), lit(8)),
        integer_type(),
        array_of(float_type(), lit(4)),
        refined("v", BaseType::Integer, cmp(CmpOp::Ge, var("v"), lit(0))),
    };
    ProtocolInstance out;
    out.n = uniform(rng, 2, 4);
    std::vector<std::vector<Message>> local(static_cast<std::size_t>(out.n));
    std::size_t target = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(out.n * max_actions / 2)));
    for (std::size_t step = 0, tries = 0; step < target && tries < 200; ++tries) {
        std::int64_t a = uniform(rng, 0, out.n - 1);
        std::int64_t b = uniform(rng, 0, out.n - 2);
        if (b >= a) ++b;
        if (local[a].size() >= max_actions || local[b].size() >= max_actions) continue;
        Message m{lit(a), lit(b), pick(rng, payloads)};
        local[a].push_back(m);
        local[b].push_back(m);
        ++step;
    }
    if (coin(rng)) {
        std::vector<std::size_t> busy;
        for (std::size_t r = 0; r < local.size(); ++r) {
            if (!local[r].empty()) busy.push_back(r);
        }
        if (!busy.empty()) {
            auto& seq_r = local[pick(rng, busy)];
            auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(seq_r.size()) - 1));
            switch (uniform(rng, 0, 3)) {
                case 0:
                    if (seq_r.size() >= 2) {
                        std::size_t j = i + 1 < seq_r.size() ? i + 1 : i - 1;
                        std::swap(seq_r[i], seq_r[j]);
                        out.perturbed = true;
                    }
                    break;
                case 1:
                    std::swap(seq_r[i].from, seq_r[i].to);
                    out.perturbed = true;
                    break;
                case 2:
                    seq_r.erase(seq_r.begin() + static_cast<std::ptrdiff_t>(i));
                    out.perturbed = true;
                    break;
                default: {
                    Datatype other = pick(rng, payloads);
                    if (!(other == seq_r[i].payload)) {
                        seq_r[i].payload = other;
                        out.perturbed = true;
                    }
                    break;
                }
            }
        }
    }
    for (const auto& msgs : local) {
        std::vector<ProtocolType> items;
        for (const auto& m : msgs) items.push_back(ProtocolType{m});
        out.local_types.push_back(seq_all(items));
    }
    return out;
}

std::string check_conservation(const ProtocolInstance& instance, const ProtocolType& merged) {
    std::vector<Message> out = flatten_messages(merged);
    std::vector<std::vector<Message>> local;
    std::size_t total = 0;
    for (const auto& t : instance.local_types) {
        local.push_back(flatten_messages(t));
        total += local.back().size();
    }
    if (out.size() * 2 != total) {
        return "expected " + std::to_string(total / 2) + " messages, merged type has " + std::to_string(out.size());
    }
    for (const auto& m : out) {
        auto from = as_literal(m.from);
        auto to = as_literal(m.to);
        if (!from || !to || *from < 0 || *to < 0 || *from >= instance.n || *to >= instance.n) {
            return "message with unexpected endpoints: " + print_protocol_inline(ProtocolType{m});
        }
        for (std::int64_t r : {*from, *to}) {
            const auto& mine = local[static_cast<std::size_t>(r)];
            if (std::find(mine.begin(), mine.end(), m) == mine.end()) {
                return print_protocol_inline(ProtocolType{m}) + " is absent from rank " + std::to_string(r);
            }
        }
    }
    for (std::int64_t r = 0; r < instance.n; ++r) {
        std::vector<Message> projected;
        for (const auto& m : out) {
            if (as_literal(m.from) == r || as_literal(m.to) == r) projected.push_back(m);
        }
        if (projected != local[static_cast<std::size_t>(r)]) {
            return "projection onto rank " + std::to_string(r) + " differs from its local type";
        }
    }
    return {};
}

Datatype nbody_payload_symbolic() { return array_of(float_type(), lit(1000000) / var("size") * lit(4)); }

Datatype nbody_payload_sized() { return array_of(float_type(), lit(1000000) / lit(3) * lit(4)); }

namespace {

ProtocolType nbody_shape(std::vector<ProtocolType> pipe_body) {
    return foreach_("iter", lit(1), lit(5000000),
                    seq(foreach_("pipe", lit(1), lit(2), seq_all(std::move(pipe_body))),
                        allreduce(ReduceOp::Min, float_type())));
}

}  // namespace

ProtocolType nbody_protocol() {
    Datatype d = nbody_payload_sized();
    return foreach_("iter", lit(1), lit(5000000),
                    seq(foreach_("pipe", lit(1), lit(2),
                                 seq_all({message(lit(0), lit(1), d), message(lit(1), lit(2), d),
                                          message(lit(2), lit(0), d)})),
                        allreduce(ReduceOp::Min, float_type())));
}

ProtocolType nbody_local_type(std::int64_t rank) {
    Datatype d = nbody_payload_symbolic();
    switch (rank) {
        case 0: return nbody_shape({message(lit(0), lit(1), d), message(lit(2), lit(0), d)});
        case 1: return nbody_shape({message(lit(0), lit(1), d), message(lit(1), lit(2), d)});
        case 2: return nbody_shape({message(lit(1), lit(2), d), message(lit(2), lit(0), d)});
        default: throw std::invalid_argument("n-body goldens exist for ranks 0..2");
    }
}

ProtocolType one_to_all_local_type(std::int64_t rank) {
    Datatype d = array_of(float_type(), var("n") * lit(4));
    if (rank == 0) return foreach_("i", lit(1), lit(2), message(lit(0), var("i"), d));
    return message(lit(0), lit(rank), d);
}

ProtocolType one_to_all_protocol() {
    Datatype d = array_of(float_type(), var("n") * lit(4));
    return seq(message(lit(0), lit(1), d), message(lit(0), lit(2), d));
}

std::vector<RuleCase> rule_cases() {
    Datatype d = array_of(float_type(), lit(8));
    auto m = [&](std::int64_t a, std::int64_t b) { return message(lit(a), lit(b), d); };
    auto ms = [&](std::vector<std::pair<std::int64_t, std::int64_t>> pairs) {
        std::vector<ProtocolType> items;
        for (auto [a, b] : pairs) items.push_back(m(a, b));
        return seq_all(items);
    };
    TypingContext c3 = merged_context(3, {0});
    TypingContext c4 = merged_context(4, {0});
    TypingContext c3b = merged_context(3, {0, 1});
    ProtocolType sk = skip();

    std::vector<RuleCase> cases;
    auto add = [&](Rule rule, const TypingContext& ctx, std::int64_t k, ProtocolType l, ProtocolType r,
                   ProtocolType expected, ProtocolType nl, ProtocolType nr, std::string negated) {
        cases.push_back({rule, ctx, k, l, r, expected, ctx, k, nl, nr, negated});
    };
    add(Rule::SkipSkip, c3, 1, sk, sk, sk, sk, m(1, 2), "right operand is not skip");
    add(Rule::SkipMsgS, c3, 1, sk, m(0, 2), sk, sk, m(0, 1), "i4 != k");
    add(Rule::MsgSSkip, c4, 1, m(2, 3), sk, sk, m(0, 2), sk, "i1 != rank");
    add(Rule::MsgSMsgS, c4, 1, m(2, 3), m(3, 2), sk, m(2, 3), m(1, 2), "i3 != k");
    add(Rule::MsgSkip, c3, 1, m(0, 2), sk, m(0, 2), m(0, 1), sk, "i2 != k");
    add(Rule::MsgMsgS, c4, 1, m(0, 2), m(2, 3), m(0, 2), m(0, 2), m(2, 1), "i4 != k");
    add(Rule::SkipMsg, c3, 1, sk, m(1, 2), m(1, 2), sk, m(1, 0), "i4 != rank");
    add(Rule::MsgSMsg, c4, 1, m(2, 3), m(1, 2), m(1, 2), m(2, 3), m(1, 0), "i4 != rank");
    add(Rule::MsgMsgEq, c3, 1, m(0, 1), m(0, 1), m(0, 1), m(0, 1), m(2, 1), "i1 = i3");
    add(Rule::MsgMsgRight, c3, 1, m(2, 0), m(1, 2), ms({{1, 2}, {2, 0}}), m(2, 0), m(1, 0), "i4 != rank");
    add(Rule::MsgMsgLeft, c3, 1, m(2, 0), m(1, 2), ms({{2, 0}, {1, 2}}), m(2, 1), m(1, 2), "i2 != k");
    add(Rule::AllredAllred, c3, 1, allreduce(ReduceOp::Min, float_type()), allreduce(ReduceOp::Min, float_type()),
        allreduce(ReduceOp::Min, float_type()), allreduce(ReduceOp::Min, float_type()),
        allreduce(ReduceOp::Min, integer_type()), "D1 == D2");
    add(Rule::ForeachForeach, c3, 1, foreach_("i", lit(1), lit(2), m(0, 1)), foreach_("j", lit(1), lit(2), m(0, 1)),
        foreach_("i", lit(1), lit(2), m(0, 1)), foreach_("i", lit(1), lit(2), m(0, 1)),
        foreach_("j", lit(1), lit(3), m(0, 1)), "i1' = i2'");
    add(Rule::SeqSeq, c3, 1, ms({{0, 1}, {0, 1}}), ms({{0, 1}, {0, 1}}), ms({{0, 1}, {0, 1}}), ms({{0, 1}, {0, 1}}),
        ms({{0, 1}, {1, 0}}), "tails merge");
    add(Rule::MsgTMsgTLeft, c3b, 2, ms({{0, 1}, {1, 2}, {2, 0}}), ms({{1, 2}, {2, 0}}), ms({{0, 1}, {1, 2}, {2, 0}}),
        ms({{0, 2}, {1, 2}, {2, 0}}), ms({{1, 2}, {2, 0}}), "i1, i2 != k");
    add(Rule::MsgTMsgTRight, c3, 1, ms({{0, 1}, {0, 2}}), ms({{1, 2}, {0, 1}}), ms({{1, 2}, {0, 1}, {0, 2}}),
        ms({{0, 1}, {0, 2}}), ms({{1, 0}, {0, 1}}), "i3, i4 != rank");
    add(Rule::SkipMsgT, c3, 1, sk, ms({{1, 2}, {1, 2}}), ms({{1, 2}, {1, 2}}), sk, ms({{1, 0}, {1, 2}}),
        "skip merges with the head message");
    add(Rule::MsgTSkipT, c3, 1, ms({{0, 2}, {0, 2}}), sk, ms({{0, 2}, {0, 2}}), ms({{0, 1}, {0, 2}}), sk,
        "the head message merges with skip");
    return cases;
}

std::string samples_dir() { return PROTOMERGE_SAMPLES_DIR; }

std::string read_sample(const std::string& name) {
    std::ifstream in(samples_dir() + "/" + name);
    if (!in) throw std::runtime_error("missing sample " + name);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace protomerge::testing
