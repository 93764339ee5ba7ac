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

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "generators.hpp"
#include "protomerge/error.hpp"
#include "protomerge/extract.hpp"
#include "protomerge/logic.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/oracle.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {
namespace {

constexpr std::uint64_t kSeed = 20261019;

std::string first_problems(const testing::CorpusReport& r) {
    std::string out;
    for (const auto& p : r.problems) out += p + "\n---\n";
    return out;
}

TEST(Properties, ParserRoundTrip) {
    auto r = testing::roundtrip_corpus(kSeed, 1000);
    EXPECT_EQ(r.cases, 2000);
    EXPECT_EQ(r.failures, 0) << first_problems(r);
}

TEST(Properties, EntailmentAgreesWithEnumeration) {
    auto r = testing::entailment_corpus(kSeed, 1000);
    EXPECT_EQ(r.failures, 0) << first_problems(r);
    // Every context is finite and below the enumeration cap, so all cases decide.
    EXPECT_EQ(r.undecidable, 0);
    // The corpus must exercise both answers.
    EXPECT_GT(r.valid, 50);
    EXPECT_GT(r.decided - r.valid, 50);
}

TEST(Properties, MergeSoundAndConservative) {
    auto r = testing::soundness_corpus(kSeed, 500);
    EXPECT_EQ(r.failures, 0) << first_problems(r);
    EXPECT_EQ(r.conservation_failures, 0);
    EXPECT_GT(r.merged, 100);
    EXPECT_GT(r.rejected, 20);
}

TEST(Properties, EvalConditionalMatchesBranches) {
    testing::Rng rng(kSeed);
    std::vector<std::string> vars{"a", "b"};
    for (int i = 0; i < 300; ++i) {
        Assignment env{{"a", static_cast<std::int64_t>(rng() % 7) - 3}, {"b", static_cast<std::int64_t>(rng() % 7) - 3}};
        Proposition p = testing::random_prop(rng, vars, 2);
        IndexTerm x = testing::random_index(rng, vars, 2);
        IndexTerm y = testing::random_index(rng, vars, 2);
        bool test;
        try {
            test = eval_prop(env, p);
        } catch (const EvalError&) {
            continue;
        }
        const IndexTerm& chosen = test ? x : y;
        std::optional<std::int64_t> want;
        try {
            want = eval_index(env, chosen);
        } catch (const EvalError&) {
        }
        if (want) {
            EXPECT_EQ(eval_index(env, cond(p, x, y)), *want);
        } else {
            EXPECT_THROW(eval_index(env, cond(p, x, y)), EvalError);
        }
    }
}

TEST(Properties, NormalizeSeqIdempotent) {
    testing::Rng rng(kSeed);
    for (int i = 0; i < 500; ++i) {
        ProtocolType t = testing::random_protocol(rng, 5);
        ProtocolType once = normalize_seq(t);
        EXPECT_EQ(normalize_seq(once), once);
    }
}

TEST(Properties, SpecializeIdempotent) {
    testing::Rng rng(kSeed);
    for (int i = 0; i < 300; ++i) {
        Process p = testing::random_process(rng, 4);
        std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 3);
        std::int64_t r = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
        Process once;
        try {
            once = specialize(p, r, n);
        } catch (const EvalError&) {
            continue;
        }
        EXPECT_EQ(specialize(once, r, n), once);
    }
}

// Send-first programs and crossed pairs: the merge rejects them and the oracle
// agrees that they deadlock.
TEST(Properties, CuratedDeadlocksAgreeWithOracle) {
    Datatype d = array_of(float_type(), lit(8));
    auto m = [&](std::int64_t a, std::int64_t b) { return message(lit(a), lit(b), d); };
    std::vector<std::pair<std::int64_t, std::vector<ProtocolType>>> corpus = {
        {2, {seq(m(0, 1), m(1, 0)), seq(m(1, 0), m(0, 1))}},
        {3, {seq(m(0, 1), m(2, 0)), seq(m(1, 2), m(0, 1)), seq(m(2, 0), m(1, 2))}},
        {3, {seq(m(0, 1), m(0, 2)), seq(m(2, 1), m(0, 1)), seq(m(0, 2), m(2, 1))}},
        {4, {seq(m(0, 1), m(3, 0)), seq(m(1, 2), m(0, 1)), seq(m(2, 3), m(1, 2)), seq(m(3, 0), m(2, 3))}},
    };
    Process ring = parse_process(testing::read_sample("ring_deadlock.proc"));
    for (std::int64_t n : {2, 3, 4}) {
        std::vector<ProtocolType> locals;
        for (std::int64_t r = 0; r < n; ++r) locals.push_back(extract_local_type(initial_context(n), ring, r, n));
        corpus.emplace_back(n, locals);
    }
    for (const auto& [n, locals] : corpus) {
        std::vector<std::pair<std::int64_t, ProtocolType>> ranked;
        std::vector<std::vector<RankAction>> actions;
        for (std::int64_t r = 0; r < n; ++r) {
            ranked.emplace_back(r, locals[static_cast<std::size_t>(r)]);
            actions.push_back(linearize(initial_context(n), locals[static_cast<std::size_t>(r)], r));
        }
        EXPECT_THROW(merge_all(n, ranked), MergeFailure);
        EXPECT_TRUE(std::holds_alternative<Deadlocked>(simulate(actions, n)));
    }
}

}  // namespace
}  // namespace protomerge
