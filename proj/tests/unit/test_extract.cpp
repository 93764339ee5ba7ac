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

#include "generators.hpp"
#include "protomerge/error.hpp"
#include "protomerge/extract.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {
namespace {

using testing::read_sample;

TEST(Specialize, OneToAllRankZero) {
    Process p = parse_process(read_sample("one_to_all.proc"));
    EXPECT_EQ(specialize(p, 0, 3), for_("i", lit(1), lit(2), send(var("i"), array_of(float_type(), var("n") * lit(4)))));
    EXPECT_EQ(specialize(p, 1, 3), recv(lit(0), array_of(float_type(), var("n") * lit(4))));
}

TEST(Specialize, KeepsSizeInPayloads) {
    Process p = parse_process("send to size - 1 float[size]");
    EXPECT_EQ(specialize(p, 0, 4), send(lit(3), array_of(float_type(), var("size"))));
}

TEST(Specialize, EmptyLoopBecomesSkip) {
    EXPECT_EQ(specialize(parse_process("for i: 1..size - 1 { send to i integer }"), 0, 1), pskip());
}

TEST(Specialize, RespectsShadowing) {
    Process p = parse_process("for rank: 0..1 { send to rank integer }");
    EXPECT_EQ(specialize(p, 5, 6), p);
}

TEST(Specialize, Idempotent) {
    Process p = parse_process(read_sample("nbody.proc"));
    for (std::int64_t r = 0; r < 3; ++r) {
        Process once = specialize(p, r, 3);
        EXPECT_EQ(specialize(once, r, 3), once);
    }
}

TEST(Collect, ConstraintSites) {
    Process p = parse_process("recv from 0 ?h; send to 1 float[8]; constrain ?h = float[8]");
    Collected c = collect({}, p, 2);
    ASSERT_EQ(c.equations.size(), 1U);
    EXPECT_EQ(c.equations[0], (Equation{hole("h"), array_of(float_type(), lit(8))}));
    EXPECT_EQ(normalize_seq(c.type),
              seq(message(lit(0), lit(2), hole("h")), message(lit(2), lit(1), array_of(float_type(), lit(8)))));
}

TEST(Collect, ResidualConditional) {
    Process p = parse_process("if n = 0 { skip } else { skip }");
    EXPECT_THROW(collect({}, specialize(p, 0, 2), 0), ExtractError);
}

TEST(Solve, Examples) {
    Substitution s1 = solve({}, {{hole("h"), array_of(float_type(), lit(8))}});
    EXPECT_EQ(s1, (Substitution{{"h", array_of(float_type(), lit(8))}}));
    Substitution s2 = solve({}, {{hole("a"), hole("b")}, {hole("b"), integer_type()}});
    EXPECT_EQ(s2, (Substitution{{"a", integer_type()}, {"b", integer_type()}}));
}

TEST(Solve, Failures) {
    auto kind_of = [](const EquationSystem& eqs) {
        try {
            solve({}, eqs);
        } catch (const SolveError& e) {
            return e.diagnostic().kind;
        }
        ADD_FAILURE() << "solve succeeded";
        return DiagnosticKind::DeadlockSuspected;
    };
    EXPECT_EQ(kind_of({{integer_type(), float_type()}}), DiagnosticKind::UnsolvableEquations);
    EXPECT_EQ(kind_of({{hole("a"), array_of(hole("a"), lit(2))}}), DiagnosticKind::UnsolvableEquations);
    EXPECT_EQ(kind_of({{array_of(hole("a"), lit(2)), array_of(float_type(), lit(3))}}),
              DiagnosticKind::UnsolvableEquations);
    EXPECT_EQ(kind_of({{array_of(hole("a"), lit(2)), integer_type()}}), DiagnosticKind::UnsolvableEquations);
}

TEST(Solve, ArraysUnifyElementwise) {
    Substitution s = solve(initial_context(3), {{array_of(hole("a"), var("size")), array_of(float_type(), lit(3))}});
    EXPECT_EQ(s.at("a"), float_type());
}

TEST(ExtractLocalType, NbodyRanks) {
    Process p = parse_process(read_sample("nbody.proc"));
    for (std::int64_t r = 0; r < 3; ++r) {
        EXPECT_EQ(extract_local_type(initial_context(3), p, r, 3), testing::nbody_local_type(r)) << "rank " << r;
    }
}

TEST(ExtractLocalType, PayloadMatchesSizedForm) {
    EXPECT_TRUE(dtype_equiv(initial_context(3), testing::nbody_payload_symbolic(), testing::nbody_payload_sized()));
}

TEST(ExtractLocalType, OneToAll) {
    Process p = parse_process(read_sample("one_to_all.proc"));
    for (std::int64_t r = 0; r < 3; ++r) {
        EXPECT_EQ(extract_local_type(initial_context(3), p, r, 3), testing::one_to_all_local_type(r)) << "rank " << r;
    }
}

TEST(ExtractLocalType, SkipAndHoles) {
    EXPECT_EQ(extract_local_type(initial_context(2), pskip(), 1, 2), skip());
    Process solved = parse_process("recv from 0 ?h; send to 1 float[8]; constrain ?h = float[8]");
    EXPECT_EQ(extract_local_type(initial_context(3), solved, 2, 3),
              seq(message(lit(0), lit(2), array_of(float_type(), lit(8))),
                  message(lit(2), lit(1), array_of(float_type(), lit(8)))));
    EXPECT_THROW(extract_local_type(initial_context(2), parse_process("recv from 0 ?h"), 1, 2), SolveError);
}

}  // namespace
}  // namespace protomerge
