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

// One positive and one negative instance per merge rule.

#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {
namespace {

class RuleFidelity : public ::testing::TestWithParam<testing::RuleCase> {};

TEST_P(RuleFidelity, PositiveInstanceDerivesConclusion) {
    const auto& c = GetParam();
    auto out = apply_rule(c.rule, c.ctx, c.left, c.right, c.k);
    ASSERT_TRUE(out.has_value()) << print_protocol_inline(c.left) << " || " << print_protocol_inline(c.right);
    EXPECT_EQ(*out, c.expected) << print_protocol_inline(*out);
}

TEST_P(RuleFidelity, NegatedPremiseBlocksRule) {
    const auto& c = GetParam();
    auto out = apply_rule(c.rule, c.negative_ctx, c.negative_left, c.negative_right, c.negative_k);
    EXPECT_FALSE(out.has_value()) << "negated: " << c.negated << "; got " << print_protocol_inline(*out);
}

std::string case_name(const ::testing::TestParamInfo<testing::RuleCase>& info) {
    std::string name = rule_name(info.param.rule);
    for (char& ch : name) {
        if (ch == '-') ch = '_';
    }
    return name;
}

INSTANTIATE_TEST_SUITE_P(AllRules, RuleFidelity, ::testing::ValuesIn(testing::rule_cases()), case_name);

TEST(RuleCatalogue, EveryRuleHasACase) {
    std::set<Rule> covered;
    for (const auto& c : testing::rule_cases()) covered.insert(c.rule);
    EXPECT_EQ(covered.size(), all_rules().size());
}

}  // namespace
}  // namespace protomerge
