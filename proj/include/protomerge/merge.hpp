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

// Merging local types into a global protocol.
//
// ctx |- T || U @ k ~> V combines T, the protocol already agreed by the ranks
// in ctx's `rank` domain, with U, the local type of rank k. Rule premises are
// decided by entails; `i = rank` reads as membership in the merged rank set
// and `i != rank` as non-membership.

#ifndef PROTOMERGE_MERGE_HPP_
#define PROTOMERGE_MERGE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "protomerge/ast.hpp"
#include "protomerge/error.hpp"
#include "protomerge/logic.hpp"

namespace protomerge {

enum class Rule {
    SkipSkip,
    SkipMsgS,
    MsgSSkip,
    MsgSMsgS,
    MsgSkip,
    MsgMsgS,
    SkipMsg,
    MsgSMsg,
    MsgMsgEq,
    MsgMsgRight,
    MsgMsgLeft,
    AllredAllred,
    ForeachForeach,
    SeqSeq,
    MsgTMsgTLeft,
    MsgTMsgTRight,
    SkipMsgT,
    MsgTSkipT,
};

/// Every rule, in catalogue order.
const std::vector<Rule>& all_rules();
const char* rule_name(Rule rule);
std::optional<Rule> rule_from_name(const std::string& name);

struct PremiseResult {
    Proposition prop;  // as displayed, with `rank` standing for the merged set
    Verdict verdict;
};

struct TraceStep {
    std::string rule;
    std::string left;
    std::string right;
    std::vector<PremiseResult> premises;
    std::vector<std::string> datatype_checks;
};

/// The rule steps of one derivation, outermost first.
struct MergeTrace {
    std::vector<TraceStep> steps;

    std::vector<std::string> rule_names() const;
    /// One line per step: `rule: left || right` then indented premises.
    std::string to_text() const;
};

/// A merge that no rule sequence derives. Carries the trace of the deepest failing pair.
class MergeFailure : public DiagnosticError {
  public:
    MergeFailure(Diagnostic diagnostic, MergeTrace trace)
        : DiagnosticError(std::move(diagnostic)), trace_(std::move(trace)) {}
    const MergeTrace& trace() const { return trace_; }

  private:
    MergeTrace trace_;
};

struct MergeOptions {
    LogicOptions logic;
    /// Largest iteration count the unfold retry of merge_all will expand.
    std::size_t unroll = 2;
};

/// Right-associates sequences and drops skip units.
ProtocolType normalize_seq(const ProtocolType& type);

struct MergeResult {
    ProtocolType type;
    MergeTrace trace;
};

/// Depth-first search over the rule catalogue; the first derivation wins.
/// ctx must bind `size` and `rank`, and k must lie outside rank's domain.
/// Throws MergeFailure.
MergeResult merge_types(const TypingContext& ctx, const ProtocolType& left, const ProtocolType& right,
                        std::int64_t k, const MergeOptions& options = {});

/// Applies exactly one rule at the root; sub-merges use the full search.
/// nullopt when the rule does not apply.
std::optional<ProtocolType> apply_rule(Rule rule, const TypingContext& ctx, const ProtocolType& left,
                                       const ProtocolType& right, std::int64_t k,
                                       const MergeOptions& options = {});

/// Expands a foreach with bounds constant under ctx. Throws UnfoldError.
ProtocolType unfold_foreach(const TypingContext& ctx, const ProtocolType& type);

struct MergeAllResult {
    ProtocolType type;
    std::vector<MergeTrace> traces;
};

/// Folds merge_types over `order` (empty means 0..n-1). A failed step is retried
/// once when exactly one side starts with a constant-bound foreach of at most
/// options.unroll iterations, with that loop unfolded. `size` is instantiated
/// to n in the result. Throws MergeFailure, or std::invalid_argument for a
/// rank list or order that does not cover 0..n-1.
MergeAllResult merge_all(std::int64_t n, const std::vector<std::pair<std::int64_t, ProtocolType>>& local_types,
                         const std::vector<std::int64_t>& order = {}, const MergeOptions& options = {});

}  // namespace protomerge

#endif  // PROTOMERGE_MERGE_HPP_
