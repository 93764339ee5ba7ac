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

// Synchronous execution of local types. Sends and receives rendezvous in
// pairs, and a collective fires once it heads every rank. Every schedule is
// explored, so the verdict does not depend on scheduling order.

#ifndef PROTOMERGE_ORACLE_HPP_
#define PROTOMERGE_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "protomerge/ast.hpp"
#include "protomerge/logic.hpp"

namespace protomerge {

struct SendTo {
    std::int64_t peer;
    Datatype payload;
    bool operator==(const SendTo&) const = default;
};

struct RecvFrom {
    std::int64_t peer;
    Datatype payload;
    bool operator==(const RecvFrom&) const = default;
};

struct Collective {
    ReduceOp op;
    Datatype payload;
    bool operator==(const Collective&) const = default;
};

using RankAction = std::variant<SendTo, RecvFrom, Collective>;

std::string print_action(const RankAction& action);

/// The actions of self_rank in a local type. Loop bounds and endpoints must be
/// constant under ctx. With `unroll`, loops run at most that many iterations.
/// Throws UnfoldError.
std::vector<RankAction> linearize(const TypingContext& ctx, const ProtocolType& type, std::int64_t self_rank,
                                  std::optional<std::size_t> unroll = std::nullopt);

struct MessageEvent {
    std::int64_t from;
    std::int64_t to;
    Datatype payload;
    bool operator==(const MessageEvent&) const = default;
};

struct CollectiveEvent {
    ReduceOp op;
    Datatype payload;
    bool operator==(const CollectiveEvent&) const = default;
};

using Event = std::variant<MessageEvent, CollectiveEvent>;

/// `a -> b : D` or `allreduce op D`.
std::string print_event(const Event& event);

struct Completed {
    std::vector<Event> trace;
};

struct Deadlocked {
    std::map<std::int64_t, RankAction> stuck;  // pending head of every unfinished rank
};

struct Mismatch {
    std::string detail;
};

using SimOutcome = std::variant<Completed, Deadlocked, Mismatch>;

struct SimOptions {
    std::size_t state_cap = 1000000;
    LogicOptions logic;
};

/// Payloads are compared with dtype_equiv under initial_context(n).
/// Throws StateSpaceExceeded, or UndecidableError from a payload comparison.
SimOutcome simulate(const std::vector<std::vector<RankAction>>& actions, std::int64_t n,
                    const SimOptions& options = {});

/// Verdict line followed by the trace, the stuck actions, or the mismatch.
std::string print_outcome(const SimOutcome& outcome);

}  // namespace protomerge

#endif  // PROTOMERGE_ORACLE_HPP_
