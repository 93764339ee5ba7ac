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

#include "protomerge/oracle.hpp"

#include <deque>

#include "protomerge/error.hpp"
#include "protomerge/overloaded.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {

std::string print_action(const RankAction& action) {
    return std::visit(overloaded{
                          [](const SendTo& s) { return "send to " + std::to_string(s.peer) + " " + print_datatype(s.payload); },
                          [](const RecvFrom& r) {
                              return "recv from " + std::to_string(r.peer) + " " + print_datatype(r.payload);
                          },
                          [](const Collective& c) {
                              return std::string("allreduce ") + to_string(c.op) + " " + print_datatype(c.payload);
                          },
                      },
                      action);
}

std::string print_event(const Event& event) {
    return std::visit(overloaded{
                          [](const MessageEvent& m) {
                              return std::to_string(m.from) + " -> " + std::to_string(m.to) + " : " +
                                     print_datatype(m.payload);
                          },
                          [](const CollectiveEvent& c) {
                              return std::string("allreduce ") + to_string(c.op) + " " + print_datatype(c.payload);
                          },
                      },
                      event);
}

namespace {

std::int64_t closed_value(const TypingContext& ctx, const IndexTerm& term) {
    auto v = constant_value(ctx, term);
    if (!v) throw UnfoldError(UnfoldError::Kind::OpenIndexTerm, "index term is not constant: " + print_index(term));
    return *v;
}

void linearize_into(const TypingContext& ctx, const ProtocolType& type, std::int64_t self,
                    std::optional<std::size_t> unroll, std::vector<RankAction>& out) {
    std::visit(overloaded{
                   [](const Skip&) {},
                   [&](const Message& m) {
                       std::int64_t from = closed_value(ctx, m.from);
                       std::int64_t to = closed_value(ctx, m.to);
                       if (from == self) {
                           out.push_back(SendTo{to, m.payload});
                       } else if (to == self) {
                           out.push_back(RecvFrom{from, m.payload});
                       }
                   },
                   [&](const Allreduce& a) {
                       out.push_back(Collective{a.op, a.payload});
                       linearize_into(ctx, *a.cont, self, unroll, out);
                   },
                   [&](const Foreach& f) {
                       auto lo = constant_value(ctx, f.lo);
                       auto hi = constant_value(ctx, f.hi);
                       if (!lo || !hi) {
                           throw UnfoldError(UnfoldError::Kind::NonConstantBounds,
                                             "foreach bounds are not constant: " + print_index(f.lo) + ".." +
                                                 print_index(f.hi));
                       }
                       std::int64_t last = *hi;
                       if (unroll && *hi >= *lo && static_cast<std::uint64_t>(*hi - *lo) >= *unroll) {
                           last = *lo + static_cast<std::int64_t>(*unroll) - 1;
                       }
                       for (std::int64_t i = *lo; i <= last; ++i) {
                           linearize_into(ctx, substitute(*f.body, f.binder, lit(i)), self, unroll, out);
                       }
                   },
                   [&](const Seq& s) {
                       linearize_into(ctx, *s.first, self, unroll, out);
                       linearize_into(ctx, *s.second, self, unroll, out);
                   },
               },
               type.node);
}

class PayloadCheck {
  public:
    PayloadCheck(std::int64_t n, const LogicOptions& options) : ctx_(initial_context(n)), options_(options) {}

    bool equivalent(const Datatype& a, const Datatype& b) {
        if (a == b) return true;
        std::string key = print_datatype(a) + "\n" + print_datatype(b);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        bool result = dtype_equiv(ctx_, a, b, options_);
        cache_.emplace(key, result);
        return result;
    }

  private:
    TypingContext ctx_;
    LogicOptions options_;
    std::map<std::string, bool> cache_;
};

using State = std::vector<std::size_t>;

struct Visit {
    State parent;
    std::optional<Event> event;
};

}  // namespace

std::vector<RankAction> linearize(const TypingContext& ctx, const ProtocolType& type, std::int64_t self_rank,
                                  std::optional<std::size_t> unroll) {
    std::vector<RankAction> out;
    linearize_into(ctx, type, self_rank, unroll, out);
    return out;
}

SimOutcome simulate(const std::vector<std::vector<RankAction>>& actions, std::int64_t n, const SimOptions& options) {
    if (static_cast<std::int64_t>(actions.size()) != n) {
        return Mismatch{"expected actions for " + std::to_string(n) + " ranks, got " + std::to_string(actions.size())};
    }
    for (std::int64_t r = 0; r < n; ++r) {
        for (const auto& action : actions[r]) {
            std::int64_t peer = -1;
            if (const auto* s = std::get_if<SendTo>(&action)) peer = s->peer;
            if (const auto* v = std::get_if<RecvFrom>(&action)) peer = v->peer;
            if (!std::holds_alternative<Collective>(action) && (peer < 0 || peer >= n)) {
                return Mismatch{"rank " + std::to_string(r) + ": peer out of range in " + print_action(action)};
            }
        }
    }

    PayloadCheck payloads(n, options.logic);
    const State start(static_cast<std::size_t>(n), 0);
    State final_state(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) final_state[r] = actions[r].size();

    std::map<State, Visit> visited;
    visited.emplace(start, Visit{});
    std::deque<State> queue{start};
    std::optional<State> first_stuck;
    bool reached_final = false;

    while (!queue.empty()) {
        State state = queue.front();
        queue.pop_front();
        if (state == final_state) {
            reached_final = true;
            break;
        }
        std::vector<std::pair<State, Event>> next;
        auto head = [&](std::int64_t r) -> const RankAction* {
            return state[r] < actions[r].size() ? &actions[r][state[r]] : nullptr;
        };
        for (std::int64_t a = 0; a < n; ++a) {
            const auto* send_action = head(a) != nullptr ? std::get_if<SendTo>(head(a)) : nullptr;
            if (send_action == nullptr) continue;
            std::int64_t b = send_action->peer;
            const auto* recv_action = head(b) != nullptr ? std::get_if<RecvFrom>(head(b)) : nullptr;
            if (recv_action == nullptr || recv_action->peer != a) continue;
            if (!payloads.equivalent(send_action->payload, recv_action->payload)) {
                return Mismatch{"payload disagreement on " + std::to_string(a) + " -> " + std::to_string(b) + ": " +
                                print_datatype(send_action->payload) + " vs " + print_datatype(recv_action->payload)};
            }
            State s = state;
            ++s[a];
            ++s[b];
            next.emplace_back(std::move(s), MessageEvent{a, b, send_action->payload});
        }
        bool all_collective = true;
        for (std::int64_t r = 0; r < n && all_collective; ++r) {
            all_collective = head(r) != nullptr && std::holds_alternative<Collective>(*head(r));
        }
        if (all_collective) {
            const auto& c0 = std::get<Collective>(*head(0));
            for (std::int64_t r = 1; r < n; ++r) {
                const auto& c = std::get<Collective>(*head(r));
                if (c.op != c0.op || !payloads.equivalent(c.payload, c0.payload)) {
                    return Mismatch{"collective disagreement between rank 0 (" + print_action(c0) + ") and rank " +
                                    std::to_string(r) + " (" + print_action(c) + ")"};
                }
            }
            State s = state;
            for (auto& p : s) ++p;
            next.emplace_back(std::move(s), CollectiveEvent{c0.op, c0.payload});
        }
        if (next.empty() && !first_stuck) first_stuck = state;
        for (auto& [s, event] : next) {
            if (visited.count(s) != 0) continue;
            if (visited.size() >= options.state_cap) {
                throw StateSpaceExceeded("more than " + std::to_string(options.state_cap) + " states");
            }
            visited.emplace(s, Visit{state, event});
            queue.push_back(s);
        }
    }

    if (reached_final) {
        std::vector<Event> trace;
        for (State s = final_state; s != start;) {
            const Visit& v = visited.at(s);
            trace.push_back(*v.event);
            s = v.parent;
        }
        return Completed{{trace.rbegin(), trace.rend()}};
    }
    Deadlocked out;
    for (std::int64_t r = 0; r < n; ++r) {
        if ((*first_stuck)[r] < actions[r].size()) out.stuck.emplace(r, actions[r][(*first_stuck)[r]]);
    }
    return out;
}

std::string print_outcome(const SimOutcome& outcome) {
    return std::visit(overloaded{
                          [](const Completed& c) {
                              std::string out = "completed\n";
                              for (const auto& e : c.trace) out += print_event(e) + "\n";
                              return out;
                          },
                          [](const Deadlocked& d) {
                              std::string out = "deadlocked\n";
                              for (const auto& [rank, action] : d.stuck) {
                                  out += "rank " + std::to_string(rank) + " waits: " + print_action(action) + "\n";
                              }
                              return out;
                          },
                          [](const Mismatch& m) { return "mismatch\n" + m.detail + "\n"; },
                      },
                      outcome);
}

}  // namespace protomerge
