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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>

#include "corpus.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "protomerge/cli.hpp"
#include "protomerge/error.hpp"
#include "protomerge/extract.hpp"
#include "protomerge/logic.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/oracle.hpp"
#include "protomerge/syntax.hpp"

namespace pm = protomerge;
namespace pt = protomerge::testing;
using nlohmann::json;

namespace {

// Pinned corpus sizes and tolerances.
constexpr std::uint64_t kSeed = 20261019;
constexpr int kSoundnessInstances = 500;
constexpr int kEntailmentCases = 1000;
constexpr int kRoundTripCases = 1000;
constexpr int kAllowedCounterexamples = 0;
constexpr int kAllowedDisagreements = 0;

struct Outcome {
    bool pass;
    std::string detail;
};

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "protomerge");
    std::ostringstream out, err;
    int code = pm::run_cli(args, out, err);
    return {code, out.str() + err.str()};
}

std::string sample(const std::string& name) { return pt::samples_dir() + "/" + name; }

bool subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay) {
    auto it = hay.begin();
    for (const auto& n : needle) {
        it = std::find(it, hay.end(), n);
        if (it == hay.end()) return false;
        ++it;
    }
    return true;
}

std::vector<std::string> trace_rules(const json& trace) {
    std::vector<std::string> out;
    for (const auto& step : trace) out.push_back(step["rule"].get<std::string>());
    return out;
}

Outcome nbody_inference() {
    CliRun r = cli({"infer", sample("nbody.proc"), "--size", "3"});
    if (r.code != 0) return {false, "exit " + std::to_string(r.code) + ": " + r.out};
    pm::ProtocolType got = pm::normalize_seq(pm::parse_protocol(r.out));
    if (!(got == pt::nbody_protocol())) return {false, "protocol differs:\n" + r.out};
    return {true, "n-body protocol for three processes"};
}

Outcome nbody_merge_steps() {
    pm::ProtocolType three = pm::parse_protocol(pt::read_sample("merge_step2_left.ptype"));
    struct Step {
        std::string left, right, merged, k;
        std::vector<std::string> rules;
    };
    std::vector<Step> steps{
        {"merge_step1_left.ptype", "merge_step1_right.ptype", "0", "1", {"seq-seq", "msg-msg-eq", "msg-msg-right"}},
        {"merge_step2_left.ptype", "merge_step2_right.ptype", "0,1", "2",
         {"msgT-msgT-left", "seq-seq", "msg-msg-eq", "msg-msg-eq"}},
    };
    for (const auto& s : steps) {
        CliRun r = cli({"merge", sample(s.left), sample(s.right), "--size", "3", "--merged", s.merged, "--k", s.k,
                        "--json"});
        if (r.code != 0) return {false, s.left + ": exit " + std::to_string(r.code)};
        json doc = json::parse(r.out);
        if (!(pm::parse_protocol(doc["protocol"].get<std::string>()) == three)) {
            return {false, s.left + ": result differs"};
        }
        if (!subsequence(s.rules, trace_rules(doc["trace"]))) return {false, s.left + ": trace lacks expected rules"};
    }
    return {true, "both merge steps with their expected rules"};
}

Outcome nbody_extraction() {
    pm::Process p = pm::parse_process(pt::read_sample("nbody.proc"));
    for (std::int64_t r = 0; r < 3; ++r) {
        if (!(pm::extract_local_type(pm::initial_context(3), p, r, 3) == pt::nbody_local_type(r))) {
            return {false, "rank " + std::to_string(r) + " differs"};
        }
    }
    if (!pm::dtype_equiv(pm::initial_context(3), pt::nbody_payload_symbolic(), pt::nbody_payload_sized())) {
        return {false, "payload not equivalent to its sized form"};
    }
    return {true, "three local types, payload equivalent under size = 3"};
}

Outcome one_to_all() {
    pm::Process p = pm::parse_process(pt::read_sample("one_to_all.proc"));
    std::vector<std::pair<std::int64_t, pm::ProtocolType>> locals;
    for (std::int64_t r = 0; r < 3; ++r) {
        pm::ProtocolType t = pm::extract_local_type(pm::initial_context(3), p, r, 3);
        if (!(t == pt::one_to_all_local_type(r))) return {false, "rank " + std::to_string(r) + " differs"};
        locals.emplace_back(r, t);
    }
    pm::ProtocolType merged = pm::merge_all(3, locals).type;
    std::vector<std::vector<pm::RankAction>> actions;
    for (std::int64_t r = 0; r < 3; ++r) actions.push_back(pm::linearize(pm::initial_context(3), merged, r));
    pm::SimOutcome o = pm::simulate(actions, 3);
    if (!std::holds_alternative<pm::Completed>(o)) return {false, pm::print_outcome(o)};
    return {true, "extracted, merged with unfolding, simulated to completion"};
}

Outcome ring_deadlock() {
    pm::Process ring = pm::parse_process(pt::read_sample("ring_deadlock.proc"));
    for (std::int64_t n : {2, 3}) {
        CliRun r = cli({"infer", sample("ring_deadlock.proc"), "--size", std::to_string(n), "--json"});
        json doc = json::parse(r.out);
        if (r.code != 1 || doc["diagnostic"]["kind"] != "DeadlockSuspected") {
            return {false, "size " + std::to_string(n) + ": merge verdict " + r.out};
        }
        std::vector<std::vector<pm::RankAction>> actions;
        for (std::int64_t k = 0; k < n; ++k) {
            actions.push_back(pm::linearize(pm::initial_context(n), pm::extract_local_type(pm::initial_context(n), ring, k, n), k));
        }
        if (!std::holds_alternative<pm::Deadlocked>(pm::simulate(actions, n))) {
            return {false, "size " + std::to_string(n) + ": oracle does not deadlock"};
        }
    }
    return {true, "sizes 2 and 3 rejected and deadlocked"};
}

Outcome rule_fidelity() {
    int passed = 0, total = 0;
    std::string first;
    for (const auto& c : pt::rule_cases()) {
        auto pos = pm::apply_rule(c.rule, c.ctx, c.left, c.right, c.k);
        ++total;
        if (pos && *pos == c.expected) {
            ++passed;
        } else if (first.empty()) {
            first = std::string(pm::rule_name(c.rule)) + " positive";
        }
        auto neg = pm::apply_rule(c.rule, c.negative_ctx, c.negative_left, c.negative_right, c.negative_k);
        ++total;
        if (!neg) {
            ++passed;
        } else if (first.empty()) {
            first = std::string(pm::rule_name(c.rule)) + " negative";
        }
    }
    std::string detail = std::to_string(passed) + "/" + std::to_string(total) + " checks";
    if (total != 36) return {false, detail + " (expected 36)"};
    return {passed == total, first.empty() ? detail : detail + ", first failure: " + first};
}

pt::SoundnessReport& soundness() {
    static pt::SoundnessReport report = pt::soundness_corpus(kSeed, kSoundnessInstances);
    return report;
}

Outcome merge_soundness() {
    const auto& r = soundness();
    int counterexamples = r.failures - r.conservation_failures;
    std::string detail = std::to_string(r.cases) + " instances, " + std::to_string(r.merged) + " merged, " +
                         std::to_string(r.rejected) + " rejected, " + std::to_string(counterexamples) +
                         " counterexamples";
    return {r.cases == kSoundnessInstances && counterexamples <= kAllowedCounterexamples, detail};
}

Outcome entailment_agreement() {
    auto r = pt::entailment_corpus(kSeed, kEntailmentCases);
    std::string detail = std::to_string(r.decided) + " decided, " + std::to_string(r.undecidable) +
                         " undecidable, " + std::to_string(r.failures) + " disagreements";
    if (!r.problems.empty()) detail += "; " + r.problems.front();
    return {r.cases == kEntailmentCases && r.failures <= kAllowedDisagreements, detail};
}

Outcome parser_roundtrip() {
    auto r = pt::roundtrip_corpus(kSeed, kRoundTripCases);
    std::string detail = std::to_string(r.cases) + " trees, " + std::to_string(r.failures) + " mismatches";
    if (!r.problems.empty()) detail += "; " + r.problems.front();
    return {r.failures == 0, detail};
}

Outcome conservation() {
    const auto& r = soundness();
    std::string detail = std::to_string(r.merged) + " successful merges, " + std::to_string(r.conservation_failures) +
                         " violations";
    return {r.merged > 0 && r.conservation_failures == 0, detail};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"golden n-body inference", nbody_inference},
        {"golden merge steps", nbody_merge_steps},
        {"golden per-rank extraction", nbody_extraction},
        {"one-to-all with loop unfolding", one_to_all},
        {"ring deadlock rejection", ring_deadlock},
        {"rule fidelity", rule_fidelity},
        {"merge soundness against the oracle", merge_soundness},
        {"entailment against enumeration", entailment_agreement},
        {"parser round trip", parser_roundtrip},
        {"message conservation and order", conservation},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << " - " << criteria[i].first
                  << " (" << o.detail << ")\n";
    }
    return failed == 0 ? 0 : 1;
}
