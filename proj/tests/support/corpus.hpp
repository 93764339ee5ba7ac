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

// Seeded property corpora shared by the unit suites and the acceptance gate.

#ifndef PROTOMERGE_TESTS_CORPUS_HPP_
#define PROTOMERGE_TESTS_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace protomerge::testing {

struct CorpusReport {
    int cases = 0;
    int failures = 0;  // property violations
    std::vector<std::string> problems;  // first few violations, for messages
};

/// parse(print(t)) == t for `count` protocols and `count` processes of depth at most 6.
CorpusReport roundtrip_corpus(std::uint64_t seed, int count);

struct EntailmentReport : CorpusReport {
    int decided = 0;
    int undecidable = 0;
    int valid = 0;
};

/// entails against enumeration over boxed contexts of total size at most 10000.
EntailmentReport entailment_corpus(std::uint64_t seed, int count);

struct SoundnessReport : CorpusReport {
    int merged = 0;            // merge_all successes
    int rejected = 0;          // MergeFailure
    int perturbed = 0;         // instances with a perturbation
    int conservation_failures = 0;
};

/// Random projected message protocols: merge success must simulate to Completed
/// and keep every message and each rank's order.
SoundnessReport soundness_corpus(std::uint64_t seed, int count);

}  // namespace protomerge::testing

#endif  // PROTOMERGE_TESTS_CORPUS_HPP_
