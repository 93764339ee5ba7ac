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

#ifndef PROTOMERGE_LOGIC_HPP_
#define PROTOMERGE_LOGIC_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "protomerge/ast.hpp"

namespace protomerge {

struct FiniteSet {
    std::vector<std::int64_t> values;  // sorted, unique, non-empty
    bool operator==(const FiniteSet&) const = default;
};

struct Interval {
    std::int64_t lo;
    std::int64_t hi;
    bool operator==(const Interval&) const = default;
};

struct Unbounded {
    bool operator==(const Unbounded&) const = default;
};

using Domain = std::variant<FiniteSet, Interval, Unbounded>;

struct LogicOptions {
    /// Largest number of assignments the enumeration fallback may visit.
    std::size_t enum_cap = 100000;
};

enum class Verdict { Valid, Invalid, Undecidable };

const char* to_string(Verdict verdict);

/// Values a context variable may take. Throws LogicError when the name is unbound,
/// not integer-based, or its refinement is unsatisfiable.
Domain domain_of(const TypingContext& ctx, const std::string& name);

/// Decides ctx |= prop: prop holds under every assignment satisfying the refinements
/// of ctx. Variables free in prop but absent from ctx range over all integers.
///
/// An interval/polynomial abstraction answers first; when inconclusive, every
/// assignment over the relevant variables' domains is enumerated, provided the
/// product of domain sizes stays within options.enum_cap. Otherwise Undecidable.
Verdict entails(const TypingContext& ctx, const Proposition& prop, const LogicOptions& options = {});

/// Equivalence of hole-free datatypes under ctx. Returns Undecidable rather than guessing.
Verdict dtype_compare(const TypingContext& ctx, const Datatype& lhs, const Datatype& rhs,
                      const LogicOptions& options = {});

/// Throws UndecidableError when the comparison is undecidable.
bool dtype_equiv(const TypingContext& ctx, const Datatype& lhs, const Datatype& rhs,
                 const LogicOptions& options = {});

/// `size: {x: integer | x = n}`.
TypingContext initial_context(std::int64_t size);

/// initial_context(size) plus `rank: {x: integer | x = r0 or ... or x = rm}`.
TypingContext merged_context(std::int64_t size, const std::set<std::int64_t>& merged_ranks);

/// Constant value of term under the singleton-valued variables of ctx, if any.
std::optional<std::int64_t> constant_value(const TypingContext& ctx, const IndexTerm& term);

}  // namespace protomerge

#endif  // PROTOMERGE_LOGIC_HPP_
