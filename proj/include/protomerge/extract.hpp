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

// Local type extraction: specialize a program to one rank, collect its
// datatype equations and candidate type, and solve the equations.

#ifndef PROTOMERGE_EXTRACT_HPP_
#define PROTOMERGE_EXTRACT_HPP_

#include <cstdint>
#include <utility>

#include "protomerge/ast.hpp"
#include "protomerge/logic.hpp"

namespace protomerge {

/// Replaces `rank` everywhere and `size` in control positions (conditional
/// tests, loop bounds, send/recv endpoints), folding closed terms. Payload
/// datatypes keep `size` symbolic. Closed conditionals are resolved and loops
/// with closed empty ranges become skip. Throws EvalError on division by zero.
Process specialize(const Process& process, std::int64_t rank, std::int64_t size);

struct Collected {
    EquationSystem equations;
    ProtocolType type;
};

/// Syntax-directed translation of a rank-free program into a local type.
/// Throws ExtractError when a conditional survived specialization.
Collected collect(const TypingContext& ctx, const Process& process, std::int64_t self_rank);

/// Unification over datatypes with occurs check. Hole-free pairs are compared
/// with dtype_equiv. Throws SolveError, or UndecidableError.
Substitution solve(const TypingContext& ctx, const EquationSystem& equations, const LogicOptions& options = {});

/// specialize, collect, solve and apply; the result is hole-free and seq-normalized.
ProtocolType extract_local_type(const TypingContext& ctx, const Process& process, std::int64_t self_rank,
                                std::int64_t size, const LogicOptions& options = {});

}  // namespace protomerge

#endif  // PROTOMERGE_EXTRACT_HPP_
