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

// Text formats for protocols (.ptype) and per-rank programs (.proc).
//
// Protocol grammar (`;` is right-associative and binds loosest):
//
//   T ::= skip | message I I D | allreduce OP D | allreduce OP x: D { T }
//       | foreach x: I..I { T } | T ; T | { T }
//   D ::= integer | float | D[I] | {x: integer | P} | {x: float | P} | ?name
//   I ::= int | x | I + I | I - I | I * I | I / I | (I) | P ? I : I
//   P ::= true | I = I | I != I | I < I | I <= I | I > I | I >= I
//       | P and P | P or P | not P | (P)
//
// Process grammar:
//
//   S ::= skip | send to I D | recv from I D | allreduce OP D
//       | for x: I..I { S } | if P { S } else { S } | constrain D = D
//       | S ; S | { S }
//
// `#` starts a line comment. `==` is accepted for `=`, and comparison
// chains such as `1 <= v <= 9` read as conjunctions.

#ifndef PROTOMERGE_SYNTAX_HPP_
#define PROTOMERGE_SYNTAX_HPP_

#include <string>
#include <string_view>

#include "protomerge/ast.hpp"
#include "protomerge/error.hpp"

namespace protomerge {

ProtocolType parse_protocol(std::string_view text, const std::string& file = "<input>");
Process parse_process(std::string_view text, const std::string& file = "<input>");
IndexTerm parse_index(std::string_view text, const std::string& file = "<input>");
Proposition parse_prop(std::string_view text, const std::string& file = "<input>");
Datatype parse_datatype(std::string_view text, const std::string& file = "<input>");

/// Multi-line, two-space indented rendering; reparses to an equal value.
std::string print_protocol(const ProtocolType& type);
std::string print_process(const Process& process);

std::string print_index(const IndexTerm& term);
std::string print_prop(const Proposition& prop);
std::string print_datatype(const Datatype& type);
std::string print_context(const TypingContext& ctx);
/// Single-line rendering of a protocol, used in traces and diagnostics.
std::string print_protocol_inline(const ProtocolType& type);

const char* to_string(ReduceOp op);
const char* to_string(CmpOp op);

}  // namespace protomerge

#endif  // PROTOMERGE_SYNTAX_HPP_
