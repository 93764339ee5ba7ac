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

#ifndef PROTOMERGE_CLI_HPP_
#define PROTOMERGE_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "protomerge/ast.hpp"

namespace protomerge {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUntypable = 1,
    kExitParse = 2,
    kExitUndecidable = 3,
    kExitUsage = 4,
};

int exit_code_for(DiagnosticKind kind);

/// Runs the tool on args (args[0] is the program name) and returns the exit code.
///
///   infer    PROGRAM... --size N [--order r,...]
///   extract  PROGRAM --rank R --size N
///   merge    LEFT RIGHT --size N --merged r,... --k K
///   simulate TYPE... --size N
///
/// Shared flags: --enum-cap, --state-cap, --unroll, --json, --trace.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace protomerge

#endif  // PROTOMERGE_CLI_HPP_
