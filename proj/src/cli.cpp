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

#include "protomerge/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "protomerge/error.hpp"
#include "protomerge/extract.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/oracle.hpp"
#include "protomerge/overloaded.hpp"
#include "protomerge/syntax.hpp"

namespace protomerge {

int exit_code_for(DiagnosticKind kind) {
    return kind == DiagnosticKind::EntailmentUndecidable ? kExitUndecidable : kExitUntypable;
}

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::int64_t size = 0;
    std::size_t enum_cap = LogicOptions{}.enum_cap;
    std::size_t state_cap = SimOptions{}.state_cap;
    std::size_t unroll = MergeOptions{}.unroll;
    bool json = false;
    bool trace = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

json to_json(const TraceStep& step) {
    json premises = json::array();
    for (const auto& p : step.premises) premises.push_back({{"prop", print_prop(p.prop)}, {"verdict", to_string(p.verdict)}});
    return {{"rule", step.rule},
            {"left", step.left},
            {"right", step.right},
            {"premises", premises},
            {"datatypeChecks", step.datatype_checks}};
}

json to_json(const MergeTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.steps) steps.push_back(to_json(s));
    return steps;
}

json to_json(const Diagnostic& d) {
    return {{"kind", to_string(d.kind)}, {"location", d.location}, {"ruleTrace", d.rule_trace}, {"message", d.message}};
}

void print_diagnostic(std::ostream& out, const Diagnostic& d) {
    out << "error: " << to_string(d.kind) << "\n";
    out << "location: " << d.location << "\n";
    if (!d.rule_trace.empty()) {
        out << "rules tried:\n";
        for (const auto& line : d.rule_trace) out << "  " << line << "\n";
    }
    out << "message: " << d.message << "\n";
}

class Runner {
  public:
    Runner(const Flags& flags, std::ostream& out) : flags_(flags), out_(out) {
        if (flags.size < 2) throw UsageError("--size must be at least 2");
        merge_options_.logic.enum_cap = flags.enum_cap;
        merge_options_.unroll = flags.unroll;
        sim_options_.logic.enum_cap = flags.enum_cap;
        sim_options_.state_cap = flags.state_cap;
    }

    int infer(const std::vector<std::string>& files, const std::vector<std::int64_t>& order) {
        std::int64_t n = flags_.size;
        if (files.size() != 1 && static_cast<std::int64_t>(files.size()) != n) {
            throw UsageError("give one program, or one program per rank (" + std::to_string(n) + ")");
        }
        std::vector<Process> programs;
        for (const auto& f : files) programs.push_back(parse_process(read_file(f), f));
        TypingContext ctx = initial_context(n);
        std::vector<std::pair<std::int64_t, ProtocolType>> locals;
        for (std::int64_t r = 0; r < n; ++r) {
            const Process& p = programs.size() == 1 ? programs.front() : programs[r];
            locals.emplace_back(r, extract_local_type(ctx, p, r, n, merge_options_.logic));
        }
        MergeAllResult result = merge_all(n, locals, order, merge_options_);
        if (flags_.json) {
            json traces = json::array();
            for (const auto& t : result.traces) traces.push_back(to_json(t));
            out_ << json{{"status", "ok"}, {"protocol", print_protocol(result.type)}, {"traces", traces}}.dump(2)
                 << "\n";
        } else {
            out_ << print_protocol(result.type) << "\n";
            if (flags_.trace) {
                for (std::size_t i = 0; i < result.traces.size(); ++i) {
                    out_ << "# merge step " << (i + 1) << "\n" << result.traces[i].to_text();
                }
            }
        }
        return kExitOk;
    }

    int extract(const std::string& file, std::int64_t rank) {
        if (rank < 0 || rank >= flags_.size) throw UsageError("--rank must lie in 0..size-1");
        Process p = parse_process(read_file(file), file);
        ProtocolType t = extract_local_type(initial_context(flags_.size), p, rank, flags_.size, merge_options_.logic);
        if (flags_.json) {
            out_ << json{{"status", "ok"}, {"rank", rank}, {"localType", print_protocol(t)}}.dump(2) << "\n";
        } else {
            out_ << print_protocol(t) << "\n";
        }
        return kExitOk;
    }

    int merge(const std::string& left_file, const std::string& right_file, const std::vector<std::int64_t>& merged,
              std::int64_t k) {
        ProtocolType left = parse_protocol(read_file(left_file), left_file);
        ProtocolType right = parse_protocol(read_file(right_file), right_file);
        TypingContext ctx = merged_context(flags_.size, std::set<std::int64_t>(merged.begin(), merged.end()));
        if (k < 0 || k >= flags_.size) throw UsageError("--k must lie in 0..size-1");
        MergeResult result = merge_types(ctx, left, right, k, merge_options_);
        if (flags_.json) {
            out_ << json{{"status", "ok"}, {"protocol", print_protocol(result.type)}, {"trace", to_json(result.trace)}}
                        .dump(2)
                 << "\n";
        } else {
            out_ << print_protocol(result.type) << "\n";
            if (flags_.trace) out_ << result.trace.to_text();
        }
        return kExitOk;
    }

    int simulate(const std::vector<std::string>& files) {
        std::int64_t n = flags_.size;
        if (files.size() != 1 && static_cast<std::int64_t>(files.size()) != n) {
            throw UsageError("give one type, or one type per rank (" + std::to_string(n) + ")");
        }
        std::vector<ProtocolType> types;
        for (const auto& f : files) types.push_back(parse_protocol(read_file(f), f));
        TypingContext ctx = initial_context(n);
        std::vector<std::vector<RankAction>> actions;
        for (std::int64_t r = 0; r < n; ++r) {
            const ProtocolType& t = types.size() == 1 ? types.front() : types[r];
            actions.push_back(linearize(ctx, t, r, flags_.unroll));
        }
        SimOutcome outcome = protomerge::simulate(actions, n, sim_options_);
        int code = std::holds_alternative<Completed>(outcome) ? kExitOk : kExitUntypable;
        if (flags_.json) {
            out_ << outcome_json(outcome).dump(2) << "\n";
        } else {
            out_ << print_outcome(outcome);
        }
        return code;
    }

  private:
    static json outcome_json(const SimOutcome& outcome) {
        return std::visit(overloaded{
                              [](const Completed& c) {
                                  json trace = json::array();
                                  for (const auto& e : c.trace) trace.push_back(print_event(e));
                                  return json{{"status", "completed"}, {"trace", trace}};
                              },
                              [](const Deadlocked& d) {
                                  json stuck = json::object();
                                  for (const auto& [rank, a] : d.stuck) stuck[std::to_string(rank)] = print_action(a);
                                  return json{{"status", "deadlocked"}, {"stuck", stuck}};
                              },
                              [](const Mismatch& m) { return json{{"status", "mismatch"}, {"detail", m.detail}}; },
                          },
                          outcome);
    }

    const Flags& flags_;
    std::ostream& out_;
    MergeOptions merge_options_;
    SimOptions sim_options_;
};

// Reports an error either as text or as a JSON document and returns the exit code.
int report(std::ostream& out, std::ostream& err, bool as_json, int code, const std::string& kind,
           const std::string& message, const Diagnostic* diagnostic = nullptr, const MergeTrace* trace = nullptr) {
    if (as_json) {
        json doc{{"status", "error"}, {"exitCode", code}, {"kind", kind}, {"message", message}};
        if (diagnostic != nullptr) doc["diagnostic"] = to_json(*diagnostic);
        if (trace != nullptr) doc["trace"] = to_json(*trace);
        out << doc.dump(2) << "\n";
    } else if (diagnostic != nullptr) {
        print_diagnostic(out, *diagnostic);
    } else {
        err << "error: " << kind << ": " << message << "\n";
    }
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Infer a global communication protocol from per-rank programs", "protomerge"};
    app.require_subcommand(1);
    Flags flags;
    auto shared = [&](CLI::App* cmd) {
        cmd->add_option("--size", flags.size, "Number of processes")->required();
        cmd->add_option("--enum-cap", flags.enum_cap, "Largest enumeration performed by the entailment check");
        cmd->add_option("--state-cap", flags.state_cap, "Largest state space explored by simulate");
        cmd->add_option("--unroll", flags.unroll, "Loop iterations unfolded when merging or simulating");
        cmd->add_flag("--json", flags.json, "Emit a JSON document");
        cmd->add_flag("--trace", flags.trace, "Print the merge rule trace");
    };

    std::vector<std::string> programs;
    std::vector<std::int64_t> order;
    auto* infer = app.add_subcommand("infer", "Extract every rank's local type and merge them");
    infer->add_option("programs", programs, "One shared .proc file, or one per rank")->required();
    infer->add_option("--order", order, "Merge order, a permutation of the ranks")->delimiter(',');
    shared(infer);

    std::string program;
    std::int64_t rank = 0;
    auto* extract = app.add_subcommand("extract", "Print the local type of one rank");
    extract->add_option("program", program, ".proc file")->required();
    extract->add_option("--rank", rank, "Rank to extract")->required();
    shared(extract);

    std::string left;
    std::string right;
    std::vector<std::int64_t> merged;
    std::int64_t k = 0;
    auto* merge = app.add_subcommand("merge", "Merge two protocol files");
    merge->add_option("left", left, "Protocol of the merged ranks")->required();
    merge->add_option("right", right, "Local type of rank k")->required();
    merge->add_option("--merged", merged, "Ranks already merged into the left type")->delimiter(',')->required();
    merge->add_option("--k", k, "Rank of the right type")->required();
    shared(merge);

    std::vector<std::string> types;
    auto* simulate = app.add_subcommand("simulate", "Run local types under synchronous semantics");
    simulate->add_option("types", types, "One .ptype for every rank, or one per rank")->required();
    shared(simulate);

    try {
        std::vector<std::string> rest(args.rbegin(), args.rend());
        if (!rest.empty()) rest.pop_back();
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Runner runner(flags, out);
        if (infer->parsed()) return runner.infer(programs, order);
        if (extract->parsed()) return runner.extract(program, rank);
        if (merge->parsed()) return runner.merge(left, right, merged, k);
        return runner.simulate(types);
    } catch (const MergeFailure& e) {
        int code = exit_code_for(e.diagnostic().kind);
        return report(out, err, flags.json, code, to_string(e.diagnostic().kind), e.what(), &e.diagnostic(), &e.trace());
    } catch (const DiagnosticError& e) {
        int code = exit_code_for(e.diagnostic().kind);
        return report(out, err, flags.json, code, to_string(e.diagnostic().kind), e.what(), &e.diagnostic());
    } catch (const ParseError& e) {
        return report(out, err, flags.json, kExitParse, "ParseError", e.what());
    } catch (const UndecidableError& e) {
        return report(out, err, flags.json, kExitUndecidable, "EntailmentUndecidable", e.what());
    } catch (const StateSpaceExceeded& e) {
        return report(out, err, flags.json, kExitUndecidable, "StateSpaceExceeded", e.what());
    } catch (const ExtractError& e) {
        return report(out, err, flags.json, kExitUntypable, "ResidualConditional", e.what());
    } catch (const EvalError& e) {
        return report(out, err, flags.json, kExitUntypable, "EvalError", e.what());
    } catch (const UnfoldError& e) {
        return report(out, err, flags.json, kExitUntypable, "UnfoldError", e.what());
    } catch (const LogicError& e) {
        return report(out, err, flags.json, kExitUsage, "InvalidInvocation", e.what());
    } catch (const UsageError& e) {
        return report(out, err, flags.json, kExitUsage, "InvalidInvocation", e.what());
    } catch (const std::invalid_argument& e) {
        return report(out, err, flags.json, kExitUsage, "InvalidInvocation", e.what());
    }
}

}  // namespace protomerge
