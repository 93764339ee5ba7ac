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

// Python bindings. Types cross the boundary as their text form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "protomerge/cli.hpp"
#include "protomerge/error.hpp"
#include "protomerge/extract.hpp"
#include "protomerge/logic.hpp"
#include "protomerge/merge.hpp"
#include "protomerge/oracle.hpp"
#include "protomerge/overloaded.hpp"
#include "protomerge/syntax.hpp"

namespace py = pybind11;
namespace pm = protomerge;

namespace {

std::vector<std::string> rules_of(const pm::MergeTrace& trace) { return trace.rule_names(); }

pm::TypingContext context_from(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::vector<pm::ContextEntry> out;
    for (const auto& [name, type] : entries) out.push_back({name, pm::parse_datatype(type)});
    return pm::TypingContext(out);
}

py::dict outcome_dict(const pm::SimOutcome& outcome) {
    py::dict d;
    std::visit(pm::overloaded{
                   [&](const pm::Completed& c) {
                       std::vector<std::string> trace;
                       for (const auto& e : c.trace) trace.push_back(pm::print_event(e));
                       d["status"] = "completed";
                       d["trace"] = trace;
                   },
                   [&](const pm::Deadlocked& s) {
                       std::map<std::int64_t, std::string> stuck;
                       for (const auto& [rank, a] : s.stuck) stuck[rank] = pm::print_action(a);
                       d["status"] = "deadlocked";
                       d["stuck"] = stuck;
                   },
                   [&](const pm::Mismatch& m) {
                       d["status"] = "mismatch";
                       d["detail"] = m.detail;
                   },
               },
               outcome);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Protocol inference for fixed-size message-passing programs";

    auto error = py::register_exception<pm::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<pm::ParseError>(m, "ParseError", error.ptr());
    py::register_exception<pm::UndecidableError>(m, "UndecidableError", error.ptr());
    auto diagnostic = py::register_exception<pm::DiagnosticError>(m, "DiagnosticError", error.ptr());
    py::register_exception<pm::MergeFailure>(m, "MergeFailure", diagnostic.ptr());

    m.def("format_protocol", [](const std::string& text) { return pm::print_protocol(pm::parse_protocol(text)); },
          py::arg("text"), "Parse a protocol and print it in canonical form.");
    m.def("format_process", [](const std::string& text) { return pm::print_process(pm::parse_process(text)); },
          py::arg("text"), "Parse a program and print it in canonical form.");

    m.def(
        "extract_local_type",
        [](const std::string& program, std::int64_t rank, std::int64_t size) {
            pm::Process p = pm::parse_process(program);
            return pm::print_protocol(pm::extract_local_type(pm::initial_context(size), p, rank, size));
        },
        py::arg("program"), py::arg("rank"), py::arg("size"), "Local type of one rank of a program.");

    m.def(
        "merge_types",
        [](const std::string& left, const std::string& right, std::int64_t size, const std::set<std::int64_t>& merged,
           std::int64_t k) {
            pm::MergeResult r = pm::merge_types(pm::merged_context(size, merged), pm::parse_protocol(left),
                                                pm::parse_protocol(right), k);
            return py::make_tuple(pm::print_protocol(r.type), rules_of(r.trace));
        },
        py::arg("left"), py::arg("right"), py::arg("size"), py::arg("merged"), py::arg("k"),
        "Merge the type of the ranks in `merged` with the local type of rank k. Returns (protocol, rule names).");

    m.def(
        "merge_all",
        [](const std::vector<std::string>& local_types, const std::vector<std::int64_t>& order, std::size_t unroll) {
            std::vector<std::pair<std::int64_t, pm::ProtocolType>> locals;
            for (std::size_t r = 0; r < local_types.size(); ++r) {
                locals.emplace_back(static_cast<std::int64_t>(r), pm::parse_protocol(local_types[r]));
            }
            pm::MergeOptions options;
            options.unroll = unroll;
            pm::MergeAllResult r = pm::merge_all(static_cast<std::int64_t>(locals.size()), locals, order, options);
            std::vector<std::vector<std::string>> traces;
            for (const auto& t : r.traces) traces.push_back(rules_of(t));
            return py::make_tuple(pm::print_protocol(r.type), traces);
        },
        py::arg("local_types"), py::arg("order") = std::vector<std::int64_t>{}, py::arg("unroll") = 2,
        "Merge one local type per rank. Returns (protocol, rule names per step).");

    m.def(
        "infer",
        [](const std::string& program, std::int64_t size) {
            pm::Process p = pm::parse_process(program);
            std::vector<std::pair<std::int64_t, pm::ProtocolType>> locals;
            for (std::int64_t r = 0; r < size; ++r) {
                locals.emplace_back(r, pm::extract_local_type(pm::initial_context(size), p, r, size));
            }
            return pm::print_protocol(pm::merge_all(size, locals).type);
        },
        py::arg("program"), py::arg("size"), "Protocol of a program run by `size` processes.");

    m.def(
        "simulate",
        [](const std::vector<std::string>& local_types, std::optional<std::size_t> unroll) {
            auto n = static_cast<std::int64_t>(local_types.size());
            std::vector<std::vector<pm::RankAction>> actions;
            for (std::int64_t r = 0; r < n; ++r) {
                actions.push_back(pm::linearize(pm::initial_context(n), pm::parse_protocol(local_types[r]), r, unroll));
            }
            return outcome_dict(pm::simulate(actions, n));
        },
        py::arg("local_types"), py::arg("unroll") = py::none(),
        "Run one local type per rank under synchronous semantics.");

    m.def(
        "entails",
        [](const std::vector<std::pair<std::string, std::string>>& context, const std::string& prop) {
            return std::string(pm::to_string(pm::entails(context_from(context), pm::parse_prop(prop))));
        },
        py::arg("context"), py::arg("prop"),
        "'valid', 'invalid' or 'undecidable'. The context is a list of (name, datatype) pairs.");

    m.def(
        "dtype_equiv",
        [](const std::string& lhs, const std::string& rhs, std::int64_t size) {
            return pm::dtype_equiv(pm::initial_context(size), pm::parse_datatype(lhs), pm::parse_datatype(rhs));
        },
        py::arg("lhs"), py::arg("rhs"), py::arg("size"), "Datatype equivalence with `size` fixed.");

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "protomerge");
            std::ostringstream out, err;
            int code = pm::run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command line tool in-process. Returns (exit code, stdout, stderr).");
}
