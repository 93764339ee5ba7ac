# Copyright 2026 The protomerge Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Protocol inference for fixed-size message-passing programs."""

from ._core import (
    DiagnosticError,
    Error,
    MergeFailure,
    ParseError,
    UndecidableError,
    dtype_equiv,
    entails,
    extract_local_type,
    format_process,
    format_protocol,
    infer,
    merge_all,
    merge_types,
    run_cli,
    simulate,
)

__all__ = [
    "DiagnosticError",
    "Error",
    "MergeFailure",
    "ParseError",
    "UndecidableError",
    "dtype_equiv",
    "entails",
    "extract_local_type",
    "format_process",
    "format_protocol",
    "infer",
    "merge_all",
    "merge_types",
    "run_cli",
    "simulate",
]
