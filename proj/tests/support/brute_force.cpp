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

// Enumeration oracle for entailment. It only uses eval_prop, never the
// abstraction in the logic module.

#include <functional>

#include "generators.hpp"
#include "protomerge/error.hpp"

namespace protomerge::testing {

namespace {

bool holds(const Assignment& env, const Proposition& p) {
    try {
        return eval_prop(env, p);
    } catch (const EvalError&) {
        return false;
    }
}

}  // namespace

bool brute_force_entails(const BoxedContext& boxed, const Proposition& prop) {
    const auto& entries = boxed.ctx.entries();
    Assignment env;
    std::function<bool(std::size_t)> all = [&](std::size_t i) -> bool {
        if (i == entries.size()) return holds(env, prop);
        const auto& [name, box] = boxed.boxes[i];
        const auto& r = std::get<RefinedType>(entries[i].type.node);
        for (std::int64_t v = box.first; v <= box.second; ++v) {
            Assignment with_binder = env;
            with_binder[r.binder] = v;
            if (!holds(with_binder, r.pred)) continue;
            env[name] = v;
            bool ok = all(i + 1);
            env.erase(name);
            if (!ok) return false;
        }
        return true;
    };
    return all(0);
}

}  // namespace protomerge::testing
