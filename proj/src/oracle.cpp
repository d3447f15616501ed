// Copyright 2026 The keyret Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "keyret/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "keyret/errors.hpp"

namespace keyret {
namespace {

struct Walker {
  const CallGraph& graph;
  std::set<std::string, std::less<>> active;

  Resolution walk(std::string_view name) {
    const FunctionDef* def = graph.find(name);
    if (!def) {
      throw UnresolvableEntry("call to undefined function " +
                              std::string(name));
    }
    if (!active.insert(std::string(name)).second) {
      throw CycleDetected("call cycle through " + std::string(name));
    }
    Resolution res;
    auto payload = graph.payloads.find(std::string(name));
    if (payload != graph.payloads.end()) {
      res.answer = payload->second;
      res.path = {std::string(name)};
    } else {
      std::vector<const CallEdge*> calls;
      for (const CallEdge& e : graph.edges) {
        if (e.caller == name) {
          calls.push_back(&e);
        }
      }
      std::sort(calls.begin(), calls.end(),
                [](const CallEdge* a, const CallEdge* b) {
                  return a->callsite < b->callsite;
                });
      if (calls.empty()) {
        throw UnresolvableEntry("body of " + std::string(name) +
                                " neither returns a literal nor calls "
                                "anything recognisable");
      }
      Resolution deepest;
      for (const CallEdge* e : calls) {
        Resolution sub = walk(e->callee);
        res.answer += sub.answer;
        if (deepest.path.empty() || sub.hops > deepest.hops) {
          deepest = std::move(sub);
        }
      }
      res.hops = deepest.hops + 1;
      res.path.reserve(deepest.path.size() + 1);
      res.path.emplace_back(name);
      res.path.insert(res.path.end(), deepest.path.begin(),
                      deepest.path.end());
    }
    active.erase(active.find(std::string(name)));
    return res;
  }
};

}  // namespace

Resolution resolve(const CallGraph& graph, std::string_view entry) {
  Walker walker{graph, {}};
  return walker.walk(entry);
}

std::vector<std::string> distractor_answers(const CallGraph& graph,
                                            std::string_view entry) {
  std::set<std::string> called;
  for (const CallEdge& e : graph.edges) {
    if (!e.dangling) {
      called.insert(e.callee);
    }
  }
  std::vector<std::string> answers;
  for (const FunctionDef& def : graph.defs) {
    if (def.name == entry || called.count(def.name)) {
      continue;
    }
    try {
      Resolution res = resolve(graph, def.name);
      if (std::find(answers.begin(), answers.end(), res.answer) ==
          answers.end()) {
        answers.push_back(res.answer);
      }
    } catch (const Error&) {
      // Fillers and broken chains resolve to nothing; they cannot compete.
    }
  }
  return answers;
}

SuiteValidation validate_suite(const PromptSet& set, const Tokenizer& tokenizer,
                               ParallelMode mode) {
  SuiteValidation out;
  out.checked = set.prompts.size();
  std::vector<std::vector<SuiteMismatch>> found(set.prompts.size());
  parallel_for(set.prompts.size(), mode, [&](std::size_t i) {
    const PromptInstance& p = set.prompts[i];
    auto bad = [&](const char* field, std::string expected, std::string got) {
      found[i].push_back(
          {p.prompt_id, field, std::move(expected), std::move(got)});
    };
    CallGraph graph;
    try {
      graph = parse(p.prompt_text);
    } catch (const Error& e) {
      bad("parse", "parseable prompt", e.what());
      return;
    }
    if (!graph.assert_name || *graph.assert_name != p.key_name()) {
      bad("parse", "assert stem naming " + p.key_name(),
          graph.assert_name.value_or("<none>"));
      return;
    }
    try {
      Resolution res = resolve(graph, p.key_name());
      if (res.answer != p.expected) {
        bad("answer", p.expected, res.answer);
      }
    } catch (const Error& e) {
      bad("answer", p.expected, e.what());
    }
    try {
      std::size_t refs = count_forward_refs(graph, p.key_name());
      if (refs != p.n_forward_refs) {
        bad("forward_refs", std::to_string(p.n_forward_refs),
            std::to_string(refs));
      }
    } catch (const Error& e) {
      bad("forward_refs", std::to_string(p.n_forward_refs), e.what());
    }
    try {
      std::vector<std::string> names;
      names.reserve(p.task_positions.size());
      for (const TaskPosition& tp : p.task_positions) {
        names.push_back(tp.name);
      }
      Spread spread = compute_spread(graph, p.prompt_text, tokenizer, names);
      if (spread.tokens != p.spread_tokens ||
          std::abs(spread.norm - p.spread_norm) > 1e-12) {
        std::ostringstream want;
        want << p.spread_tokens << "/" << p.spread_norm;
        std::ostringstream got;
        got << spread.tokens << "/" << spread.norm;
        bad("spread", want.str(), got.str());
      }
    } catch (const Error& e) {
      bad("spread", std::to_string(p.spread_tokens), e.what());
    }
  });
  for (auto& per_prompt : found) {
    for (auto& m : per_prompt) {
      out.mismatches.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace keyret
