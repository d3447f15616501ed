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

#ifndef KEYRET_ORACLE_HPP_
#define KEYRET_ORACLE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "keyret/callgraph.hpp"
#include "keyret/parallel.hpp"
#include "keyret/promptset.hpp"

namespace keyret {

struct Resolution {
  std::string answer;
  std::size_t hops = 0;             // call depth; 0 for a literal leaf
  std::vector<std::string> path;    // longest chain walked, entry first
};

// Evaluates entry by walking the graph: a literal body is its value, a call
// chain is the concatenation of its callees' values, left to right.
Resolution resolve(const CallGraph& graph, std::string_view entry);

// All payload-bearing chain answers of functions nobody in-context calls,
// except the entry itself. These are the competing answers a confused
// reader could return.
std::vector<std::string> distractor_answers(const CallGraph& graph,
                                            std::string_view entry);

struct SuiteMismatch {
  std::string prompt_id;
  std::string field;    // "answer", "forward_refs", "spread", "parse"
  std::string expected;
  std::string got;
};

struct SuiteValidation {
  std::size_t checked = 0;
  std::vector<SuiteMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Re-derives every stored prompt field that has an independent definition:
// parses prompt_text from scratch, resolves the key, and recomputes the
// forward-reference count and spread. Any disagreement is reported, never
// thrown.
SuiteValidation validate_suite(const PromptSet& set, const Tokenizer& tokenizer,
                               ParallelMode mode = default_parallel_mode());

}  // namespace keyret

#endif  // KEYRET_ORACLE_HPP_
