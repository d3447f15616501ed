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

#ifndef KEYRET_TASKGEN_HPP_
#define KEYRET_TASKGEN_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "keyret/corpus.hpp"
#include "keyret/parallel.hpp"
#include "keyret/promptset.hpp"
#include "keyret/rng.hpp"

namespace keyret {

// C(n, k) in uint64; nullopt on overflow.
std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k);

// Combination of rank `rank` (0-based) among the C(n, k) ascending
// k-subsets of [0, n), ordered lexicographically. Ascending slot indices.
std::vector<std::size_t> unrank_combination(std::uint64_t n, std::uint64_t k,
                                            std::uint64_t rank);

// Permutation of [0, k) with lexicographic rank `rank` (0-based).
std::vector<std::size_t> unrank_permutation(std::size_t k, std::uint64_t rank);

std::uint64_t factorial(std::size_t k);

// Names already taken in a suite (task functions and corpus functions).
class NameRegistry {
 public:
  bool reserve(const std::string& name) { return used_.insert(name).second; }
  bool contains(const std::string& name) const { return used_.count(name); }

 private:
  std::set<std::string> used_;
};

// Identifier of 2 or 3 six-char segments joined by '_'. The first segment is
// lowercase letters so the name is a valid identifier; later segments are
// each all letters or all digits. Total length 13 or 20.
std::string gen_identifier(SeededRng& rng);
std::string fresh_identifier(SeededRng& rng, NameRegistry& names);

// Exactly 10 lowercase letters.
std::string gen_payload(SeededRng& rng);
std::string fresh_payload(SeededRng& rng, std::set<std::string>& payloads);

struct FunctionSnippet {
  std::string name;
  std::string source;
  SnippetRole role = SnippetRole::Filler;
  std::size_t token_len = 0;  // includes the separator newline that follows
};

// One key function with its value chain and distractor chains.
struct TaskInstance {
  std::string instance_id;
  TaskVariant variant = TaskVariant::TwoStep;
  std::vector<FunctionSnippet> chain;        // key first, then values
  std::vector<FunctionSnippet> distractors;  // all chains, flattened
  std::string expected;
  std::vector<std::string> distractor_answers;  // one per distractor chain
  std::vector<std::string> operand_payloads;    // concatenation only
};

FunctionSnippet make_leaf(const std::string& name, const std::string& payload,
                          SnippetRole role);
FunctionSnippet make_caller(const std::string& name,
                            const std::vector<std::string>& callees,
                            SnippetRole role);

// Key + values only; names and payloads drawn from rng, registered so no
// later draw can collide.
TaskInstance build_task(TaskVariant variant, SeededRng& rng,
                        NameRegistry& names, std::set<std::string>& payloads);

// Adds n_d distractor chains shaped like the task itself.
void build_distractors(TaskInstance& task, std::uint32_t n_d, SeededRng& rng,
                       NameRegistry& names, std::set<std::string>& payloads);

// All placements of one task instance: every sampled slot combination times
// every ordering of the chain snippets over those slots.
std::vector<PromptInstance> assemble_prompts(
    const GenerationConfig& config, const Tokenizer& tokenizer,
    const TaskInstance& task, const std::vector<FillerFunction>& fillers,
    SeededRng& rng);

// Full pipeline: corpus load, n_k independent task instances, placement.
PromptSet generate_suite(const GenerationConfig& config);
PromptSet generate_suite(const GenerationConfig& config,
                         const std::vector<FillerFunction>& pool,
                         const Tokenizer& tokenizer,
                         const std::string& corpus_hash);

// Copy of the suite with relation comments inserted into every prompt and
// all token-dependent statistics recomputed. Comments add tokens, so
// annotated totals may pass the original budget.
PromptSet annotate_suite(const PromptSet& set, const CommentConfig& comments,
                         const Tokenizer& tokenizer,
                         ParallelMode mode = default_parallel_mode());

}  // namespace keyret

#endif  // KEYRET_TASKGEN_HPP_
