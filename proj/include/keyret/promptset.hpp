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

#ifndef KEYRET_PROMPTSET_HPP_
#define KEYRET_PROMPTSET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keyret/callgraph.hpp"

namespace keyret {

enum class TaskVariant { OneStep, TwoStep, ThreeStep, Concatenation };

std::string_view to_string(TaskVariant variant);
TaskVariant variant_from_string(std::string_view name);

// Number of task-chain snippets the variant places into the context.
std::size_t chain_length(TaskVariant variant);

enum class SnippetRole { Key, Value, Distractor, Filler };

std::string_view to_string(SnippetRole role);
SnippetRole role_from_string(std::string_view name);

struct GenerationConfig {
  TaskVariant variant = TaskVariant::TwoStep;
  std::uint32_t n_k = 1;               // key functions (task instances)
  std::uint32_t n_d = 0;               // distractor chains per prompt
  std::size_t n_t = 2048;              // token budget per prompt
  std::optional<std::uint64_t> n_p;    // position combos cap; nullopt = all
  std::uint64_t seed = 0;
  std::filesystem::path corpus_path;
  std::string tokenizer_spec;          // "" means byte4

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

struct TaskPosition {
  std::string name;
  std::size_t token_index = 0;
};

struct PromptInstance {
  std::string prompt_id;           // "<instance>/c<combo>/p<perm>"
  std::string task_instance_id;    // "<variant>-k<index>"
  std::string prompt_text;
  // Every snippet in context order with its role.
  std::vector<std::pair<std::string, SnippetRole>> snippet_order;
  // Task chain functions in chain order (key first) with the token index of
  // their def keyword.
  std::vector<TaskPosition> task_positions;
  std::size_t total_tokens = 0;
  std::size_t n_forward_refs = 0;
  std::size_t spread_tokens = 0;
  double spread_norm = 0.0;
  std::uint64_t position_combo_id = 0;  // rank in the combination order
  std::uint64_t permutation_id = 0;     // rank in lexicographic perm order
  std::string expected;
  std::vector<std::string> distractor_answers;
  // Concatenation only: the two operand payloads in call order.
  std::vector<std::string> operand_payloads;

  const std::string& key_name() const { return task_positions.front().name; }
};

struct PromptSetHeader {
  GenerationConfig config;
  std::string toolkit_version;
  std::string corpus_hash;
  std::string tokenizer_id;
  // Set once the suite has been annotated with relation comments.
  std::optional<CommentConfig> annotation;
};

struct PromptSet {
  PromptSetHeader header;
  std::vector<PromptInstance> prompts;
};

// JSONL: one header line, then one line per prompt.
std::string serialize_promptset(const PromptSet& set);
void save_promptset(const PromptSet& set, const std::filesystem::path& path);
PromptSet parse_promptset(std::string_view text, std::string_view origin = "");
PromptSet load_promptset(const std::filesystem::path& path);

}  // namespace keyret

#endif  // KEYRET_PROMPTSET_HPP_
