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

#include "keyret/promptset.hpp"

#include <nlohmann/json.hpp>

#include "keyret/errors.hpp"
#include "keyret/util.hpp"
#include "keyret/version.hpp"

namespace keyret {

using nlohmann::json;

std::string_view to_string(TaskVariant variant) {
  switch (variant) {
    case TaskVariant::OneStep:
      return "one_step";
    case TaskVariant::TwoStep:
      return "two_step";
    case TaskVariant::ThreeStep:
      return "three_step";
    case TaskVariant::Concatenation:
      return "concatenation";
  }
  return "two_step";
}

TaskVariant variant_from_string(std::string_view name) {
  if (name == "one_step") {
    return TaskVariant::OneStep;
  }
  if (name == "two_step") {
    return TaskVariant::TwoStep;
  }
  if (name == "three_step") {
    return TaskVariant::ThreeStep;
  }
  if (name == "concatenation") {
    return TaskVariant::Concatenation;
  }
  throw ConfigError("unknown task variant: " + std::string(name));
}

std::size_t chain_length(TaskVariant variant) {
  switch (variant) {
    case TaskVariant::OneStep:
      return 1;
    case TaskVariant::TwoStep:
      return 2;
    case TaskVariant::ThreeStep:
    case TaskVariant::Concatenation:
      return 3;
  }
  return 2;
}

std::string_view to_string(SnippetRole role) {
  switch (role) {
    case SnippetRole::Key:
      return "key";
    case SnippetRole::Value:
      return "value";
    case SnippetRole::Distractor:
      return "distractor";
    case SnippetRole::Filler:
      return "filler";
  }
  return "filler";
}

SnippetRole role_from_string(std::string_view name) {
  if (name == "key") {
    return SnippetRole::Key;
  }
  if (name == "value") {
    return SnippetRole::Value;
  }
  if (name == "distractor") {
    return SnippetRole::Distractor;
  }
  if (name == "filler") {
    return SnippetRole::Filler;
  }
  throw ConfigError("unknown snippet role: " + std::string(name));
}

void GenerationConfig::validate() const {
  if (n_k == 0) {
    throw ConfigError("n_k must be positive");
  }
  if (n_t == 0) {
    throw ConfigError("n_t must be positive");
  }
  if (n_p && *n_p == 0) {
    throw ConfigError("n_p must be positive when bounded");
  }
  if (corpus_path.empty()) {
    throw ConfigError("corpus path is required");
  }
}

namespace {

json config_to_json(const GenerationConfig& config) {
  json j;
  j["variant"] = std::string(to_string(config.variant));
  j["n_k"] = config.n_k;
  j["n_d"] = config.n_d;
  j["n_t"] = config.n_t;
  if (config.n_p) {
    j["n_p"] = *config.n_p;
  } else {
    j["n_p"] = nullptr;
  }
  j["seed"] = config.seed;
  j["corpus"] = config.corpus_path.string();
  j["tokenizer_spec"] = config.tokenizer_spec;
  return j;
}

GenerationConfig config_from_json(const json& j) {
  GenerationConfig config;
  config.variant = variant_from_string(j.at("variant").get<std::string>());
  config.n_k = j.at("n_k").get<std::uint32_t>();
  config.n_d = j.at("n_d").get<std::uint32_t>();
  config.n_t = j.at("n_t").get<std::size_t>();
  if (!j.at("n_p").is_null()) {
    config.n_p = j.at("n_p").get<std::uint64_t>();
  }
  config.seed = j.at("seed").get<std::uint64_t>();
  config.corpus_path = j.at("corpus").get<std::string>();
  config.tokenizer_spec = j.at("tokenizer_spec").get<std::string>();
  return config;
}

json prompt_to_json(const PromptInstance& p) {
  json j;
  j["prompt_id"] = p.prompt_id;
  j["task_instance_id"] = p.task_instance_id;
  j["prompt_text"] = p.prompt_text;
  json order = json::array();
  for (const auto& [name, role] : p.snippet_order) {
    order.push_back(json::array({name, std::string(to_string(role))}));
  }
  j["snippet_order"] = std::move(order);
  json positions = json::array();
  for (const TaskPosition& tp : p.task_positions) {
    positions.push_back(json{{"name", tp.name}, {"token", tp.token_index}});
  }
  j["task_positions"] = std::move(positions);
  j["total_tokens"] = p.total_tokens;
  j["n_forward_refs"] = p.n_forward_refs;
  j["spread_tokens"] = p.spread_tokens;
  j["spread_norm"] = p.spread_norm;
  j["position_combo_id"] = p.position_combo_id;
  j["permutation_id"] = p.permutation_id;
  j["expected"] = p.expected;
  j["distractor_answers"] = p.distractor_answers;
  j["operand_payloads"] = p.operand_payloads;
  return j;
}

PromptInstance prompt_from_json(const json& j) {
  PromptInstance p;
  p.prompt_id = j.at("prompt_id").get<std::string>();
  p.task_instance_id = j.at("task_instance_id").get<std::string>();
  p.prompt_text = j.at("prompt_text").get<std::string>();
  for (const auto& item : j.at("snippet_order")) {
    p.snippet_order.emplace_back(
        item.at(0).get<std::string>(),
        role_from_string(item.at(1).get<std::string>()));
  }
  for (const auto& item : j.at("task_positions")) {
    p.task_positions.push_back({item.at("name").get<std::string>(),
                                item.at("token").get<std::size_t>()});
  }
  p.total_tokens = j.at("total_tokens").get<std::size_t>();
  p.n_forward_refs = j.at("n_forward_refs").get<std::size_t>();
  p.spread_tokens = j.at("spread_tokens").get<std::size_t>();
  p.spread_norm = j.at("spread_norm").get<double>();
  p.position_combo_id = j.at("position_combo_id").get<std::uint64_t>();
  p.permutation_id = j.at("permutation_id").get<std::uint64_t>();
  p.expected = j.at("expected").get<std::string>();
  p.distractor_answers =
      j.at("distractor_answers").get<std::vector<std::string>>();
  p.operand_payloads =
      j.at("operand_payloads").get<std::vector<std::string>>();
  return p;
}

}  // namespace

std::string serialize_promptset(const PromptSet& set) {
  json header = config_to_json(set.header.config);
  header["type"] = "keyret.promptset";
  header["version"] = set.header.toolkit_version;
  header["corpus_hash"] = set.header.corpus_hash;
  header["tokenizer"] = set.header.tokenizer_id;
  if (set.header.annotation) {
    header["annotation"] = to_label(*set.header.annotation);
  } else {
    header["annotation"] = nullptr;
  }
  std::string out = header.dump();
  out += '\n';
  for (const PromptInstance& p : set.prompts) {
    out += prompt_to_json(p).dump();
    out += '\n';
  }
  return out;
}

void save_promptset(const PromptSet& set, const std::filesystem::path& path) {
  write_file(path, serialize_promptset(set));
}

PromptSet parse_promptset(std::string_view text, std::string_view origin) {
  PromptSet set;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  bool have_header = false;
  const std::string where =
      origin.empty() ? std::string("<memory>") : std::string(origin);
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t stop = (nl == std::string_view::npos) ? text.size() : nl;
    std::string_view line = text.substr(pos, stop - pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    ++lineno;
    if (line.empty()) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError(where + ":" + std::to_string(lineno) +
                        ": bad JSONL line: " + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("type", "") != "keyret.promptset") {
          throw ConfigError(where + ": first line is not a prompt-set header");
        }
        set.header.config = config_from_json(j);
        set.header.toolkit_version = j.at("version").get<std::string>();
        set.header.corpus_hash = j.at("corpus_hash").get<std::string>();
        set.header.tokenizer_id = j.at("tokenizer").get<std::string>();
        if (!j.at("annotation").is_null()) {
          set.header.annotation =
              comment_config_from_label(j.at("annotation").get<std::string>());
        }
        have_header = true;
      } else {
        set.prompts.push_back(prompt_from_json(j));
      }
    } catch (const json::exception& e) {
      throw ConfigError(where + ":" + std::to_string(lineno) +
                        ": bad prompt-set field: " + e.what());
    }
  }
  if (!have_header) {
    throw ConfigError(where + ": empty prompt-set file");
  }
  return set;
}

PromptSet load_promptset(const std::filesystem::path& path) {
  return parse_promptset(read_file(path), path.string());
}

}  // namespace keyret
