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

#include "keyret/taskgen.hpp"

#include <algorithm>
#include <numeric>

#include "keyret/errors.hpp"
#include "keyret/parallel.hpp"
#include "keyret/util.hpp"
#include "keyret/version.hpp"

namespace keyret {

std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > ~std::uint64_t{0}) {
      return std::nullopt;
    }
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::size_t> unrank_combination(std::uint64_t n, std::uint64_t k,
                                            std::uint64_t rank) {
  auto total = binomial(n, k);
  if (!total || rank >= *total) {
    throw DomainError("combination rank out of range");
  }
  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  std::uint64_t v = 0;
  for (std::uint64_t remaining = k; remaining > 0; --remaining) {
    while (true) {
      // Subsets of this rank block all start with v.
      std::uint64_t block = binomial(n - 1 - v, remaining - 1).value();
      if (rank < block) {
        chosen.push_back(static_cast<std::size_t>(v));
        ++v;
        break;
      }
      rank -= block;
      ++v;
    }
  }
  return chosen;
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) {
    f *= i;
  }
  return f;
}

std::vector<std::size_t> unrank_permutation(std::size_t k,
                                            std::uint64_t rank) {
  if (rank >= factorial(k)) {
    throw DomainError("permutation rank out of range");
  }
  std::vector<std::size_t> pool(k);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = k; i > 0; --i) {
    std::uint64_t f = factorial(i - 1);
    std::size_t idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

std::string gen_identifier(SeededRng& rng) {
  const std::size_t segments = 2 + rng.index(2);
  std::string out;
  for (std::size_t s = 0; s < segments; ++s) {
    if (s) {
      out += '_';
    }
    // First segment must be letters to keep the name a valid identifier.
    const bool letters = (s == 0) ? true : rng.index(2) == 0;
    for (int i = 0; i < 6; ++i) {
      out += letters ? static_cast<char>('a' + rng.index(26))
                     : static_cast<char>('0' + rng.index(10));
    }
  }
  return out;
}

std::string fresh_identifier(SeededRng& rng, NameRegistry& names) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::string name = gen_identifier(rng);
    if (names.reserve(name)) {
      return name;
    }
  }
  throw ConfigError("could not draw a fresh identifier in 1000 attempts");
}

std::string gen_payload(SeededRng& rng) {
  std::string out;
  for (int i = 0; i < 10; ++i) {
    out += static_cast<char>('a' + rng.index(26));
  }
  return out;
}

std::string fresh_payload(SeededRng& rng, std::set<std::string>& payloads) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::string p = gen_payload(rng);
    if (payloads.insert(p).second) {
      return p;
    }
  }
  throw ConfigError("could not draw a fresh payload in 1000 attempts");
}

FunctionSnippet make_leaf(const std::string& name, const std::string& payload,
                          SnippetRole role) {
  FunctionSnippet s;
  s.name = name;
  s.source = "def " + name + "():\n    return \"" + payload + "\"\n";
  s.role = role;
  return s;
}

FunctionSnippet make_caller(const std::string& name,
                            const std::vector<std::string>& callees,
                            SnippetRole role) {
  FunctionSnippet s;
  s.name = name;
  s.source = "def " + name + "():\n    return ";
  for (std::size_t i = 0; i < callees.size(); ++i) {
    if (i) {
      s.source += " + ";
    }
    s.source += callees[i] + "()";
  }
  s.source += "\n";
  s.role = role;
  return s;
}

namespace {

// One chain shaped like the variant. Roles: first snippet `root_role`, rest
// `rest_role`. Returns the chain's resolved answer.
std::string build_chain(TaskVariant variant, SeededRng& rng,
                        NameRegistry& names, std::set<std::string>& payloads,
                        SnippetRole root_role, SnippetRole rest_role,
                        std::vector<FunctionSnippet>& out,
                        std::vector<std::string>* operands) {
  const std::size_t len = chain_length(variant);
  std::vector<std::string> chain_names;
  chain_names.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    chain_names.push_back(fresh_identifier(rng, names));
  }
  switch (variant) {
    case TaskVariant::OneStep: {
      std::string p = fresh_payload(rng, payloads);
      out.push_back(make_leaf(chain_names[0], p, root_role));
      return p;
    }
    case TaskVariant::TwoStep: {
      std::string p = fresh_payload(rng, payloads);
      out.push_back(make_caller(chain_names[0], {chain_names[1]}, root_role));
      out.push_back(make_leaf(chain_names[1], p, rest_role));
      return p;
    }
    case TaskVariant::ThreeStep: {
      std::string p = fresh_payload(rng, payloads);
      out.push_back(make_caller(chain_names[0], {chain_names[1]}, root_role));
      out.push_back(
          make_caller(chain_names[1], {chain_names[2]}, rest_role));
      out.push_back(make_leaf(chain_names[2], p, rest_role));
      return p;
    }
    case TaskVariant::Concatenation: {
      std::string p1 = fresh_payload(rng, payloads);
      std::string p2 = fresh_payload(rng, payloads);
      out.push_back(make_caller(chain_names[0],
                                {chain_names[1], chain_names[2]}, root_role));
      out.push_back(make_leaf(chain_names[1], p1, rest_role));
      out.push_back(make_leaf(chain_names[2], p2, rest_role));
      if (operands) {
        *operands = {p1, p2};
      }
      return p1 + p2;
    }
  }
  throw ConfigError("unreachable variant");
}

// Call edges between chain indices (caller, callee), root first.
std::vector<std::pair<std::size_t, std::size_t>> chain_edges(
    TaskVariant variant) {
  switch (variant) {
    case TaskVariant::OneStep:
      return {};
    case TaskVariant::TwoStep:
      return {{0, 1}};
    case TaskVariant::ThreeStep:
      return {{0, 1}, {1, 2}};
    case TaskVariant::Concatenation:
      return {{0, 1}, {0, 2}};
  }
  return {};
}

}  // namespace

TaskInstance build_task(TaskVariant variant, SeededRng& rng,
                        NameRegistry& names, std::set<std::string>& payloads) {
  TaskInstance task;
  task.variant = variant;
  task.expected =
      build_chain(variant, rng, names, payloads, SnippetRole::Key,
                  SnippetRole::Value, task.chain, &task.operand_payloads);
  return task;
}

void build_distractors(TaskInstance& task, std::uint32_t n_d, SeededRng& rng,
                       NameRegistry& names, std::set<std::string>& payloads) {
  for (std::uint32_t g = 0; g < n_d; ++g) {
    std::string answer =
        build_chain(task.variant, rng, names, payloads, SnippetRole::Distractor,
                    SnippetRole::Distractor, task.distractors, nullptr);
    task.distractor_answers.push_back(std::move(answer));
  }
}

std::vector<PromptInstance> assemble_prompts(
    const GenerationConfig& config, const Tokenizer& tokenizer,
    const TaskInstance& task, const std::vector<FillerFunction>& fillers,
    SeededRng& rng) {
  const std::size_t s = task.chain.size();
  const std::string stem = "assert " + task.chain[0].name + "() == ";

  std::vector<FunctionSnippet> chain = task.chain;
  std::size_t mandatory = 0;
  for (FunctionSnippet& snip : chain) {
    snip.token_len = tokenizer.count(snip.source + "\n");
    mandatory += snip.token_len;
  }
  const std::size_t stem_tokens = tokenizer.count("\n" + stem);
  if (mandatory + stem_tokens > config.n_t) {
    throw TokenBudgetExceeded(
        "task snippets and assert stem alone need " +
        std::to_string(mandatory + stem_tokens) + " tokens, budget is " +
        std::to_string(config.n_t));
  }

  std::vector<FunctionSnippet> irrelevant = task.distractors;
  for (FunctionSnippet& snip : irrelevant) {
    snip.token_len = tokenizer.count(snip.source + "\n");
    mandatory += snip.token_len;
  }
  if (mandatory + stem_tokens > config.n_t) {
    throw TokenBudgetExceeded(
        "task and distractor snippets with the assert stem need " +
        std::to_string(mandatory + stem_tokens) + " tokens, budget is " +
        std::to_string(config.n_t));
  }
  for (const FillerFunction& f : fillers) {
    FunctionSnippet snip;
    snip.name = f.name;
    snip.source = f.source;
    snip.role = SnippetRole::Filler;
    snip.token_len = f.token_len;
    irrelevant.push_back(std::move(snip));
  }
  rng.shuffle(irrelevant);

  const std::size_t n_slots = s + irrelevant.size();
  const auto combos = binomial(n_slots, s);
  if (!combos) {
    throw ConfigError("slot combination count overflows");
  }
  std::vector<std::uint64_t> ranks;
  if (config.n_p && *config.n_p < *combos) {
    ranks = rng.sample_distinct(*combos, static_cast<std::size_t>(*config.n_p));
  } else {
    ranks.resize(static_cast<std::size_t>(*combos));
    std::iota(ranks.begin(), ranks.end(), 0);
  }
  const std::uint64_t perms = factorial(s);
  const auto edges = chain_edges(task.variant);

  std::vector<PromptInstance> prompts;
  prompts.reserve(ranks.size() * static_cast<std::size_t>(perms));
  for (std::uint64_t rank : ranks) {
    const std::vector<std::size_t> combo =
        unrank_combination(n_slots, s, rank);
    for (std::uint64_t perm_id = 0; perm_id < perms; ++perm_id) {
      const std::vector<std::size_t> perm = unrank_permutation(s, perm_id);

      // slot_snippets[i]: what sits in context slot i.
      std::vector<const FunctionSnippet*> slot_snippets(n_slots, nullptr);
      std::vector<std::size_t> chain_slot(s, 0);
      for (std::size_t j = 0; j < s; ++j) {
        slot_snippets[combo[j]] = &chain[perm[j]];
        chain_slot[perm[j]] = combo[j];
      }
      std::size_t next_irrelevant = 0;
      for (std::size_t i = 0; i < n_slots; ++i) {
        if (!slot_snippets[i]) {
          slot_snippets[i] = &irrelevant[next_irrelevant++];
        }
      }

      PromptInstance p;
      p.task_instance_id = task.instance_id;
      p.prompt_id = task.instance_id + "/c" + std::to_string(rank) + "/p" +
                    std::to_string(perm_id);
      std::vector<std::size_t> block_begin(n_slots, 0);
      std::string text;
      for (std::size_t i = 0; i < n_slots; ++i) {
        if (i) {
          text += '\n';
        }
        block_begin[i] = text.size();
        text += slot_snippets[i]->source;
        p.snippet_order.emplace_back(slot_snippets[i]->name,
                                     slot_snippets[i]->role);
      }
      text += "\n\n";
      text += stem;
      p.prompt_text = std::move(text);

      const std::vector<std::uint32_t> ends =
          tokenizer.token_ends(p.prompt_text);
      p.total_tokens = ends.size();
      std::size_t first_tok = ends.size();
      std::size_t last_tok = 0;
      for (std::size_t j = 0; j < s; ++j) {
        const std::size_t slot = chain_slot[j];
        const std::size_t begin_tok = token_index_at(ends, block_begin[slot]);
        const std::size_t end_tok = token_index_at(
            ends, block_begin[slot] + chain[j].source.size() - 1);
        p.task_positions.push_back({chain[j].name, begin_tok});
        first_tok = std::min(first_tok, begin_tok);
        last_tok = std::max(last_tok, end_tok);
      }
      p.spread_tokens = last_tok - first_tok + 1;
      p.spread_norm = static_cast<double>(p.spread_tokens) /
                      static_cast<double>(p.total_tokens);
      for (const auto& [u, v] : edges) {
        if (chain_slot[v] > chain_slot[u]) {
          ++p.n_forward_refs;
        }
      }
      p.position_combo_id = rank;
      p.permutation_id = perm_id;
      p.expected = task.expected;
      p.distractor_answers = task.distractor_answers;
      p.operand_payloads = task.operand_payloads;
      prompts.push_back(std::move(p));
    }
  }
  return prompts;
}

PromptSet generate_suite(const GenerationConfig& config) {
  config.validate();
  auto tokenizer = make_tokenizer(config.tokenizer_spec);
  std::vector<FillerFunction> pool = load_corpus(config.corpus_path,
                                                 *tokenizer);
  return generate_suite(config, pool, *tokenizer,
                        file_fingerprint(config.corpus_path));
}

PromptSet generate_suite(const GenerationConfig& config,
                         const std::vector<FillerFunction>& pool,
                         const Tokenizer& tokenizer,
                         const std::string& corpus_hash) {
  config.validate();
  SeededRng master(config.seed);
  NameRegistry names;
  for (const FillerFunction& f : pool) {
    names.reserve(f.name);
  }
  std::set<std::string> payloads;
  std::size_t max_filler = 0;
  for (const FillerFunction& f : pool) {
    max_filler = std::max(max_filler, f.token_len);
  }

  PromptSet set;
  set.header.config = config;
  set.header.toolkit_version = kToolkitVersion;
  set.header.corpus_hash = corpus_hash;
  set.header.tokenizer_id = tokenizer.id();

  for (std::uint32_t k = 0; k < config.n_k; ++k) {
    SeededRng task_rng = master.derive(stream::kTask, k);
    TaskInstance task = build_task(config.variant, task_rng, names, payloads);
    task.instance_id =
        std::string(to_string(config.variant)) + "-k" + std::to_string(k);
    build_distractors(task, config.n_d, task_rng, names, payloads);

    std::size_t mandatory = 0;
    for (const FunctionSnippet& snip : task.chain) {
      mandatory += tokenizer.count(snip.source + "\n");
    }
    for (const FunctionSnippet& snip : task.distractors) {
      mandatory += tokenizer.count(snip.source + "\n");
    }
    const std::string stem = "assert " + task.chain[0].name + "() == ";
    mandatory += tokenizer.count("\n" + stem);
    if (mandatory > config.n_t) {
      throw TokenBudgetExceeded(
          "mandatory snippets need " + std::to_string(mandatory) +
          " tokens, budget is " + std::to_string(config.n_t));
    }
    const std::size_t fill_budget = config.n_t - mandatory;

    SeededRng fill_rng = master.derive(stream::kFill, k);
    std::vector<FillerFunction> fillers =
        sample_fillers(fill_rng, pool, fill_budget);
    std::size_t used = 0;
    for (const FillerFunction& f : fillers) {
      used += f.token_len;
    }
    if (fillers.size() == pool.size() && fill_budget - used > max_filler) {
      throw CorpusTooSmall(
          "filler pool exhausted " + std::to_string(fill_budget - used) +
          " tokens short of the budget (largest filler is " +
          std::to_string(max_filler) + ")");
    }

    SeededRng pos_rng = master.derive(stream::kPos, k);
    std::vector<PromptInstance> prompts =
        assemble_prompts(config, tokenizer, task, fillers, pos_rng);
    for (PromptInstance& p : prompts) {
      set.prompts.push_back(std::move(p));
    }
  }
  return set;
}

PromptSet annotate_suite(const PromptSet& set, const CommentConfig& comments,
                         const Tokenizer& tokenizer, ParallelMode mode) {
  PromptSet out;
  out.header = set.header;
  out.header.annotation = comments;
  out.prompts = set.prompts;
  parallel_for(out.prompts.size(), mode, [&](std::size_t i) {
    PromptInstance& p = out.prompts[i];
    p.prompt_text = annotate(p.prompt_text, comments);
    const CallGraph graph = parse(p.prompt_text);
    const std::vector<std::uint32_t> ends =
        tokenizer.token_ends(p.prompt_text);
    p.total_tokens = ends.size();
    std::size_t first_tok = ends.size();
    std::size_t last_tok = 0;
    for (TaskPosition& tp : p.task_positions) {
      const FunctionDef* def = graph.find(tp.name);
      if (!def) {
        throw UnknownTaskName("task function " + tp.name +
                              " vanished while annotating " + p.prompt_id);
      }
      tp.token_index = token_index_at(ends, def->begin);
      first_tok = std::min(first_tok, tp.token_index);
      last_tok = std::max(last_tok, token_index_at(ends, def->end - 1));
    }
    p.spread_tokens = last_tok - first_tok + 1;
    p.spread_norm = static_cast<double>(p.spread_tokens) /
                    static_cast<double>(p.total_tokens);
  });
  return out;
}

}  // namespace keyret
