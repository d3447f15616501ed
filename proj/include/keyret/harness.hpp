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

#ifndef KEYRET_HARNESS_HPP_
#define KEYRET_HARNESS_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keyret/promptset.hpp"
#include "keyret/rng.hpp"

namespace keyret {

struct SamplingConfig {
  double temperature = 0.8;
  double top_p = 0.95;
  std::uint32_t top_k = 0;  // 0 disables top-k
  std::uint32_t samples_per_prompt = 10;
  std::uint32_t max_new_tokens = 32;

  void validate() const;  // ConfigError on out-of-range values
};

enum class BackendKind { OracleMock, ScriptedLocal, HttpCompletion };

struct BackendDescriptor {
  BackendKind kind = BackendKind::OracleMock;
  std::string id = "mock";       // recorded in every eval record
  std::string endpoint;          // HTTP base URL or script file
  std::string model;             // model name passed to HTTP backends
  std::string api_key_env = "KEYRET_API_KEY";
  std::map<std::string, std::string> extra_options;  // passed through

  bool supports_prefix_constraint() const {
    return kind != BackendKind::HttpCompletion;
  }
};

// First-token guard: until a quote has been produced, only tokens that keep
// the output inside `[space]* quote ...` are allowed. After the quote the
// stream is unconstrained.
class PrefixConstraint {
 public:
  bool allows(std::string_view token) const;
  // Record an emitted token; it must have been allowed.
  void observe(std::string_view token);
  bool released() const { return released_; }
  void reset() { released_ = false; }

 private:
  bool released_ = false;
};

// Mixture the oracle-backed mock draws its answers from. The remainder
// 1 - correct - distractor - partial is random-noise answers.
struct MockRates {
  double correct = 1.0;
  double distractor = 0.0;
  double partial = 0.0;

  double noise() const { return 1.0 - correct - distractor - partial; }
  void validate() const;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual const BackendDescriptor& descriptor() const = 0;
  // One completion string per sample for a single prompt. final_prompt is
  // prepare_prompt(prompt.prompt_text, descriptor()).
  virtual std::vector<std::string> complete(const PromptInstance& prompt,
                                            std::string_view final_prompt,
                                            const SamplingConfig& sampling) = 0;
};

// Answers from the ground-truth graph, corrupted per MockRates. Sample
// outcomes depend only on (seed, prompt_id, sample index), never on
// evaluation order.
std::unique_ptr<Backend> make_oracle_mock(const BackendDescriptor& descriptor,
                                          std::uint64_t seed,
                                          const MockRates& rates);

struct TokenDecision {
  std::string candidate;
  bool accepted = false;
  bool constrained = false;  // constraint still active at this step
};

// Deterministic token-level backend for constraint tests: at each step it
// emits the first allowed candidate from a scripted list. Keeps a log of
// every decision.
class ScriptedLocalBackend : public Backend {
 public:
  // steps: candidate tokens per step, reused for every sample.
  ScriptedLocalBackend(BackendDescriptor descriptor,
                       std::vector<std::vector<std::string>> steps);

  const BackendDescriptor& descriptor() const override { return descriptor_; }
  std::vector<std::string> complete(const PromptInstance& prompt,
                                    std::string_view final_prompt,
                                    const SamplingConfig& sampling) override;

  const std::vector<TokenDecision>& decisions() const { return decisions_; }

 private:
  BackendDescriptor descriptor_;
  std::vector<std::vector<std::string>> steps_;
  std::vector<TokenDecision> decisions_;
};

// POST {endpoint}/v1/completions with n = samples_per_prompt. Retryable
// failures (connect errors, 429, 5xx) raise TransientBackendError.
std::unique_ptr<Backend> make_http_backend(const BackendDescriptor& descriptor);

// Builds the backend the descriptor names. ScriptedLocal descriptors load
// their candidate steps from the JSON file at descriptor.endpoint.
std::unique_ptr<Backend> make_backend(const BackendDescriptor& descriptor,
                                      std::uint64_t seed,
                                      const MockRates& rates = {});

// Throws ConstraintUnsupported unless the backend can constrain tokens.
PrefixConstraint constrain_prefix(const Backend& backend);

// HTTP backends cannot constrain the first token, so the opening quote is
// appended to the prompt instead; everyone else gets the text unchanged.
std::string prepare_prompt(std::string_view prompt_text,
                           const BackendDescriptor& descriptor);

// Content of the first complete string literal in raw, or nullopt. When
// prefixed_quote is set the opening '"' already lives in the prompt and raw
// starts inside the literal.
std::optional<std::string> extract_answer(std::string_view raw,
                                          bool prefixed_quote);

struct EvalRecord {
  std::string prompt_id;
  std::vector<std::string> raw_samples;
  std::vector<std::optional<std::string>> extracted;
  std::vector<bool> correct;
  std::int64_t started_at_ms = 0;
  std::int64_t finished_at_ms = 0;
  std::string backend_id;
  bool complete = true;

  std::uint32_t correct_count() const;
};

struct EvalOptions {
  std::size_t concurrency = 4;     // in-flight prompts
  std::size_t max_attempts = 5;
  std::chrono::milliseconds backoff_base{250};
  // Test hook: stop (as if interrupted) after this many newly written
  // records.
  std::optional<std::size_t> stop_after;
};

struct EvalOutcome {
  std::size_t evaluated = 0;         // records written this run
  std::size_t skipped_existing = 0;  // already complete in the sink
  std::size_t incomplete = 0;        // written but marked incomplete
};

// Runs every prompt without a complete record through the backend and
// appends results to the JSONL sink at out. Safe to re-run after an
// interruption: complete records are never redone. Raises
// BackendUnavailable when nothing at all could be evaluated.
EvalOutcome evaluate(const PromptSet& set, Backend& backend,
                     const SamplingConfig& sampling,
                     const std::filesystem::path& out,
                     const EvalOptions& options = {});

struct RecordsHeader {
  std::string promptset_hash;
  std::string backend_id;
  SamplingConfig sampling;
};

std::vector<EvalRecord> load_records(const std::filesystem::path& path,
                                     RecordsHeader* header = nullptr);

}  // namespace keyret

#endif  // KEYRET_HARNESS_HPP_
