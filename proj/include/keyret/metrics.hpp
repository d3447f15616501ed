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

#ifndef KEYRET_METRICS_HPP_
#define KEYRET_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyret/harness.hpp"
#include "keyret/parallel.hpp"
#include "keyret/promptset.hpp"

namespace keyret {

// Chance that at least one of k uniformly drawn samples (without
// replacement) out of n is among the c correct ones: 1 - C(n-c,k)/C(n,k).
// Exact for k == 1 (equals c/n); requires 1 <= k <= n.
double accuracy_at_k(std::uint32_t n, std::uint32_t c, std::uint32_t k);

// Unit-cost edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Half-width of a normal 95% interval over values (sample stddev, n-1).
// Needs at least two values.
double ci95(std::span<const double> values);

enum class FailureClass { Correct, DistractorAnswer, PartialAnswer, Other };

std::string_view to_string(FailureClass cls);

struct ClassifiedSample {
  FailureClass cls = FailureClass::Other;
  std::size_t edit_distance = 0;  // to the expected answer
};

// Checked in order: correct, distractor chain answer, single concatenation
// operand, everything else. A missing extraction is Other at full distance.
ClassifiedSample classify(const std::optional<std::string>& extracted,
                          const PromptInstance& prompt);

struct FailureSummary {
  std::size_t samples = 0;
  std::map<FailureClass, std::size_t> counts;
  std::map<FailureClass, double> mean_edit_distance;  // absent if no samples
  double incorrect_mean_edit_distance = 0.0;
};

FailureSummary summarise_failures(const PromptSet& set,
                                  const std::vector<EvalRecord>& records,
                                  ParallelMode mode = default_parallel_mode());

enum class GroupDimension {
  Overall,
  PositionBin,       // key function position, 20 bins
  PositionBinPair,   // (key bin, value bin); needs a 2+ snippet chain
  ForwardRefs,
  SpreadBin,         // normalised spread, 20 bins
  SpreadForwardRefs, // (forward refs, spread bin)
  Distractors,
  ContextSize,
  CommentConfig,
};

std::string_view to_string(GroupDimension dim);
GroupDimension dimension_from_string(std::string_view name);

struct GroupedAccuracy {
  std::vector<long long> key;  // numeric parts; empty for label-only groups
  std::string label;
  double mean = 0.0;
  double ci = 0.0;             // 0 for singleton groups
  std::size_t prompts = 0;
};

struct AggregateOptions {
  std::uint32_t k = 1;
  // Missing records normally raise MissingRecords; true downgrades to
  // skipping them (counted).
  bool allow_missing = false;
  ParallelMode mode = default_parallel_mode();
};

struct Aggregation {
  GroupDimension dimension = GroupDimension::Overall;
  std::uint32_t k = 1;
  std::vector<GroupedAccuracy> groups;  // sorted by key
  std::size_t prompts_used = 0;
  std::size_t incomplete_excluded = 0;
  std::size_t missing_skipped = 0;
};

Aggregation aggregate(const PromptSet& set,
                      const std::vector<EvalRecord>& records,
                      GroupDimension dimension,
                      const AggregateOptions& options = {});

}  // namespace keyret

#endif  // KEYRET_METRICS_HPP_
