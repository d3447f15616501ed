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

#include "keyret/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "keyret/callgraph.hpp"
#include "keyret/errors.hpp"
#include "keyret/taskgen.hpp"

namespace keyret {

double accuracy_at_k(std::uint32_t n, std::uint32_t c, std::uint32_t k) {
  if (k == 0 || k > n) {
    throw DomainError("accuracy@k needs 1 <= k <= n");
  }
  if (c > n) {
    throw DomainError("cannot have more correct samples than samples");
  }
  if (c == 0) {
    return 0.0;
  }
  if (k > n - c) {
    return 1.0;  // every k-subset hits a correct sample
  }
  // 1 - C(n-c, k) / C(n, k), on integers when both binomials fit.
  const auto incorrect = binomial(n - c, k);
  const auto total = binomial(n, k);
  if (incorrect && total) {
    return static_cast<double>(*total - *incorrect) /
           static_cast<double>(*total);
  }
  // Stable product form of C(n-c,k)/C(n,k): prod (n-c-i)/(n-i).
  double ratio = 1.0;
  for (std::uint32_t i = 0; i < k; ++i) {
    ratio *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  }
  return 1.0 - ratio;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  if (b.empty()) {
    return a.size();
  }
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    prev[j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double ci95(std::span<const double> values) {
  if (values.size() < 2) {
    throw DomainError("ci95 needs at least two values");
  }
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
}

std::string_view to_string(FailureClass cls) {
  switch (cls) {
    case FailureClass::Correct:
      return "correct";
    case FailureClass::DistractorAnswer:
      return "distractor";
    case FailureClass::PartialAnswer:
      return "partial";
    case FailureClass::Other:
      return "other";
  }
  return "other";
}

ClassifiedSample classify(const std::optional<std::string>& extracted,
                          const PromptInstance& prompt) {
  ClassifiedSample out;
  if (!extracted) {
    out.cls = FailureClass::Other;
    out.edit_distance = prompt.expected.size();
    return out;
  }
  const std::string& answer = *extracted;
  out.edit_distance = levenshtein(answer, prompt.expected);
  if (answer == prompt.expected) {
    out.cls = FailureClass::Correct;
    return out;
  }
  for (const std::string& d : prompt.distractor_answers) {
    if (answer == d) {
      out.cls = FailureClass::DistractorAnswer;
      return out;
    }
  }
  std::size_t operand_hits = 0;
  for (const std::string& op : prompt.operand_payloads) {
    if (answer == op) {
      ++operand_hits;
    }
  }
  out.cls = operand_hits == 1 ? FailureClass::PartialAnswer
                              : FailureClass::Other;
  return out;
}

FailureSummary summarise_failures(const PromptSet& set,
                                  const std::vector<EvalRecord>& records,
                                  ParallelMode mode) {
  std::map<std::string, const PromptInstance*> by_id;
  for (const PromptInstance& p : set.prompts) {
    by_id[p.prompt_id] = &p;
  }
  struct Partial {
    std::map<FailureClass, std::size_t> counts;
    std::map<FailureClass, double> distance;
    std::size_t samples = 0;
  };
  std::vector<Partial> parts(records.size());
  parallel_for(records.size(), mode, [&](std::size_t i) {
    const EvalRecord& r = records[i];
    if (!r.complete) {
      return;
    }
    auto it = by_id.find(r.prompt_id);
    if (it == by_id.end()) {
      throw MissingRecords("record for unknown prompt " + r.prompt_id,
                           {r.prompt_id});
    }
    for (const auto& ext : r.extracted) {
      ClassifiedSample s = classify(ext, *it->second);
      ++parts[i].counts[s.cls];
      parts[i].distance[s.cls] += static_cast<double>(s.edit_distance);
      ++parts[i].samples;
    }
  });
  FailureSummary summary;
  std::map<FailureClass, double> distance_sums;
  for (const Partial& part : parts) {
    summary.samples += part.samples;
    for (const auto& [cls, n] : part.counts) {
      summary.counts[cls] += n;
    }
    for (const auto& [cls, d] : part.distance) {
      distance_sums[cls] += d;
    }
  }
  double incorrect_distance = 0.0;
  std::size_t incorrect = 0;
  for (const auto& [cls, n] : summary.counts) {
    if (n > 0) {
      summary.mean_edit_distance[cls] =
          distance_sums[cls] / static_cast<double>(n);
    }
    if (cls != FailureClass::Correct) {
      incorrect += n;
      incorrect_distance += distance_sums[cls];
    }
  }
  if (incorrect > 0) {
    summary.incorrect_mean_edit_distance =
        incorrect_distance / static_cast<double>(incorrect);
  }
  return summary;
}

std::string_view to_string(GroupDimension dim) {
  switch (dim) {
    case GroupDimension::Overall:
      return "overall";
    case GroupDimension::PositionBin:
      return "position";
    case GroupDimension::PositionBinPair:
      return "matrix";
    case GroupDimension::ForwardRefs:
      return "forward-refs";
    case GroupDimension::SpreadBin:
      return "spread";
    case GroupDimension::SpreadForwardRefs:
      return "spread-forward-refs";
    case GroupDimension::Distractors:
      return "distractors";
    case GroupDimension::ContextSize:
      return "context-size";
    case GroupDimension::CommentConfig:
      return "comment-config";
  }
  return "overall";
}

GroupDimension dimension_from_string(std::string_view name) {
  for (GroupDimension dim :
       {GroupDimension::Overall, GroupDimension::PositionBin,
        GroupDimension::PositionBinPair, GroupDimension::ForwardRefs,
        GroupDimension::SpreadBin, GroupDimension::SpreadForwardRefs,
        GroupDimension::Distractors, GroupDimension::ContextSize,
        GroupDimension::CommentConfig}) {
    if (to_string(dim) == name) {
      return dim;
    }
  }
  throw ConfigError("unknown grouping dimension: " + std::string(name));
}

namespace {

int spread_bin(double norm) {
  const int bin = static_cast<int>(norm * 20.0);
  return std::clamp(bin, 0, 19);
}

struct PromptKey {
  std::vector<long long> key;
  std::string label;
};

PromptKey group_key(const PromptSet& set, const PromptInstance& p,
                    GroupDimension dim) {
  switch (dim) {
    case GroupDimension::Overall:
      return {{}, "all"};
    case GroupDimension::PositionBin: {
      const long long bin = bin_position(p.task_positions.front().token_index,
                                         p.total_tokens);
      return {{bin}, std::to_string(bin)};
    }
    case GroupDimension::PositionBinPair: {
      if (p.task_positions.size() < 2) {
        throw ShapeMismatch(
            "position matrix needs a chain of at least two functions");
      }
      const long long kb = bin_position(p.task_positions[0].token_index,
                                        p.total_tokens);
      const long long vb = bin_position(p.task_positions[1].token_index,
                                        p.total_tokens);
      return {{kb, vb}, std::to_string(kb) + "," + std::to_string(vb)};
    }
    case GroupDimension::ForwardRefs: {
      const long long refs = static_cast<long long>(p.n_forward_refs);
      return {{refs}, std::to_string(refs)};
    }
    case GroupDimension::SpreadBin: {
      const long long bin = spread_bin(p.spread_norm);
      return {{bin}, std::to_string(bin)};
    }
    case GroupDimension::SpreadForwardRefs: {
      const long long refs = static_cast<long long>(p.n_forward_refs);
      const long long bin = spread_bin(p.spread_norm);
      return {{refs, bin}, std::to_string(refs) + "," + std::to_string(bin)};
    }
    case GroupDimension::Distractors: {
      const long long n_d = set.header.config.n_d;
      return {{n_d}, std::to_string(n_d)};
    }
    case GroupDimension::ContextSize: {
      const long long n_t = static_cast<long long>(set.header.config.n_t);
      return {{n_t}, std::to_string(n_t)};
    }
    case GroupDimension::CommentConfig: {
      const std::string label = set.header.annotation
                                    ? to_label(*set.header.annotation)
                                    : "none";
      return {{}, label};
    }
  }
  return {{}, "all"};
}

}  // namespace

Aggregation aggregate(const PromptSet& set,
                      const std::vector<EvalRecord>& records,
                      GroupDimension dimension,
                      const AggregateOptions& options) {
  std::map<std::string, const EvalRecord*> by_id;
  for (const EvalRecord& r : records) {
    by_id[r.prompt_id] = &r;
  }

  Aggregation agg;
  agg.dimension = dimension;
  agg.k = options.k;

  std::vector<std::string> missing;
  struct Group {
    std::vector<long long> key;
    std::vector<double> values;
  };
  std::map<std::string, Group> groups;
  for (const PromptInstance& p : set.prompts) {
    auto it = by_id.find(p.prompt_id);
    if (it == by_id.end()) {
      missing.push_back(p.prompt_id);
      continue;
    }
    const EvalRecord& r = *it->second;
    if (!r.complete) {
      ++agg.incomplete_excluded;
      continue;
    }
    const auto n = static_cast<std::uint32_t>(r.correct.size());
    const double acc = accuracy_at_k(n, r.correct_count(), options.k);
    PromptKey key = group_key(set, p, dimension);
    Group& group = groups[key.label];
    group.key = key.key;
    group.values.push_back(acc);
    ++agg.prompts_used;
  }
  if (!missing.empty()) {
    if (!options.allow_missing) {
      throw MissingRecords("no evaluation record for " +
                               std::to_string(missing.size()) + " of " +
                               std::to_string(set.prompts.size()) +
                               " prompts (first: " + missing.front() + ")",
                           missing);
    }
    agg.missing_skipped = missing.size();
  }

  for (auto& [label, group] : groups) {
    GroupedAccuracy out;
    out.key = group.key;
    out.label = label;
    out.prompts = group.values.size();
    double mean = 0.0;
    for (double v : group.values) {
      mean += v;
    }
    out.mean = mean / static_cast<double>(group.values.size());
    out.ci = group.values.size() > 1 ? ci95(group.values) : 0.0;
    agg.groups.push_back(std::move(out));
  }
  std::sort(agg.groups.begin(), agg.groups.end(),
            [](const GroupedAccuracy& a, const GroupedAccuracy& b) {
              if (a.key != b.key) {
                return a.key < b.key;
              }
              return a.label < b.label;
            });
  return agg;
}

}  // namespace keyret
