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

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "keyret/callgraph.hpp"
#include "keyret/errors.hpp"
#include "keyret/rng.hpp"
#include "keyret/taskgen.hpp"
#include "keyret/tokenizer.hpp"
#include "keyret/util.hpp"
#include "test_support.hpp"

using namespace keyret;
using keyret::test::TempDir;
using keyret::test::corpus_path;

namespace {

// Exhaustive reference: fraction of k-subsets of n samples that contain at
// least one of the first c.
double accuracy_by_enumeration(std::uint32_t n, std::uint32_t c,
                               std::uint32_t k) {
  std::uint64_t total = 0;
  std::uint64_t hit = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != k) {
      continue;
    }
    ++total;
    if ((mask & ((1u << c) - 1u)) != 0) {
      ++hit;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

// Textbook full-matrix edit distance, kept independent of the library.
std::size_t edit_distance_matrix(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) {
    d[i][0] = i;
  }
  for (std::size_t j = 0; j <= b.size(); ++j) {
    d[0][j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub =
          d[i - 1][j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

PromptSet evaluated_suite(std::vector<EvalRecord>* records,
                          std::uint32_t samples) {
  GenerationConfig cfg;
  cfg.variant = TaskVariant::TwoStep;
  cfg.n_k = 2;
  cfg.n_d = 1;
  cfg.n_t = 512;
  cfg.n_p = 2;
  cfg.seed = 51;
  cfg.corpus_path = corpus_path();
  PromptSet set = generate_suite(cfg);

  TempDir tmp;
  BackendDescriptor desc;
  desc.kind = BackendKind::OracleMock;
  desc.id = "mock";
  auto backend = make_oracle_mock(desc, 9, MockRates{1, 0, 0});
  SamplingConfig sampling;
  sampling.samples_per_prompt = samples;
  evaluate(set, *backend, sampling, tmp.file("r.jsonl"), {});
  *records = load_records(tmp.file("r.jsonl"));
  return set;
}

}  // namespace

TEST_CASE("accuracy_at_k matches subset enumeration") {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    for (std::uint32_t c = 0; c <= n; ++c) {
      for (std::uint32_t k = 1; k <= n; ++k) {
        CAPTURE(n);
        CAPTURE(c);
        CAPTURE(k);
        const double expected = accuracy_by_enumeration(n, c, k);
        CHECK(std::abs(accuracy_at_k(n, c, k) - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("accuracy_at_k closed-form corners") {
  // k = 1 is plain accuracy.
  for (std::uint32_t n = 1; n <= 20; ++n) {
    for (std::uint32_t c = 0; c <= n; ++c) {
      CHECK(accuracy_at_k(n, c, 1) ==
            static_cast<double>(c) / static_cast<double>(n));
    }
  }
  CHECK(std::abs(accuracy_at_k(10, 5, 3) - 11.0 / 12.0) < 1e-12);
  CHECK(accuracy_at_k(5, 3, 3) == 1.0);
  CHECK(accuracy_at_k(7, 0, 4) == 0.0);
  // Binomials overflow here; the product fallback stays exact.
  CHECK(std::abs(accuracy_at_k(10000, 1, 10) - 0.001) < 1e-12);

  CHECK_THROWS_AS(accuracy_at_k(5, 2, 0), DomainError);
  CHECK_THROWS_AS(accuracy_at_k(5, 2, 6), DomainError);
  CHECK_THROWS_AS(accuracy_at_k(5, 6, 1), DomainError);
  CHECK_THROWS_AS(accuracy_at_k(0, 0, 1), DomainError);
}

TEST_CASE("levenshtein against a full-matrix reference") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("flaw", "lawn") == 2);

  SeededRng rng(404);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string a;
    std::string b;
    const std::size_t la = rng.below(31);
    const std::size_t lb = rng.below(31);
    for (std::size_t i = 0; i < la; ++i) {
      a.push_back(static_cast<char>('a' + rng.below(4)));
    }
    for (std::size_t i = 0; i < lb; ++i) {
      b.push_back(static_cast<char>('a' + rng.below(4)));
    }
    CAPTURE(a);
    CAPTURE(b);
    CHECK(levenshtein(a, b) == edit_distance_matrix(a, b));
  }
}

TEST_CASE("ci95 frozen values") {
  const std::vector<double> pair = {0.0, 1.0};
  CHECK(ci95(pair) == doctest::Approx(0.98));

  std::vector<double> half(100, 0.0);
  std::fill(half.begin() + 50, half.end(), 1.0);
  const double expected = 1.96 * std::sqrt(25.0 / 99.0) / 10.0;
  CHECK(ci95(half) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ci95(half) == doctest::Approx(0.0984937).epsilon(1e-5));

  const std::vector<double> flat(4, 0.25);
  CHECK(ci95(flat) == 0.0);

  CHECK_THROWS_AS(ci95(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(ci95(std::vector<double>{0.5}), DomainError);
}

TEST_CASE("classify orders correct, distractor, partial, other") {
  PromptInstance p;
  p.expected = "aaaaabbbbb";
  p.distractor_answers = {"dddddddddd", "eeeeeeeeee"};
  p.operand_payloads = {"aaaaa", "bbbbb"};

  auto s = classify(std::string("aaaaabbbbb"), p);
  CHECK(s.cls == FailureClass::Correct);
  CHECK(s.edit_distance == 0);

  s = classify(std::string("dddddddddd"), p);
  CHECK(s.cls == FailureClass::DistractorAnswer);
  CHECK(s.edit_distance == 10);

  s = classify(std::string("aaaaa"), p);
  CHECK(s.cls == FailureClass::PartialAnswer);
  CHECK(s.edit_distance == 5);
  CHECK(classify(std::string("bbbbb"), p).cls == FailureClass::PartialAnswer);

  s = classify(std::string("zzzzz"), p);
  CHECK(s.cls == FailureClass::Other);

  s = classify(std::nullopt, p);
  CHECK(s.cls == FailureClass::Other);
  CHECK(s.edit_distance == 10);

  // The expected answer wins even if a distractor chain echoes it.
  PromptInstance echo = p;
  echo.distractor_answers.push_back(echo.expected);
  CHECK(classify(std::string("aaaaabbbbb"), echo).cls ==
        FailureClass::Correct);

  // A distractor match outranks an operand match.
  PromptInstance overlap = p;
  overlap.operand_payloads = {"dddddddddd", "bbbbb"};
  CHECK(classify(std::string("dddddddddd"), overlap).cls ==
        FailureClass::DistractorAnswer);

  // Matching both operands at once is not a single-operand answer.
  PromptInstance twin = p;
  twin.operand_payloads = {"aaaaa", "aaaaa"};
  CHECK(classify(std::string("aaaaa"), twin).cls == FailureClass::Other);

  CHECK(to_string(FailureClass::Correct) == "correct");
  CHECK(to_string(FailureClass::DistractorAnswer) == "distractor");
  CHECK(to_string(FailureClass::PartialAnswer) == "partial");
  CHECK(to_string(FailureClass::Other) == "other");
}

TEST_CASE("summarise_failures tallies per class") {
  PromptSet set;
  PromptInstance p1;
  p1.prompt_id = "a";
  p1.expected = "abcde";
  p1.distractor_answers = {"xxxxx"};
  PromptInstance p2;
  p2.prompt_id = "b";
  p2.expected = "vwxyz";
  set.prompts = {p1, p2};

  EvalRecord r1;
  r1.prompt_id = "a";
  r1.complete = true;
  r1.extracted = {std::string("abcde"), std::string("xxxxx"), std::nullopt};
  EvalRecord r2;
  r2.prompt_id = "b";
  r2.complete = false;  // skipped entirely
  r2.extracted = {std::string("vwxyz")};

  FailureSummary sum = summarise_failures(set, {r1, r2},
                                          ParallelMode::Serial);
  CHECK(sum.samples == 3);
  CHECK(sum.counts.at(FailureClass::Correct) == 1);
  CHECK(sum.counts.at(FailureClass::DistractorAnswer) == 1);
  CHECK(sum.counts.at(FailureClass::Other) == 1);
  CHECK(sum.counts.count(FailureClass::PartialAnswer) == 0);
  CHECK(sum.mean_edit_distance.at(FailureClass::Correct) == 0.0);
  CHECK(sum.mean_edit_distance.at(FailureClass::DistractorAnswer) ==
        doctest::Approx(5.0));
  CHECK(sum.mean_edit_distance.at(FailureClass::Other) ==
        doctest::Approx(5.0));
  CHECK(sum.incorrect_mean_edit_distance == doctest::Approx(5.0));

  EvalRecord stray = r1;
  stray.prompt_id = "nobody";
  CHECK_THROWS_AS(summarise_failures(set, {r1, stray}, ParallelMode::Serial),
                  MissingRecords);
}

TEST_CASE("dimension names round trip") {
  for (GroupDimension dim :
       {GroupDimension::Overall, GroupDimension::PositionBin,
        GroupDimension::PositionBinPair, GroupDimension::ForwardRefs,
        GroupDimension::SpreadBin, GroupDimension::SpreadForwardRefs,
        GroupDimension::Distractors, GroupDimension::ContextSize,
        GroupDimension::CommentConfig}) {
    CHECK(dimension_from_string(to_string(dim)) == dim);
  }
  CHECK(to_string(GroupDimension::PositionBinPair) == "matrix");
  CHECK(to_string(GroupDimension::SpreadForwardRefs) ==
        "spread-forward-refs");
  CHECK_THROWS_AS(dimension_from_string("sideways"), ConfigError);
}

TEST_CASE("aggregate groups a fully correct run") {
  std::vector<EvalRecord> records;
  PromptSet set = evaluated_suite(&records, 4);
  REQUIRE(set.prompts.size() == 8);
  REQUIRE(records.size() == 8);

  Aggregation overall = aggregate(set, records, GroupDimension::Overall);
  CHECK(overall.k == 1);
  CHECK(overall.prompts_used == 8);
  CHECK(overall.incomplete_excluded == 0);
  CHECK(overall.missing_skipped == 0);
  REQUIRE(overall.groups.size() == 1);
  CHECK(overall.groups[0].label == "all");
  CHECK(overall.groups[0].key.empty());
  CHECK(overall.groups[0].mean == doctest::Approx(1.0));
  CHECK(overall.groups[0].ci == 0.0);
  CHECK(overall.groups[0].prompts == 8);

  AggregateOptions at4;
  at4.k = 4;
  CHECK(aggregate(set, records, GroupDimension::Overall, at4)
            .groups[0]
            .mean == doctest::Approx(1.0));
  AggregateOptions at5;
  at5.k = 5;  // more than samples_per_prompt
  CHECK_THROWS_AS(aggregate(set, records, GroupDimension::Overall, at5),
                  DomainError);

  Aggregation refs = aggregate(set, records, GroupDimension::ForwardRefs);
  REQUIRE(refs.groups.size() == 2);
  CHECK(refs.groups[0].label == "0");
  CHECK(refs.groups[0].key == std::vector<long long>{0});
  CHECK(refs.groups[0].prompts == 4);
  CHECK(refs.groups[1].label == "1");
  CHECK(refs.groups[1].prompts == 4);

  Aggregation nd = aggregate(set, records, GroupDimension::Distractors);
  REQUIRE(nd.groups.size() == 1);
  CHECK(nd.groups[0].label == "1");
  Aggregation nt = aggregate(set, records, GroupDimension::ContextSize);
  REQUIRE(nt.groups.size() == 1);
  CHECK(nt.groups[0].label == "512");
  CHECK(nt.groups[0].key == std::vector<long long>{512});

  Aggregation plain = aggregate(set, records, GroupDimension::CommentConfig);
  REQUIRE(plain.groups.size() == 1);
  CHECK(plain.groups[0].label == "none");

  CommentConfig cc;
  cc.direction = CommentDirection::Calls;
  cc.wording = CommentTemplate::NamesOnly;
  cc.depth = CommentDepth::NextHop;
  ByteChunkTokenizer tok(4);
  PromptSet annotated = annotate_suite(set, cc, tok);
  Aggregation labelled =
      aggregate(annotated, records, GroupDimension::CommentConfig,
                AggregateOptions{1, true, ParallelMode::Serial});
  REQUIRE(labelled.groups.size() == 1);
  CHECK(labelled.groups[0].label == "calls/names/next");

  Aggregation matrix = aggregate(set, records, GroupDimension::PositionBinPair);
  std::size_t matrix_prompts = 0;
  for (const GroupedAccuracy& g : matrix.groups) {
    REQUIRE(g.key.size() == 2);
    CHECK(g.label ==
          std::to_string(g.key[0]) + "," + std::to_string(g.key[1]));
    matrix_prompts += g.prompts;
  }
  CHECK(matrix_prompts == 8);

  Aggregation spread = aggregate(set, records, GroupDimension::SpreadBin);
  std::size_t spread_prompts = 0;
  for (const GroupedAccuracy& g : spread.groups) {
    REQUIRE(g.key.size() == 1);
    CHECK(g.key[0] >= 0);
    CHECK(g.key[0] <= 19);
    spread_prompts += g.prompts;
  }
  CHECK(spread_prompts == 8);

  Aggregation sf = aggregate(set, records, GroupDimension::SpreadForwardRefs);
  for (const GroupedAccuracy& g : sf.groups) {
    REQUIRE(g.key.size() == 2);
    CHECK((g.key[0] == 0 || g.key[0] == 1));
  }
}

TEST_CASE("aggregate surfaces gaps in the record file") {
  std::vector<EvalRecord> records;
  PromptSet set = evaluated_suite(&records, 4);

  std::vector<EvalRecord> dropped(records.begin() + 1, records.end());
  CHECK_THROWS_AS(aggregate(set, dropped, GroupDimension::Overall),
                  MissingRecords);
  try {
    aggregate(set, dropped, GroupDimension::Overall);
  } catch (const MissingRecords& e) {
    CHECK(e.ids().size() == 1);
    CHECK(e.ids()[0] == records[0].prompt_id);
  }

  AggregateOptions lax;
  lax.allow_missing = true;
  Aggregation agg = aggregate(set, dropped, GroupDimension::Overall, lax);
  CHECK(agg.missing_skipped == 1);
  CHECK(agg.prompts_used == 7);
  CHECK(agg.groups[0].prompts == 7);

  // An incomplete record excludes the prompt without counting as missing.
  std::vector<EvalRecord> stalled = records;
  stalled[2].complete = false;
  Aggregation part = aggregate(set, stalled, GroupDimension::Overall);
  CHECK(part.incomplete_excluded == 1);
  CHECK(part.prompts_used == 7);

  // When a prompt appears twice the later record replaces the earlier one.
  std::vector<EvalRecord> doubled = records;
  EvalRecord redo = records[0];
  std::fill(redo.correct.begin(), redo.correct.end(), false);
  doubled.push_back(redo);
  Aggregation last = aggregate(set, doubled, GroupDimension::Overall);
  CHECK(last.prompts_used == 8);
  CHECK(last.groups[0].mean == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("the position matrix needs a two-function chain") {
  GenerationConfig cfg;
  cfg.variant = TaskVariant::OneStep;
  cfg.n_k = 1;
  cfg.n_d = 0;
  cfg.n_t = 384;
  cfg.n_p = 2;
  cfg.seed = 52;
  cfg.corpus_path = corpus_path();
  PromptSet set = generate_suite(cfg);

  TempDir tmp;
  BackendDescriptor desc;
  desc.kind = BackendKind::OracleMock;
  desc.id = "mock";
  auto backend = make_oracle_mock(desc, 9, MockRates{1, 0, 0});
  SamplingConfig sampling;
  sampling.samples_per_prompt = 2;
  evaluate(set, *backend, sampling, tmp.file("r.jsonl"), {});
  std::vector<EvalRecord> records = load_records(tmp.file("r.jsonl"));

  CHECK_THROWS_AS(aggregate(set, records, GroupDimension::PositionBinPair),
                  ShapeMismatch);
  // Single-position dimensions still work.
  CHECK(aggregate(set, records, GroupDimension::PositionBin).prompts_used ==
        set.prompts.size());
}
