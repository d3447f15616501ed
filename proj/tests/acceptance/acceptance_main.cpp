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
//
// End-to-end acceptance checks. Each criterion prints exactly one PASS or
// FAIL line; the binary exits non-zero if any criterion fails. Unlike the
// unit tests these run the full pipeline at realistic sizes.

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "keyret/callgraph.hpp"
#include "keyret/errors.hpp"
#include "keyret/harness.hpp"
#include "keyret/metrics.hpp"
#include "keyret/oracle.hpp"
#include "keyret/promptset.hpp"
#include "keyret/rng.hpp"
#include "keyret/taskgen.hpp"
#include "keyret/tokenizer.hpp"
#include "keyret/util.hpp"

#include "../test_support.hpp"

using namespace keyret;
using keyret::test::TempDir;
using keyret::test::testdata_path;

namespace {

std::string corpus() { return keyret::test::corpus_path().string(); }

GenerationConfig suite_config(TaskVariant variant, std::uint32_t n_k,
                              std::uint32_t n_d, std::size_t n_t,
                              std::uint64_t n_p, std::uint64_t seed) {
  GenerationConfig cfg;
  cfg.variant = variant;
  cfg.n_k = n_k;
  cfg.n_d = n_d;
  cfg.n_t = n_t;
  cfg.n_p = n_p;
  cfg.seed = seed;
  cfg.corpus_path = corpus();
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Suites shared between the size-law and forward-reference criteria.
std::optional<PromptSet> g_two_step;
std::optional<PromptSet> g_three_step;

// ---------------------------------------------------------------------------
// 1. Suite size law: 20 keys at the stated position caps give exactly 6000
//    prompts per condition, generated within the time budget.

std::string check_suite_sizes() {
  struct Condition {
    TaskVariant variant;
    std::uint64_t n_p;
    std::uint64_t seed;
  };
  const Condition conditions[] = {
      {TaskVariant::TwoStep, 150, 101},
      {TaskVariant::ThreeStep, 50, 102},
      {TaskVariant::Concatenation, 50, 103},
  };
  for (const Condition& c : conditions) {
    const auto t0 = std::chrono::steady_clock::now();
    PromptSet set =
        generate_suite(suite_config(c.variant, 20, 5, 2048, c.n_p, c.seed));
    const double secs = seconds_since(t0);
    const std::string name(to_string(c.variant));
    if (secs >= 300.0) {
      return name + " generation took " + std::to_string(secs) + "s";
    }
    if (set.prompts.size() != 6000) {
      return name + " produced " + std::to_string(set.prompts.size()) +
             " prompts, wanted 6000";
    }
    std::map<std::string, std::size_t> per_key;
    std::map<std::string, std::set<std::uint64_t>> combos;
    for (const PromptInstance& p : set.prompts) {
      ++per_key[p.task_instance_id];
      combos[p.task_instance_id].insert(p.position_combo_id);
    }
    if (per_key.size() != 20) {
      return name + " has " + std::to_string(per_key.size()) + " keys";
    }
    for (const auto& [key, count] : per_key) {
      if (count != 300) {
        return name + " key " + key + " has " + std::to_string(count) +
               " prompts, wanted 300";
      }
      if (combos[key].size() != c.n_p) {
        return name + " key " + key + " has " +
               std::to_string(combos[key].size()) + " position combos";
      }
    }
    if (c.variant == TaskVariant::TwoStep) {
      g_two_step = std::move(set);
    } else if (c.variant == TaskVariant::ThreeStep) {
      g_three_step = std::move(set);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// 2. Replay validation: across variants, distractor counts and budgets the
//    independent replay finds zero mismatches.

std::string check_replay_validation() {
  const auto t0 = std::chrono::steady_clock::now();
  ByteChunkTokenizer tok(4);
  std::uint64_t seed = 200;
  std::size_t checked = 0;
  for (TaskVariant variant :
       {TaskVariant::OneStep, TaskVariant::TwoStep, TaskVariant::ThreeStep,
        TaskVariant::Concatenation}) {
    for (std::uint32_t n_d : {0u, 1u, 5u}) {
      for (std::size_t n_t : {std::size_t{2048}, std::size_t{4096},
                              std::size_t{8192}}) {
        PromptSet set =
            generate_suite(suite_config(variant, 5, n_d, n_t, 6, ++seed));
        SuiteValidation v = validate_suite(set, tok);
        if (!v.ok()) {
          const SuiteMismatch& m = v.mismatches.front();
          return std::string(to_string(variant)) + " n_d=" +
                 std::to_string(n_d) + " n_t=" + std::to_string(n_t) + ": " +
                 std::to_string(v.mismatches.size()) +
                 " mismatches (first: " + m.prompt_id + " " + m.field + ")";
        }
        checked += v.checked;
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 120.0) {
    return "validation sweep took " + std::to_string(secs) + "s";
  }
  if (checked == 0) {
    return "validation sweep checked nothing";
  }
  return {};
}

// ---------------------------------------------------------------------------
// 3. Forward-reference accounting, recounted from the prompt text alone.

std::size_t recount_forward_refs(const std::string& text) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::vector<std::string>> calls;
  std::string entry;
  std::string current;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("def ", 0) == 0) {
      current = line.substr(4, line.find('(') - 4);
      index[current] = order.size();
      order.push_back(current);
    } else if (line.rfind("    return ", 0) == 0 && !current.empty()) {
      for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        if (line[i] != '(' || line[i + 1] != ')') {
          continue;
        }
        std::size_t j = i;
        while (j > 0 && (std::isalnum(static_cast<unsigned char>(
                             line[j - 1])) != 0 ||
                         line[j - 1] == '_')) {
          --j;
        }
        if (j < i) {
          calls[current].push_back(line.substr(j, i - j));
        }
      }
    } else if (line.rfind("assert ", 0) == 0) {
      entry = line.substr(7, line.find('(') - 7);
    }
  }
  std::set<std::string> seen{entry};
  std::vector<std::string> queue{entry};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (const std::string& callee : calls[queue[qi]]) {
      if (index.count(callee) != 0 && seen.insert(callee).second) {
        queue.push_back(callee);
      }
    }
  }
  std::size_t refs = 0;
  for (const std::string& caller : queue) {
    for (const std::string& callee : calls[caller]) {
      if (index.count(callee) != 0 && index[callee] > index[caller]) {
        ++refs;
      }
    }
  }
  return refs;
}

std::string check_forward_refs() {
  if (!g_two_step || !g_three_step) {
    return "suite size criterion did not leave its suites behind";
  }
  std::map<std::size_t, std::size_t> two_hist;
  for (const PromptInstance& p : g_two_step->prompts) {
    if (recount_forward_refs(p.prompt_text) != p.n_forward_refs) {
      return "recount disagrees on " + p.prompt_id;
    }
    ++two_hist[p.n_forward_refs];
  }
  if (two_hist != std::map<std::size_t, std::size_t>{{0, 3000}, {1, 3000}}) {
    std::string got;
    for (const auto& [refs, n] : two_hist) {
      got += " " + std::to_string(refs) + ":" + std::to_string(n);
    }
    return "two_step histogram" + got + ", wanted 0:3000 1:3000";
  }

  std::map<std::size_t, std::size_t> three_hist;
  std::map<std::string, std::multiset<std::size_t>> per_combo;
  for (const PromptInstance& p : g_three_step->prompts) {
    if (recount_forward_refs(p.prompt_text) != p.n_forward_refs) {
      return "recount disagrees on " + p.prompt_id;
    }
    ++three_hist[p.n_forward_refs];
    per_combo[p.task_instance_id + "/" +
              std::to_string(p.position_combo_id)]
        .insert(p.n_forward_refs);
  }
  if (three_hist != std::map<std::size_t, std::size_t>{
                        {0, 1000}, {1, 4000}, {2, 1000}}) {
    std::string got;
    for (const auto& [refs, n] : three_hist) {
      got += " " + std::to_string(refs) + ":" + std::to_string(n);
    }
    return "three_step histogram" + got + ", wanted 0:1000 1:4000 2:1000";
  }
  const std::multiset<std::size_t> ladder{0, 1, 1, 1, 1, 2};
  for (const auto& [combo, refs] : per_combo) {
    if (refs != ladder) {
      return "combo " + combo + " does not cover the 0..2 ladder";
    }
  }
  g_two_step.reset();
  g_three_step.reset();
  return {};
}

// ---------------------------------------------------------------------------
// 4. Constrained decoding protocol: under the constraint only space-or-quote
//    openings are accepted, and after the quote anything goes. Over HTTP the
//    prompt instead gets exactly one opening quote appended.

std::string check_first_token_protocol() {
  PromptSet set =
      generate_suite(suite_config(TaskVariant::TwoStep, 2, 1, 512, 2, 104));
  if (set.prompts.size() != 8) {
    return "expected 8 prompts, got " + std::to_string(set.prompts.size());
  }
  BackendDescriptor desc;
  desc.kind = BackendKind::ScriptedLocal;
  desc.id = "local";
  if (!desc.supports_prefix_constraint()) {
    return "scripted backend should support the prefix constraint";
  }
  ScriptedLocalBackend backend(
      desc, {{"x", " ", "noise"}, {"bad", " \"ab"}, {"cd\" rest"}});
  SamplingConfig sampling;
  sampling.samples_per_prompt = 1;
  EvalOptions options;
  options.concurrency = 1;  // the decision log is single-threaded
  TempDir tmp;
  evaluate(set, backend, sampling, tmp.file("records.jsonl"), options);

  std::vector<EvalRecord> records = load_records(tmp.file("records.jsonl"));
  if (records.size() != 8) {
    return "wrong record count";
  }
  for (const EvalRecord& r : records) {
    if (!r.complete || r.extracted.size() != 1 ||
        !r.extracted[0].has_value() || *r.extracted[0] != "abcd") {
      return "prompt " + r.prompt_id + " did not extract the scripted answer";
    }
  }

  std::size_t accepted_constrained = 0;
  std::size_t rejected_constrained = 0;
  std::size_t unconstrained = 0;
  for (const TokenDecision& d : backend.decisions()) {
    if (!d.constrained) {
      ++unconstrained;
      if (!d.accepted) {
        return "token rejected after the constraint was released";
      }
      continue;
    }
    const std::size_t pos = d.candidate.find_first_not_of(' ');
    const bool quote_led = pos == std::string::npos ||
                           d.candidate[pos] == '"' || d.candidate[pos] == '\'';
    if (d.accepted != quote_led) {
      return "constrained decision on '" + d.candidate + "' went the wrong way";
    }
    ++(d.accepted ? accepted_constrained : rejected_constrained);
  }
  if (accepted_constrained != 16 || rejected_constrained != 16 ||
      unconstrained != 8) {
    return "decision log has unexpected shape: " +
           std::to_string(accepted_constrained) + "/" +
           std::to_string(rejected_constrained) + "/" +
           std::to_string(unconstrained);
  }

  BackendDescriptor http;
  http.kind = BackendKind::HttpCompletion;
  http.id = "remote";
  http.endpoint = "http://example.invalid";
  if (http.supports_prefix_constraint()) {
    return "http backend must not claim token-level control";
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string& text = set.prompts[i].prompt_text;
    const std::string prepared = prepare_prompt(text, http);
    if (prepared != text + "\"") {
      return "http prompt preparation did not append exactly one quote";
    }
    if (prepare_prompt(text, desc) != text) {
      return "local prompt preparation must leave the prompt alone";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// 5. Metric identities against independent references.

std::string check_metric_identities() {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    for (std::uint32_t c = 0; c <= n; ++c) {
      for (std::uint32_t k = 1; k <= n; ++k) {
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
        const double expected =
            static_cast<double>(hit) / static_cast<double>(total);
        if (std::abs(accuracy_at_k(n, c, k) - expected) >= 1e-12) {
          return "accuracy@" + std::to_string(k) + " off at n=" +
                 std::to_string(n) + " c=" + std::to_string(c);
        }
      }
    }
  }
  for (std::uint32_t n = 1; n <= 20; ++n) {
    for (std::uint32_t c = 0; c <= n; ++c) {
      if (accuracy_at_k(n, c, 1) !=
          static_cast<double>(c) / static_cast<double>(n)) {
        return "accuracy@1 is not plain accuracy at n=" + std::to_string(n);
      }
    }
  }
  if (std::abs(accuracy_at_k(10, 5, 3) - 11.0 / 12.0) >= 1e-12) {
    return "accuracy@3 for 5 of 10 is not 11/12";
  }

  SeededRng rng(2026);
  for (int trial = 0; trial < 10000; ++trial) {
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
    std::vector<std::vector<std::size_t>> d(
        a.size() + 1, std::vector<std::size_t>(b.size() + 1));
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
    if (levenshtein(a, b) != d[a.size()][b.size()]) {
      return "edit distance differs from the reference on '" + a + "' vs '" +
             b + "'";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// 6. Mock calibration: requested class rates show up in the classified
//    sample mix, with the expected edit-distance profile.

std::string check_mock_calibration() {
  PromptSet set = generate_suite(
      suite_config(TaskVariant::Concatenation, 12, 5, 2048, 7, 106));
  if (set.prompts.size() != 504) {
    return "expected 504 prompts, got " + std::to_string(set.prompts.size());
  }
  BackendDescriptor desc;
  desc.kind = BackendKind::OracleMock;
  desc.id = "mock";
  const MockRates rates{0.6, 0.2, 0.1};
  auto backend = make_oracle_mock(desc, 55, rates);
  SamplingConfig sampling;
  sampling.samples_per_prompt = 4;
  TempDir tmp;
  evaluate(set, *backend, sampling, tmp.file("records.jsonl"), {});
  std::vector<EvalRecord> records = load_records(tmp.file("records.jsonl"));

  FailureSummary sum = summarise_failures(set, records);
  const double n = static_cast<double>(sum.samples);
  if (sum.samples != set.prompts.size() * 4) {
    return "sample count off";
  }
  const auto freq_ok = [&](FailureClass cls, double p) {
    const auto it = sum.counts.find(cls);
    const double freq =
        it == sum.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    return std::abs(freq - p) <= 3.0 * std::sqrt(p * (1.0 - p) / n);
  };
  if (!freq_ok(FailureClass::Correct, 0.6)) {
    return "correct-class frequency outside 3 sigma";
  }
  if (!freq_ok(FailureClass::DistractorAnswer, 0.2)) {
    return "distractor-class frequency outside 3 sigma";
  }
  if (!freq_ok(FailureClass::PartialAnswer, 0.1)) {
    return "partial-class frequency outside 3 sigma";
  }
  if (!freq_ok(FailureClass::Other, 0.1)) {
    return "noise-class frequency outside 3 sigma";
  }
  if (sum.mean_edit_distance.at(FailureClass::Correct) != 0.0) {
    return "correct answers should have zero edit distance";
  }
  if (std::abs(sum.mean_edit_distance.at(FailureClass::PartialAnswer) -
               10.0) >= 1e-9) {
    return "single-operand answers should sit at distance 10";
  }
  const double noise_mean = sum.mean_edit_distance.at(FailureClass::Other);
  if (noise_mean < 18.0 || noise_mean > 22.0) {
    return "noise mean edit distance " + std::to_string(noise_mean) +
           " outside [18, 22]";
  }
  return {};
}

// ---------------------------------------------------------------------------
// 7. Annotation: byte-for-byte goldens plus graph invariance under every
//    comment configuration.

std::string graph_signature(const CallGraph& graph) {
  std::ostringstream out;
  for (const FunctionDef& def : graph.defs) {
    out << def.name << ';';
  }
  out << '|';
  for (const CallEdge& e : graph.edges) {
    out << e.caller << '>' << e.callee << '@' << e.callsite
        << (e.dangling ? "!" : "") << ';';
  }
  out << '|' << (graph.assert_name ? *graph.assert_name : "");
  return out.str();
}

std::string check_annotation_stability() {
  {
    const std::string src = read_file(testdata_path("threestep_src.txt"));
    CommentConfig cc;
    cc.direction = CommentDirection::Both;
    cc.wording = CommentTemplate::FullSentence;
    cc.depth = CommentDepth::FullGraph;
    std::string out = annotate(src, cc);
    const std::string cut =
        "# This function calls hjdnwl_724283\n"
        "# This function is called by oftoyy_286138\n"
        "def lhezee_508969():\n"
        "    return hjdnwl_724283()\n"
        "\n";
    const std::size_t pos = out.find(cut);
    if (pos == std::string::npos) {
      return "sentence annotation lost its reference block";
    }
    out.erase(pos, cut.size());
    if (out != read_file(testdata_path("threestep_sentence.golden"))) {
      return "sentence annotation drifted from the golden";
    }
  }
  {
    const std::string src =
        read_file(testdata_path("threestep_src_noassert.txt"));
    CommentConfig cc;
    cc.direction = CommentDirection::Both;
    cc.wording = CommentTemplate::NamesOnly;
    cc.depth = CommentDepth::FullGraph;
    std::string out = annotate(src, cc);
    const std::string cut =
        "# hjdnwl_724283\n"
        "# oftoyy_286138\n"
        "def lhezee_508969():\n"
        "    return hjdnwl_724283()\n"
        "\n";
    const std::size_t pos = out.find(cut);
    if (pos == std::string::npos) {
      return "name annotation lost its reference block";
    }
    out.erase(pos, cut.size());
    if (out != read_file(testdata_path("threestep_names.golden"))) {
      return "name annotation drifted from the golden";
    }
  }

  ByteChunkTokenizer tok(4);
  std::uint64_t seed = 107;
  for (TaskVariant variant : {TaskVariant::TwoStep, TaskVariant::ThreeStep}) {
    PromptSet set = generate_suite(suite_config(variant, 2, 1, 768, 2, seed++));
    for (CommentDirection dir :
         {CommentDirection::Calls, CommentDirection::CalledBy,
          CommentDirection::Both}) {
      for (CommentTemplate word :
           {CommentTemplate::NamesOnly, CommentTemplate::FullSentence}) {
        for (CommentDepth depth :
             {CommentDepth::NextHop, CommentDepth::FullGraph}) {
          CommentConfig cc;
          cc.direction = dir;
          cc.wording = word;
          cc.depth = depth;
          PromptSet annotated = annotate_suite(set, cc, tok);
          for (std::size_t i = 0; i < set.prompts.size(); ++i) {
            const std::string& before = set.prompts[i].prompt_text;
            const std::string& after = annotated.prompts[i].prompt_text;
            if (strip_annotations(after) != before) {
              return to_label(cc) + ": stripping does not undo annotation";
            }
            if (graph_signature(parse(before)) !=
                graph_signature(parse(after))) {
              return to_label(cc) + ": comments changed the call graph";
            }
            if (resolve(parse(after), annotated.prompts[i].key_name())
                    .answer != set.prompts[i].expected) {
              return to_label(cc) + ": comments changed the answer";
            }
          }
        }
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// 8. Determinism: identical bytes from identical configs, and an interrupted
//    evaluation resumed later equals the uninterrupted one.

std::string check_determinism_and_resume() {
  const GenerationConfig cfg =
      suite_config(TaskVariant::TwoStep, 3, 2, 1024, 4, 108);
  PromptSet a = generate_suite(cfg);
  PromptSet b = generate_suite(cfg);
  if (serialize_promptset(a) != serialize_promptset(b)) {
    return "two generation runs differ";
  }
  TempDir tmp;
  save_promptset(a, tmp.file("a.json"));
  save_promptset(b, tmp.file("b.json"));
  if (read_file(tmp.file("a.json")) != read_file(tmp.file("b.json"))) {
    return "saved suites are not byte-identical";
  }

  BackendDescriptor desc;
  desc.kind = BackendKind::OracleMock;
  desc.id = "mock";
  const MockRates rates{0.6, 0.2, 0.1};
  SamplingConfig sampling;
  sampling.samples_per_prompt = 4;

  auto full_backend = make_oracle_mock(desc, 66, rates);
  evaluate(a, *full_backend, sampling, tmp.file("full.jsonl"), {});

  auto first_half = make_oracle_mock(desc, 66, rates);
  EvalOptions interrupt;
  interrupt.stop_after = a.prompts.size() / 2;
  EvalOutcome part =
      evaluate(a, *first_half, sampling, tmp.file("resumed.jsonl"), interrupt);
  if (part.evaluated != a.prompts.size() / 2) {
    return "interruption did not stop at the requested point";
  }
  auto second_half = make_oracle_mock(desc, 66, rates);
  evaluate(a, *second_half, sampling, tmp.file("resumed.jsonl"), {});

  RecordsHeader full_header;
  RecordsHeader resumed_header;
  std::vector<EvalRecord> full = load_records(tmp.file("full.jsonl"),
                                              &full_header);
  std::vector<EvalRecord> resumed = load_records(tmp.file("resumed.jsonl"),
                                                 &resumed_header);
  if (full_header.promptset_hash != resumed_header.promptset_hash ||
      full_header.backend_id != resumed_header.backend_id) {
    return "headers diverged between the two runs";
  }
  if (full.size() != a.prompts.size() || resumed.size() != full.size()) {
    return "record counts diverged";
  }
  struct Outcome {
    std::vector<std::string> raw;
    std::vector<std::optional<std::string>> extracted;
    std::vector<bool> correct;
  };
  const auto index = [](const std::vector<EvalRecord>& records) {
    std::map<std::string, Outcome> out;
    for (const EvalRecord& r : records) {
      out[r.prompt_id] = {r.raw_samples, r.extracted, r.correct};
    }
    return out;
  };
  const auto full_map = index(full);
  const auto resumed_map = index(resumed);
  if (full_map.size() != resumed_map.size()) {
    return "prompt coverage diverged";
  }
  for (const auto& [id, outcome] : full_map) {
    const auto it = resumed_map.find(id);
    if (it == resumed_map.end()) {
      return "prompt " + id + " missing from the resumed run";
    }
    if (it->second.raw != outcome.raw ||
        it->second.extracted != outcome.extracted ||
        it->second.correct != outcome.correct) {
      return "prompt " + id + " differs between the two runs";
    }
  }
  return {};
}

struct Criterion {
  const char* name;
  std::string (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"suite size law", check_suite_sizes},
      {"cross-variant replay validation", check_replay_validation},
      {"forward-reference accounting", check_forward_refs},
      {"constrained first-token protocol", check_first_token_protocol},
      {"metric identities", check_metric_identities},
      {"mock failure-mix calibration", check_mock_calibration},
      {"annotation goldens and graph stability", check_annotation_stability},
      {"deterministic generation and resume", check_determinism_and_resume},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      err = c.run();
    } catch (const std::exception& e) {
      err = std::string("unhandled error: ") + e.what();
    }
    if (err.empty()) {
      std::printf("[%d/8] %s: PASS (%.1fs)\n", index, c.name,
                  seconds_since(t0));
    } else {
      std::printf("[%d/8] %s: FAIL: %s\n", index, c.name, err.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
