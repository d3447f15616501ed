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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "keyret/corpus.hpp"
#include "keyret/errors.hpp"
#include "keyret/harness.hpp"
#include "keyret/metrics.hpp"
#include "keyret/oracle.hpp"
#include "keyret/promptset.hpp"
#include "keyret/report.hpp"
#include "keyret/taskgen.hpp"
#include "keyret/util.hpp"
#include "keyret/version.hpp"

namespace {

using namespace keyret;

ParallelMode mode_from_flag(bool serial) {
  return serial ? ParallelMode::Serial : default_parallel_mode();
}

int cmd_generate(const GenerationConfig& config, std::uint64_t n_p_flag,
                 const std::string& out) {
  GenerationConfig cfg = config;
  if (n_p_flag > 0) {
    cfg.n_p = n_p_flag;
  }
  CorpusStats stats;
  auto tokenizer = make_tokenizer(cfg.tokenizer_spec);
  std::vector<FillerFunction> pool =
      load_corpus(cfg.corpus_path, *tokenizer, &stats);
  for (const std::string& warning : stats.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  PromptSet set = generate_suite(cfg, pool, *tokenizer,
                                 file_fingerprint(cfg.corpus_path));
  save_promptset(set, out);
  std::cout << "wrote " << set.prompts.size() << " prompts ("
            << stats.loaded << " corpus functions, " << stats.dropped
            << " dropped) to " << out << "\n";
  return 0;
}

int cmd_annotate(const std::string& in, const std::string& direction,
                 const std::string& wording, const std::string& depth,
                 bool serial, const std::string& out) {
  PromptSet set = load_promptset(in);
  CommentConfig config;
  if (direction == "calls") {
    config.direction = CommentDirection::Calls;
  } else if (direction == "called-by") {
    config.direction = CommentDirection::CalledBy;
  } else if (direction == "both") {
    config.direction = CommentDirection::Both;
  } else {
    throw ConfigError("unknown direction: " + direction);
  }
  config.wording = wording == "sentence" ? CommentTemplate::FullSentence
                                         : CommentTemplate::NamesOnly;
  if (wording != "sentence" && wording != "names") {
    throw ConfigError("unknown template: " + wording);
  }
  config.depth = depth == "full" ? CommentDepth::FullGraph
                                 : CommentDepth::NextHop;
  if (depth != "full" && depth != "next") {
    throw ConfigError("unknown depth: " + depth);
  }
  auto tokenizer = make_tokenizer(set.header.config.tokenizer_spec);
  PromptSet annotated =
      annotate_suite(set, config, *tokenizer, mode_from_flag(serial));
  save_promptset(annotated, out);
  std::cout << "annotated " << annotated.prompts.size() << " prompts ("
            << to_label(config) << ") to " << out << "\n";
  return 0;
}

int cmd_validate(const std::string& in, bool serial) {
  PromptSet set = load_promptset(in);
  auto tokenizer = make_tokenizer(set.header.config.tokenizer_spec);
  SuiteValidation result =
      validate_suite(set, *tokenizer, mode_from_flag(serial));
  std::cout << "checked " << result.checked << " prompts, "
            << result.mismatches.size() << " mismatches\n";
  for (std::size_t i = 0; i < result.mismatches.size() && i < 20; ++i) {
    const SuiteMismatch& m = result.mismatches[i];
    std::cout << "  " << m.prompt_id << " [" << m.field << "] expected "
              << m.expected << ", got " << m.got << "\n";
  }
  if (result.mismatches.size() > 20) {
    std::cout << "  ... and " << result.mismatches.size() - 20 << " more\n";
  }
  return result.ok() ? 0 : 1;
}

int cmd_eval(const std::string& in, const std::string& backend_name,
             const std::string& endpoint, const std::string& model,
             const std::string& backend_id, SamplingConfig sampling,
             std::uint64_t seed, const MockRates& rates,
             std::size_t concurrency, const std::string& out) {
  PromptSet set = load_promptset(in);
  BackendDescriptor desc;
  if (backend_name == "mock") {
    desc.kind = BackendKind::OracleMock;
    desc.id = backend_id.empty() ? "mock" : backend_id;
  } else if (backend_name == "local") {
    desc.kind = BackendKind::ScriptedLocal;
    desc.id = backend_id.empty() ? "local" : backend_id;
    desc.endpoint = endpoint;
    if (endpoint.empty()) {
      throw ConfigError("--endpoint (script file) is required for local");
    }
  } else if (backend_name == "http") {
    desc.kind = BackendKind::HttpCompletion;
    desc.id = backend_id.empty() ? (model.empty() ? "http" : model)
                                 : backend_id;
    desc.endpoint = endpoint;
    desc.model = model;
    if (endpoint.empty()) {
      throw ConfigError("--endpoint is required for http");
    }
  } else {
    throw ConfigError("unknown backend: " + backend_name);
  }
  auto backend = make_backend(desc, seed, rates);
  EvalOptions options;
  options.concurrency = concurrency;
  EvalOutcome outcome = evaluate(set, *backend, sampling, out, options);
  std::cout << "evaluated " << outcome.evaluated << " prompts ("
            << outcome.skipped_existing << " already done, "
            << outcome.incomplete << " incomplete) into " << out << "\n";
  return 0;
}

int cmd_analyze(const std::string& records_path, const std::string& set_path,
                std::uint32_t k, const std::string& group, bool allow_missing,
                bool serial, const std::string& out) {
  PromptSet set = load_promptset(set_path);
  RecordsHeader header;
  std::vector<EvalRecord> records = load_records(records_path, &header);
  const std::string set_hash = text_fingerprint(serialize_promptset(set));
  if (header.promptset_hash != set_hash) {
    throw ConfigError("records were produced from a different prompt set (" +
                      header.promptset_hash + " vs " + set_hash + ")");
  }
  AggregateOptions options;
  options.k = k;
  options.allow_missing = allow_missing;
  options.mode = mode_from_flag(serial);
  AnalysisDoc doc;
  doc.backend_id = header.backend_id;
  doc.variant = std::string(to_string(set.header.config.variant));
  doc.n_t = set.header.config.n_t;
  doc.n_d = set.header.config.n_d;
  doc.annotation = set.header.annotation ? to_label(*set.header.annotation)
                                         : "none";
  doc.promptset_hash = set_hash;
  doc.accuracy = aggregate(set, records, dimension_from_string(group),
                           options);
  doc.failures = summarise_failures(set, records, options.mode);
  save_analysis(doc, out);
  std::cout << "aggregated " << doc.accuracy.prompts_used << " prompts into "
            << doc.accuracy.groups.size() << " groups ("
            << doc.accuracy.incomplete_excluded << " incomplete excluded, "
            << doc.accuracy.missing_skipped << " missing skipped) to " << out
            << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& analysis_paths,
               const std::string& format, const std::string& plot,
               const std::string& out_dir) {
  std::vector<AnalysisDoc> docs;
  for (const std::string& path : analysis_paths) {
    docs.push_back(load_analysis(path));
  }
  std::filesystem::create_directories(out_dir);
  if (format == "csv") {
    const std::filesystem::path out =
        std::filesystem::path(out_dir) / "table.csv";
    write_file(out, emit_table(docs));
    std::cout << "wrote " << out.string() << "\n";
    return 0;
  }
  if (format == "plotspec") {
    PlotKind kind = PlotKind::Auto;
    if (plot == "line") {
      kind = PlotKind::Line;
    } else if (plot == "heatmap") {
      kind = PlotKind::Heatmap;
    } else if (plot == "facets") {
      kind = PlotKind::FacetedLine;
    } else if (plot == "bar") {
      kind = PlotKind::Bar;
    } else if (plot != "auto") {
      throw ConfigError("unknown plot kind: " + plot);
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const std::filesystem::path out =
          std::filesystem::path(out_dir) /
          (std::filesystem::path(analysis_paths[i]).stem().string() +
           ".vl.json");
      write_file(out, emit_plotspec(docs[i], kind).dump(2) + "\n");
      std::cout << "wrote " << out.string() << "\n";
    }
    return 0;
  }
  throw ConfigError("unknown format: " + format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"key-retrieval long-context task toolkit"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "build a prompt set");
  std::string g_variant = "two_step";
  GenerationConfig g_cfg;
  std::uint64_t g_np = 0;
  std::string g_corpus;
  std::string g_out = "promptset.jsonl";
  gen->add_option("--variant", g_variant,
                  "one_step|two_step|three_step|concatenation");
  gen->add_option("--n-k", g_cfg.n_k, "key functions");
  gen->add_option("--n-d", g_cfg.n_d, "distractor chains per prompt");
  gen->add_option("--n-t", g_cfg.n_t, "token budget per prompt");
  gen->add_option("--n-p", g_np,
                  "position combinations per key (0 = all of them)");
  gen->add_option("--seed", g_cfg.seed, "generation seed");
  gen->add_option("--corpus", g_corpus, "filler corpus JSONL")->required();
  gen->add_option("--tokenizer", g_cfg.tokenizer_spec,
                  "byte4 (default) or a vocabulary JSON file");
  gen->add_option("--out", g_out, "output prompt-set JSONL");

  // annotate
  auto* ann = app.add_subcommand("annotate",
                                 "insert call-relation comments");
  std::string a_in;
  std::string a_dir = "calls";
  std::string a_tpl = "names";
  std::string a_depth = "next";
  std::string a_out = "annotated.jsonl";
  bool a_serial = false;
  ann->add_option("--in", a_in, "prompt-set JSONL")->required();
  ann->add_option("--direction", a_dir, "calls|called-by|both");
  ann->add_option("--template", a_tpl, "names|sentence");
  ann->add_option("--depth", a_depth, "next|full");
  ann->add_flag("--serial", a_serial, "single-threaded reference mode");
  ann->add_option("--out", a_out, "output prompt-set JSONL");

  // validate
  auto* val = app.add_subcommand("validate",
                                 "recheck every stored prompt field");
  std::string v_in;
  bool v_serial = false;
  val->add_option("--in", v_in, "prompt-set JSONL")->required();
  val->add_flag("--serial", v_serial, "single-threaded reference mode");

  // eval
  auto* ev = app.add_subcommand("eval", "run prompts through a backend");
  std::string e_in;
  std::string e_backend = "mock";
  std::string e_endpoint;
  std::string e_model;
  std::string e_backend_id;
  std::string e_out = "records.jsonl";
  SamplingConfig e_sampling;
  std::uint64_t e_seed = 0;
  MockRates e_rates;
  std::size_t e_concurrency = 4;
  ev->add_option("--in", e_in, "prompt-set JSONL")->required();
  ev->add_option("--backend", e_backend, "mock|local|http");
  ev->add_option("--endpoint", e_endpoint,
                 "http base URL, or script JSON for local");
  ev->add_option("--model", e_model, "model name for http backends");
  ev->add_option("--backend-id", e_backend_id,
                 "identifier recorded with every record");
  ev->add_option("--samples", e_sampling.samples_per_prompt,
                 "samples per prompt");
  ev->add_option("--temperature", e_sampling.temperature, "temperature");
  ev->add_option("--top-p", e_sampling.top_p, "nucleus mass");
  ev->add_option("--top-k", e_sampling.top_k, "top-k cutoff (0 = off)");
  ev->add_option("--max-new-tokens", e_sampling.max_new_tokens,
                 "completion length cap");
  ev->add_option("--seed", e_seed, "sampling seed (mock backend)");
  ev->add_option("--mock-correct", e_rates.correct, "mock correct rate");
  ev->add_option("--mock-distractor", e_rates.distractor,
                 "mock distractor-answer rate");
  ev->add_option("--mock-partial", e_rates.partial, "mock partial rate");
  ev->add_option("--concurrency", e_concurrency, "in-flight prompts");
  ev->add_option("--out", e_out, "records JSONL (appended, resumable)");

  // analyze
  auto* an = app.add_subcommand("analyze", "group accuracy over records");
  std::string n_records;
  std::string n_set;
  std::uint32_t n_k_at = 1;
  std::string n_group = "position";
  bool n_allow_missing = false;
  bool n_serial = false;
  std::string n_out = "analysis.json";
  an->add_option("--records", n_records, "records JSONL")->required();
  an->add_option("--promptset", n_set, "prompt-set JSONL")->required();
  an->add_option("--k", n_k_at, "k for accuracy@k");
  an->add_option("--group", n_group,
                 "overall|position|matrix|forward-refs|spread|"
                 "spread-forward-refs|distractors|context-size|comment-config");
  an->add_flag("--allow-missing", n_allow_missing,
               "skip prompts without records instead of failing");
  an->add_flag("--serial", n_serial, "single-threaded reference mode");
  an->add_option("--out", n_out, "analysis JSON");

  // report
  auto* rep = app.add_subcommand("report", "emit tables and chart specs");
  std::vector<std::string> r_analysis;
  std::string r_format = "csv";
  std::string r_plot = "auto";
  std::string r_out = "report";
  rep->add_option("--analysis", r_analysis, "analysis JSON files")
      ->required()
      ->expected(-1);
  rep->add_option("--format", r_format, "csv|plotspec");
  rep->add_option("--plot", r_plot, "auto|line|heatmap|facets|bar");
  rep->add_option("--out", r_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      g_cfg.variant = variant_from_string(g_variant);
      g_cfg.corpus_path = g_corpus;
      return cmd_generate(g_cfg, g_np, g_out);
    }
    if (ann->parsed()) {
      return cmd_annotate(a_in, a_dir, a_tpl, a_depth, a_serial, a_out);
    }
    if (val->parsed()) {
      return cmd_validate(v_in, v_serial);
    }
    if (ev->parsed()) {
      return cmd_eval(e_in, e_backend, e_endpoint, e_model, e_backend_id,
                      e_sampling, e_seed, e_rates, e_concurrency, e_out);
    }
    if (an->parsed()) {
      return cmd_analyze(n_records, n_set, n_k_at, n_group, n_allow_missing,
                         n_serial, n_out);
    }
    if (rep->parsed()) {
      return cmd_report(r_analysis, r_format, r_plot, r_out);
    }
  } catch (const keyret::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
