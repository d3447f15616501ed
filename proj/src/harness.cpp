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

#include "keyret/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "keyret/callgraph.hpp"
#include "keyret/errors.hpp"
#include "keyret/oracle.hpp"
#include "keyret/util.hpp"

namespace keyret {

using nlohmann::json;

void SamplingConfig::validate() const {
  if (temperature < 0.0 || temperature > 2.0) {
    throw ConfigError("temperature must be in [0, 2]");
  }
  if (top_p <= 0.0 || top_p > 1.0) {
    throw ConfigError("top_p must be in (0, 1]");
  }
  if (samples_per_prompt == 0) {
    throw ConfigError("samples_per_prompt must be positive");
  }
  if (max_new_tokens == 0) {
    throw ConfigError("max_new_tokens must be positive");
  }
}

void MockRates::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(correct) || !in_unit(distractor) || !in_unit(partial) ||
      correct + distractor + partial > 1.0 + 1e-12) {
    throw ConfigError("mock rates must be nonnegative and sum to at most 1");
  }
}

bool PrefixConstraint::allows(std::string_view token) const {
  if (released_) {
    return true;
  }
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == '"' || token[i] == '\'') {
      return true;  // quote reached; the rest belongs to the literal
    }
    if (token[i] != ' ') {
      return false;
    }
  }
  return true;  // all spaces keeps the prefix open
}

void PrefixConstraint::observe(std::string_view token) {
  if (released_) {
    return;
  }
  if (!allows(token)) {
    throw ConstraintUnsupported("observed a token the constraint rejects");
  }
  for (char c : token) {
    if (c == '"' || c == '\'') {
      released_ = true;
      return;
    }
  }
}

PrefixConstraint constrain_prefix(const Backend& backend) {
  if (!backend.descriptor().supports_prefix_constraint()) {
    throw ConstraintUnsupported("backend " + backend.descriptor().id +
                                " cannot filter tokens");
  }
  return PrefixConstraint{};
}

std::string prepare_prompt(std::string_view prompt_text,
                           const BackendDescriptor& descriptor) {
  std::string out(prompt_text);
  if (!descriptor.supports_prefix_constraint()) {
    out += '"';
  }
  return out;
}

std::optional<std::string> extract_answer(std::string_view raw,
                                          bool prefixed_quote) {
  std::size_t i = 0;
  char quote = '"';
  if (!prefixed_quote) {
    while (i < raw.size() && raw[i] == ' ') {
      ++i;
    }
    if (i >= raw.size() || (raw[i] != '"' && raw[i] != '\'')) {
      return std::nullopt;
    }
    quote = raw[i++];
  }
  std::string content;
  while (i < raw.size()) {
    if (raw[i] == quote) {
      return content;
    }
    if (raw[i] == '\\' && i + 1 < raw.size()) {
      ++i;
    }
    content += raw[i++];
  }
  return std::nullopt;  // literal never closed
}

std::uint32_t EvalRecord::correct_count() const {
  return static_cast<std::uint32_t>(
      std::count(correct.begin(), correct.end(), true));
}

namespace {

class OracleMockBackend final : public Backend {
 public:
  OracleMockBackend(BackendDescriptor descriptor, std::uint64_t seed,
                    MockRates rates)
      : descriptor_(std::move(descriptor)), base_(seed), rates_(rates) {
    rates_.validate();
  }

  const BackendDescriptor& descriptor() const override { return descriptor_; }

  std::vector<std::string> complete(const PromptInstance& prompt,
                                    std::string_view final_prompt,
                                    const SamplingConfig& sampling) override {
    (void)final_prompt;
    const CallGraph graph = parse(prompt.prompt_text);
    if (!graph.assert_name) {
      throw UnknownTaskName("prompt has no assert stem: " + prompt.prompt_id);
    }
    const std::string expected = resolve(graph, *graph.assert_name).answer;
    const std::vector<std::string> wrong =
        distractor_answers(graph, *graph.assert_name);
    std::vector<std::string> operands;
    {
      std::vector<const CallEdge*> calls;
      for (const CallEdge& e : graph.edges) {
        if (e.caller == *graph.assert_name && !e.dangling) {
          calls.push_back(&e);
        }
      }
      std::sort(calls.begin(), calls.end(),
                [](const CallEdge* a, const CallEdge* b) {
                  return a->callsite < b->callsite;
                });
      if (calls.size() == 2) {
        for (const CallEdge* e : calls) {
          operands.push_back(resolve(graph, e->callee).answer);
        }
      }
    }

    std::vector<std::string> out;
    out.reserve(sampling.samples_per_prompt);
    for (std::uint32_t i = 0; i < sampling.samples_per_prompt; ++i) {
      // Keyed by (seed, prompt, sample) so a resumed or reordered run
      // produces the same sample.
      SeededRng rng =
          base_.derive(fnv1a64(prompt.prompt_id) ^ stream::kMock, i);
      const double u = rng.unit();
      std::string answer;
      if (u < rates_.correct) {
        answer = expected;
      } else if (u < rates_.correct + rates_.distractor && !wrong.empty()) {
        answer = wrong[rng.index(wrong.size())];
      } else if (u < rates_.correct + rates_.distractor + rates_.partial &&
                 operands.size() == 2) {
        answer = operands[rng.index(2)];
      } else {
        do {
          answer.clear();
          for (std::size_t c = 0; c < expected.size(); ++c) {
            answer += static_cast<char>('a' + rng.index(26));
          }
        } while (answer == expected);
      }
      out.push_back(" \"" + answer + "\"");
    }
    return out;
  }

 private:
  BackendDescriptor descriptor_;
  SeededRng base_;
  MockRates rates_;
};

}  // namespace

std::unique_ptr<Backend> make_oracle_mock(const BackendDescriptor& descriptor,
                                          std::uint64_t seed,
                                          const MockRates& rates) {
  return std::make_unique<OracleMockBackend>(descriptor, seed, rates);
}

ScriptedLocalBackend::ScriptedLocalBackend(
    BackendDescriptor descriptor, std::vector<std::vector<std::string>> steps)
    : descriptor_(std::move(descriptor)), steps_(std::move(steps)) {
  if (descriptor_.kind != BackendKind::ScriptedLocal) {
    throw ConfigError("descriptor kind must be ScriptedLocal");
  }
}

std::vector<std::string> ScriptedLocalBackend::complete(
    const PromptInstance& prompt, std::string_view final_prompt,
    const SamplingConfig& sampling) {
  (void)prompt;
  (void)final_prompt;
  PrefixConstraint constraint = constrain_prefix(*this);
  std::string text;
  std::size_t emitted = 0;
  for (const std::vector<std::string>& candidates : steps_) {
    if (emitted >= sampling.max_new_tokens) {
      break;
    }
    const std::string* chosen = nullptr;
    for (const std::string& cand : candidates) {
      const bool ok = constraint.allows(cand);
      decisions_.push_back({cand, ok, !constraint.released()});
      if (ok) {
        chosen = &cand;
        break;
      }
    }
    if (!chosen) {
      break;  // every candidate rejected; generation stalls
    }
    constraint.observe(*chosen);
    text += *chosen;
    ++emitted;
  }
  return std::vector<std::string>(sampling.samples_per_prompt, text);
}

namespace {

class HttpCompletionBackend final : public Backend {
 public:
  explicit HttpCompletionBackend(BackendDescriptor descriptor)
      : descriptor_(std::move(descriptor)) {
    const std::string& url = descriptor_.endpoint;
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
      throw ConfigError("endpoint must be an http(s) URL: " + url);
    }
    std::size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) {
      base_ = url;
    } else {
      base_ = url.substr(0, path);
      path_prefix_ = url.substr(path);
      while (!path_prefix_.empty() && path_prefix_.back() == '/') {
        path_prefix_.pop_back();
      }
    }
    // A full completions path may be given outright; otherwise the standard
    // one is appended.
    if (path_prefix_.find("completions") == std::string::npos) {
      path_prefix_ += "/v1/completions";
    }
  }

  const BackendDescriptor& descriptor() const override { return descriptor_; }

  std::vector<std::string> complete(const PromptInstance& prompt,
                                    std::string_view final_prompt,
                                    const SamplingConfig& sampling) override {
    (void)prompt;
    json body;
    body["model"] = descriptor_.model;
    body["prompt"] = std::string(final_prompt);
    body["temperature"] = sampling.temperature;
    body["top_p"] = sampling.top_p;
    if (sampling.top_k > 0) {
      body["top_k"] = sampling.top_k;
    }
    body["n"] = sampling.samples_per_prompt;
    body["max_tokens"] = sampling.max_new_tokens;
    for (const auto& [key, value] : descriptor_.extra_options) {
      json parsed = json::parse(value, nullptr, false);
      body[key] = parsed.is_discarded() ? json(value) : parsed;
    }

    httplib::Client client(base_);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(descriptor_.api_key_env.c_str());
        key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    httplib::Result res =
        client.Post(path_prefix_, headers, body.dump(), "application/json");
    if (!res) {
      throw TransientBackendError("no response from " + base_ + ": " +
                                  httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
      throw TransientBackendError("backend returned status " +
                                  std::to_string(res->status));
    }
    if (res->status < 200 || res->status >= 300) {
      throw BackendUnavailable("backend rejected the request with status " +
                               std::to_string(res->status) + ": " + res->body);
    }
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") ||
        !doc["choices"].is_array() || doc["choices"].empty()) {
      throw BackendUnavailable("malformed completion response");
    }
    std::vector<std::string> out;
    for (const auto& choice : doc["choices"]) {
      if (!choice.contains("text") || !choice["text"].is_string()) {
        throw BackendUnavailable("completion choice without text");
      }
      out.push_back(choice["text"].get<std::string>());
    }
    if (out.size() != sampling.samples_per_prompt) {
      throw BackendUnavailable(
          "expected " + std::to_string(sampling.samples_per_prompt) +
          " choices, got " + std::to_string(out.size()));
    }
    return out;
  }

 private:
  BackendDescriptor descriptor_;
  std::string base_;
  std::string path_prefix_;
};

std::vector<std::vector<std::string>> load_script(
    const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("bad script file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw ConfigError("script file needs a 'steps' array: " + path.string());
  }
  std::vector<std::vector<std::string>> steps;
  for (const auto& step : doc["steps"]) {
    steps.push_back(step.get<std::vector<std::string>>());
  }
  return steps;
}

}  // namespace

std::unique_ptr<Backend> make_http_backend(
    const BackendDescriptor& descriptor) {
  return std::make_unique<HttpCompletionBackend>(descriptor);
}

std::unique_ptr<Backend> make_backend(const BackendDescriptor& descriptor,
                                      std::uint64_t seed,
                                      const MockRates& rates) {
  switch (descriptor.kind) {
    case BackendKind::OracleMock:
      return make_oracle_mock(descriptor, seed, rates);
    case BackendKind::ScriptedLocal:
      return std::make_unique<ScriptedLocalBackend>(
          descriptor, load_script(descriptor.endpoint));
    case BackendKind::HttpCompletion:
      return make_http_backend(descriptor);
  }
  throw ConfigError("unknown backend kind");
}

namespace {

json sampling_to_json(const SamplingConfig& s) {
  json j;
  j["temperature"] = s.temperature;
  j["top_p"] = s.top_p;
  j["top_k"] = s.top_k;
  j["samples_per_prompt"] = s.samples_per_prompt;
  j["max_new_tokens"] = s.max_new_tokens;
  return j;
}

SamplingConfig sampling_from_json(const json& j) {
  SamplingConfig s;
  s.temperature = j.at("temperature").get<double>();
  s.top_p = j.at("top_p").get<double>();
  s.top_k = j.at("top_k").get<std::uint32_t>();
  s.samples_per_prompt = j.at("samples_per_prompt").get<std::uint32_t>();
  s.max_new_tokens = j.at("max_new_tokens").get<std::uint32_t>();
  return s;
}

json record_to_json(const EvalRecord& r) {
  json j;
  j["prompt_id"] = r.prompt_id;
  j["raw_samples"] = r.raw_samples;
  json extracted = json::array();
  for (const auto& e : r.extracted) {
    if (e) {
      extracted.push_back(*e);
    } else {
      extracted.push_back(nullptr);
    }
  }
  j["extracted"] = std::move(extracted);
  j["correct"] = r.correct;
  j["started_at_ms"] = r.started_at_ms;
  j["finished_at_ms"] = r.finished_at_ms;
  j["backend_id"] = r.backend_id;
  j["complete"] = r.complete;
  return j;
}

EvalRecord record_from_json(const json& j) {
  EvalRecord r;
  r.prompt_id = j.at("prompt_id").get<std::string>();
  r.raw_samples = j.at("raw_samples").get<std::vector<std::string>>();
  for (const auto& e : j.at("extracted")) {
    if (e.is_null()) {
      r.extracted.push_back(std::nullopt);
    } else {
      r.extracted.push_back(e.get<std::string>());
    }
  }
  r.correct = j.at("correct").get<std::vector<bool>>();
  r.started_at_ms = j.at("started_at_ms").get<std::int64_t>();
  r.finished_at_ms = j.at("finished_at_ms").get<std::int64_t>();
  r.backend_id = j.at("backend_id").get<std::string>();
  r.complete = j.at("complete").get<bool>();
  return r;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool sampling_equal(const SamplingConfig& a, const SamplingConfig& b) {
  return a.temperature == b.temperature && a.top_p == b.top_p &&
         a.top_k == b.top_k && a.samples_per_prompt == b.samples_per_prompt &&
         a.max_new_tokens == b.max_new_tokens;
}

}  // namespace

std::vector<EvalRecord> load_records(const std::filesystem::path& path,
                                     RecordsHeader* header) {
  const std::string text = read_file(path);
  std::vector<EvalRecord> records;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    const bool last_and_truncated = (nl == std::string::npos);
    std::size_t stop = last_and_truncated ? text.size() : nl;
    std::string_view line(text.data() + pos, stop - pos);
    pos = last_and_truncated ? text.size() : nl + 1;
    ++lineno;
    if (line.empty()) {
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      if (last_and_truncated) {
        break;  // interrupted mid-write; the tail is recoverable garbage
      }
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": bad JSONL line");
    }
    try {
      if (!have_header) {
        if (j.value("type", "") != "keyret.records") {
          throw ConfigError(path.string() +
                            ": first line is not a records header");
        }
        if (header) {
          header->promptset_hash = j.at("promptset").get<std::string>();
          header->backend_id = j.at("backend").get<std::string>();
          header->sampling = sampling_from_json(j.at("sampling"));
        }
        have_header = true;
      } else {
        records.push_back(record_from_json(j));
      }
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": bad record field: " + e.what());
    }
  }
  if (!have_header) {
    throw ConfigError(path.string() + ": missing records header");
  }
  return records;
}

EvalOutcome evaluate(const PromptSet& set, Backend& backend,
                     const SamplingConfig& sampling,
                     const std::filesystem::path& out,
                     const EvalOptions& options) {
  sampling.validate();
  const std::string set_hash = text_fingerprint(serialize_promptset(set));
  const BackendDescriptor& desc = backend.descriptor();

  std::set<std::string> done;
  EvalOutcome outcome;
  bool fresh_file = true;
  if (std::filesystem::exists(out)) {
    RecordsHeader header;
    std::vector<EvalRecord> existing = load_records(out, &header);
    if (header.promptset_hash != set_hash) {
      throw ConfigError("sink was written for a different prompt set");
    }
    if (header.backend_id != desc.id) {
      throw ConfigError("sink was written by backend '" + header.backend_id +
                        "', not '" + desc.id + "'");
    }
    if (!sampling_equal(header.sampling, sampling)) {
      throw ConfigError("sink was written with different sampling settings");
    }
    for (const EvalRecord& r : existing) {
      if (r.complete) {
        done.insert(r.prompt_id);
      }
    }
    // Drop a partial trailing line left by a hard interruption.
    const std::string text = read_file(out);
    if (!text.empty() && text.back() != '\n') {
      std::size_t keep = text.find_last_of('\n');
      std::filesystem::resize_file(out, keep == std::string::npos
                                            ? 0
                                            : keep + 1);
    }
    fresh_file = false;
  }
  outcome.skipped_existing = done.size();

  std::vector<const PromptInstance*> pending;
  for (const PromptInstance& p : set.prompts) {
    if (!done.count(p.prompt_id)) {
      pending.push_back(&p);
    }
  }

  if (out.has_parent_path()) {
    std::filesystem::create_directories(out.parent_path());
  }
  std::ofstream sink(out, std::ios::binary | std::ios::app);
  if (!sink) {
    throw Error("cannot open sink: " + out.string());
  }
  if (fresh_file) {
    json header;
    header["type"] = "keyret.records";
    header["promptset"] = set_hash;
    header["backend"] = desc.id;
    header["sampling"] = sampling_to_json(sampling);
    sink << header.dump() << '\n';
    sink.flush();
  }
  if (pending.empty()) {
    return outcome;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> incomplete{0};
  std::atomic<std::size_t> written{0};
  std::mutex sink_mu;
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&]() {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) {
        return;
      }
      const PromptInstance& prompt = *pending[i];
      EvalRecord record;
      record.prompt_id = prompt.prompt_id;
      record.backend_id = desc.id;
      record.started_at_ms = now_ms();
      const std::string final_prompt =
          prepare_prompt(prompt.prompt_text, desc);
      bool ok = false;
      try {
        for (std::size_t attempt = 0; attempt < options.max_attempts;
             ++attempt) {
          try {
            record.raw_samples = backend.complete(prompt, final_prompt,
                                                  sampling);
            ok = true;
            break;
          } catch (const TransientBackendError&) {
            if (attempt + 1 == options.max_attempts) {
              break;
            }
            std::this_thread::sleep_for(options.backoff_base * (1u << attempt));
          }
        }
      } catch (const BackendUnavailable&) {
        ok = false;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) {
          first_error = std::current_exception();
        }
        stop.store(true);
        return;
      }
      record.finished_at_ms = now_ms();
      if (ok) {
        const bool prefixed = !desc.supports_prefix_constraint();
        for (const std::string& raw : record.raw_samples) {
          std::optional<std::string> ext = extract_answer(raw, prefixed);
          record.correct.push_back(ext && *ext == prompt.expected);
          record.extracted.push_back(std::move(ext));
        }
        record.complete = true;
      } else {
        record.complete = false;
        incomplete.fetch_add(1);
      }
      {
        std::lock_guard<std::mutex> lock(sink_mu);
        if (stop.load()) {
          return;
        }
        sink << record_to_json(record).dump() << '\n';
        sink.flush();
        const std::size_t total = written.fetch_add(1) + 1;
        if (options.stop_after && total >= *options.stop_after) {
          stop.store(true);
        }
      }
    }
  };

  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min(options.concurrency, pending.size()));
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    threads.emplace_back(worker);
  }
  for (std::thread& t : threads) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  outcome.evaluated = written.load();
  outcome.incomplete = incomplete.load();
  if (outcome.evaluated > 0 && outcome.incomplete == outcome.evaluated) {
    throw BackendUnavailable(
        "backend failed every prompt after " +
        std::to_string(options.max_attempts) +
        " attempts each; partial records were kept for resume");
  }
  return outcome;
}

}  // namespace keyret
