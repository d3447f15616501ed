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

#include "keyret/corpus.hpp"

#include <numeric>

#include <nlohmann/json.hpp>

#include "keyret/callgraph.hpp"
#include "keyret/errors.hpp"
#include "keyret/util.hpp"

namespace keyret {

using nlohmann::json;

namespace {

// Drops everything from the first top-level line that cannot belong to the
// function: bare asserts, test calls, a second def, prints. The function
// itself starts at the first def header.
std::string normalise_record(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  bool in_function = false;
  bool done = false;
  while (pos < text.size() && !done) {
    std::size_t nl = text.find('\n', pos);
    std::size_t stop = (nl == std::string::npos) ? text.size() : nl + 1;
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
    bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
    if (!in_function) {
      if (line.substr(0, 4) == "def " || line.substr(0, 4) == "def\t") {
        in_function = true;
        out.append(text, pos, stop - pos);
      }
      // Leading imports/comments/blank lines before the def are dropped.
    } else if (blank || indented) {
      out.append(text, pos, stop - pos);
    } else {
      done = true;  // first foreign top-level line ends the function
    }
    pos = stop;
  }
  // Trim trailing whitespace, keep exactly one final newline.
  std::size_t last = out.find_last_not_of(" \t\r\n");
  if (last == std::string::npos) {
    return "";
  }
  out.resize(last + 1);
  out += '\n';
  return out;
}

}  // namespace

std::vector<FillerFunction> load_corpus(const std::filesystem::path& path,
                                        const Tokenizer& tokenizer,
                                        CorpusStats* stats) {
  const std::string text = read_file(path);
  std::vector<FillerFunction> pool;
  CorpusStats local;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t stop = (nl == std::string::npos) ? text.size() : nl;
    std::string_view line(text.data() + pos, stop - pos);
    pos = (nl == std::string::npos) ? text.size() : nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    ++local.records;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusFormatError(path.string() + ":" + std::to_string(lineno) +
                              ": not a JSON record: " + e.what());
    }
    if (!j.is_object() || !j.contains("prompt") ||
        !j.contains("canonical_solution") || !j["prompt"].is_string() ||
        !j["canonical_solution"].is_string()) {
      throw CorpusFormatError(path.string() + ":" + std::to_string(lineno) +
                              ": record needs string fields 'prompt' and "
                              "'canonical_solution'");
    }
    const std::string fused = j["prompt"].get<std::string>() +
                              j["canonical_solution"].get<std::string>();
    const std::string source = normalise_record(fused);
    auto drop = [&](const std::string& why) {
      ++local.dropped;
      local.warnings.push_back(path.string() + ":" + std::to_string(lineno) +
                               ": dropped: " + why);
    };
    if (source.empty()) {
      drop("no function definition found");
      continue;
    }
    CallGraph graph;
    try {
      graph = parse(source);
    } catch (const Error& e) {
      drop(e.what());
      continue;
    }
    if (graph.defs.size() != 1) {
      drop("expected exactly one top-level function, got " +
           std::to_string(graph.defs.size()));
      continue;
    }
    FillerFunction filler;
    filler.name = graph.defs[0].name;
    filler.source = source;
    filler.token_len = tokenizer.count(source + "\n");
    bool duplicate = false;
    for (const FillerFunction& f : pool) {
      if (f.name == filler.name) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      drop("duplicate function name " + filler.name);
      continue;
    }
    pool.push_back(std::move(filler));
    ++local.loaded;
  }
  if (pool.empty()) {
    throw CorpusTooSmall("no usable functions in " + path.string());
  }
  if (stats) {
    *stats = std::move(local);
  }
  return pool;
}

std::vector<FillerFunction> sample_fillers(
    SeededRng& rng, const std::vector<FillerFunction>& pool,
    std::size_t budget_tokens) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<FillerFunction> picked;
  std::size_t used = 0;
  for (std::size_t idx : order) {
    const FillerFunction& f = pool[idx];
    if (used + f.token_len > budget_tokens) {
      break;  // first overflow ends the fill
    }
    used += f.token_len;
    picked.push_back(f);
  }
  return picked;
}

}  // namespace keyret
