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

#ifndef KEYRET_CALLGRAPH_HPP_
#define KEYRET_CALLGRAPH_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyret/tokenizer.hpp"

namespace keyret {

// One top-level zero-argument function block.
struct FunctionDef {
  std::string name;
  std::size_t begin = 0;        // byte offset of the 'def' keyword
  std::size_t end = 0;          // one past the block's last byte (its newline)
  std::size_t header_line = 0;  // 1-based
};

struct CallEdge {
  std::string caller;
  std::string callee;
  // Left-to-right order of the call site inside the caller's return line.
  std::size_t callsite = 0;
  // Callee has no definition in this source.
  bool dangling = false;
};

struct CallGraph {
  std::vector<FunctionDef> defs;
  std::vector<CallEdge> edges;
  // Functions whose whole body is `return "<literal>"`.
  std::map<std::string, std::string> payloads;
  // Name from a trailing `assert name() ==` stem, when present.
  std::optional<std::string> assert_name;

  const FunctionDef* find(std::string_view name) const;
  // Index into defs, or defs.size() when absent.
  std::size_t def_index(std::string_view name) const;
  bool operator==(const CallGraph&) const = default;
};

// Parses flat Python-like source: top-level `def name():` headers, indented
// bodies (docstrings and blank lines allowed), `#` comment lines, and an
// optional trailing assert stem. Anything else raises ParseError.
CallGraph parse(std::string_view source);

// Names reachable from entry over non-dangling edges, breadth-first,
// including entry itself.
std::vector<std::string> reachable_from(const CallGraph& graph,
                                        std::string_view entry);

// Edges (u, v) reachable from the assert entry where v's definition appears
// after u's. Dangling edges are skipped. Throws UnknownTaskName if the graph
// has no assert stem or the entry is undefined.
std::size_t count_forward_refs(const CallGraph& graph);
std::size_t count_forward_refs(const CallGraph& graph, std::string_view entry);

struct Spread {
  std::size_t tokens = 0;
  double norm = 0.0;
};

// Token distance from the first token of the earliest task-owned block to
// the last token of the latest one, inclusive. The assert stem is not a
// block and never counts.
Spread compute_spread(const CallGraph& graph, std::string_view source,
                      const Tokenizer& tokenizer,
                      std::span<const std::string> task_names);

// 20-ile of a token position within the context; clamped to [0, 19].
int bin_position(std::size_t token_index, std::size_t total_tokens);

enum class CommentDirection { None, Calls, CalledBy, Both };
enum class CommentTemplate { NamesOnly, FullSentence };
enum class CommentDepth { NextHop, FullGraph };

struct CommentConfig {
  CommentDirection direction = CommentDirection::None;
  CommentTemplate wording = CommentTemplate::NamesOnly;
  CommentDepth depth = CommentDepth::NextHop;
  bool operator==(const CommentConfig&) const = default;
};

std::string to_label(const CommentConfig& config);
CommentConfig comment_config_from_label(std::string_view label);

// Inserts one comment line per configured direction right above each def
// that has the relation; functions with no relation get no comment.
std::string annotate(std::string_view source, const CommentConfig& config);

// Removes comment lines that annotate() would have inserted: top-level runs
// of `#` lines sitting directly above a def header.
std::string strip_annotations(std::string_view source);

}  // namespace keyret

#endif  // KEYRET_CALLGRAPH_HPP_
