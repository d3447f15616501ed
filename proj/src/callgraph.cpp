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

#include "keyret/callgraph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "keyret/errors.hpp"

namespace keyret {
namespace {

struct Line {
  std::size_t begin = 0;  // first byte
  std::size_t stop = 0;   // one past last byte incl. the newline
  std::string_view text;  // without the newline
};

std::vector<Line> split_lines(std::string_view source) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t nl = source.find('\n', pos);
    std::size_t stop = (nl == std::string_view::npos) ? source.size() : nl + 1;
    std::size_t text_end = (nl == std::string_view::npos) ? source.size() : nl;
    lines.push_back({pos, stop, source.substr(pos, text_end - pos)});
    pos = stop;
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

bool is_indented(std::string_view s) {
  return !s.empty() && (s[0] == ' ' || s[0] == '\t');
}

bool is_ident_start(char c) {
  return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool is_ident_char(char c) {
  return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

void skip_spaces(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
    ++i;
  }
}

bool read_ident(std::string_view s, std::size_t& i, std::string_view& out) {
  if (i >= s.size() || !is_ident_start(s[i])) {
    return false;
  }
  std::size_t start = i;
  while (i < s.size() && is_ident_char(s[i])) {
    ++i;
  }
  out = s.substr(start, i - start);
  return true;
}

// `def name(params):`. Parameters are opaque (fillers have them); only the
// parens must balance on the line.
std::string parse_def_header(std::string_view line, std::size_t lineno) {
  std::size_t i = 3;  // past "def"
  skip_spaces(line, i);
  std::string_view name;
  if (!read_ident(line, i, name)) {
    throw ParseError("def header without a function name", lineno);
  }
  skip_spaces(line, i);
  if (i >= line.size() || line[i] != '(') {
    throw ParseError("def header missing '('", lineno);
  }
  int depth = 0;
  while (i < line.size()) {
    if (line[i] == '(') {
      ++depth;
    } else if (line[i] == ')') {
      if (--depth == 0) {
        ++i;
        break;
      }
    }
    ++i;
  }
  if (depth != 0) {
    throw ParseError("unbalanced parameter list", lineno);
  }
  skip_spaces(line, i);
  if (i + 1 < line.size() && line[i] == '-' && line[i + 1] == '>') {
    const std::size_t colon = line.rfind(':');
    if (colon == std::string_view::npos || colon < i) {
      throw ParseError("def header missing ':'", lineno);
    }
    i = colon;
  }
  if (i >= line.size() || line[i] != ':') {
    throw ParseError("def header missing ':'", lineno);
  }
  ++i;
  skip_spaces(line, i);
  if (i < line.size() && line[i] != '#') {
    throw ParseError("trailing junk after def header", lineno);
  }
  return std::string(name);
}

// `ident() + ident() + ...`; empty result means the expression is something
// else entirely (arguments, operators, attribute access, literals...).
std::vector<std::string> parse_call_chain(std::string_view expr) {
  std::vector<std::string> calls;
  std::size_t i = 0;
  skip_spaces(expr, i);
  while (true) {
    std::string_view name;
    if (!read_ident(expr, i, name)) {
      return {};
    }
    skip_spaces(expr, i);
    if (i >= expr.size() || expr[i] != '(') {
      return {};
    }
    ++i;
    skip_spaces(expr, i);
    if (i >= expr.size() || expr[i] != ')') {
      return {};
    }
    ++i;
    calls.emplace_back(name);
    skip_spaces(expr, i);
    if (i == expr.size()) {
      return calls;
    }
    if (expr[i] != '+') {
      return {};
    }
    ++i;
    skip_spaces(expr, i);
  }
}

// `"text"` or `'text'` with nothing after the closing quote. Backslash
// escapes the next character.
std::optional<std::string> parse_string_literal(std::string_view expr) {
  std::size_t i = 0;
  skip_spaces(expr, i);
  if (i >= expr.size() || (expr[i] != '"' && expr[i] != '\'')) {
    return std::nullopt;
  }
  char quote = expr[i++];
  std::string value;
  while (i < expr.size() && expr[i] != quote) {
    if (expr[i] == '\\' && i + 1 < expr.size()) {
      ++i;
    }
    value += expr[i++];
  }
  if (i >= expr.size()) {
    return std::nullopt;
  }
  ++i;
  skip_spaces(expr, i);
  if (i != expr.size()) {
    return std::nullopt;
  }
  return value;
}

std::string_view lstrip(std::string_view s) {
  std::size_t i = 0;
  skip_spaces(s, i);
  return s.substr(i);
}

// Parses `assert name() ==`; anything may follow the `==`.
std::optional<std::string> parse_assert_stem(std::string_view line,
                                             std::size_t lineno) {
  std::size_t i = 6;  // past "assert"
  skip_spaces(line, i);
  std::string_view name;
  if (!read_ident(line, i, name)) {
    throw ParseError("assert without a function call", lineno);
  }
  skip_spaces(line, i);
  if (i + 1 >= line.size() || line[i] != '(' || line[i + 1] != ')') {
    throw ParseError("assert must call a zero-argument function", lineno);
  }
  i += 2;
  skip_spaces(line, i);
  if (i + 1 >= line.size() || line[i] != '=' || line[i + 1] != '=') {
    throw ParseError("assert must compare with ==", lineno);
  }
  return std::string(name);
}

bool starts_word(std::string_view line, std::string_view word) {
  if (line.substr(0, word.size()) != word) {
    return false;
  }
  return line.size() == word.size() || !is_ident_char(line[word.size()]);
}

}  // namespace

const FunctionDef* CallGraph::find(std::string_view name) const {
  for (const FunctionDef& d : defs) {
    if (d.name == name) {
      return &d;
    }
  }
  return nullptr;
}

std::size_t CallGraph::def_index(std::string_view name) const {
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (defs[i].name == name) {
      return i;
    }
  }
  return defs.size();
}

CallGraph parse(std::string_view source) {
  CallGraph graph;
  std::set<std::string> def_names;
  const std::vector<Line> lines = split_lines(source);
  std::size_t i = 0;
  while (i < lines.size()) {
    const Line& line = lines[i];
    const std::size_t lineno = i + 1;
    if (is_blank(line.text) || line.text[0] == '#') {
      ++i;
      continue;
    }
    if (is_indented(line.text)) {
      throw ParseError("indented line outside any function body", lineno);
    }
    if (starts_word(line.text, "assert")) {
      graph.assert_name = parse_assert_stem(line.text, lineno);
      ++i;
      continue;
    }
    if (!starts_word(line.text, "def")) {
      throw ParseError("unexpected top-level statement", lineno);
    }

    FunctionDef def;
    def.name = parse_def_header(line.text, lineno);
    def.begin = line.begin;
    def.header_line = lineno;
    if (def_names.count(def.name)) {
      throw ParseError("duplicate definition of " + def.name, lineno);
    }
    def_names.insert(def.name);

    // Body: indented lines, with interior blank runs allowed. A blank run is
    // interior only if more indented lines follow it.
    std::size_t j = i + 1;
    std::size_t last_body = j;
    bool any_body = false;
    std::string docstring_delim;  // nonempty while inside a docstring
    std::size_t statements = 0;
    std::optional<std::string> literal;
    std::vector<std::string> chain;
    while (j < lines.size()) {
      const std::string_view text = lines[j].text;
      if (is_blank(text)) {
        std::size_t k = j + 1;
        while (k < lines.size() && is_blank(lines[k].text)) {
          ++k;
        }
        if (k < lines.size() && is_indented(lines[k].text)) {
          j = k;  // interior blanks
          continue;
        }
        break;  // trailing blanks are separator, not body
      }
      if (!is_indented(text)) {
        break;
      }
      last_body = j;
      any_body = true;
      const std::string_view stripped = lstrip(text);
      if (!docstring_delim.empty()) {
        if (stripped.find(docstring_delim) != std::string_view::npos) {
          docstring_delim.clear();
        }
        ++j;
        continue;
      }
      if (stripped.substr(0, 3) == "\"\"\"" || stripped.substr(0, 3) == "'''") {
        const std::string delim(stripped.substr(0, 3));
        if (stripped.find(delim, 3) == std::string_view::npos) {
          docstring_delim = delim;
        }
        ++j;
        continue;
      }
      ++statements;
      if (starts_word(stripped, "return")) {
        const std::string_view expr = lstrip(stripped.substr(6));
        if (auto lit = parse_string_literal(expr)) {
          if (statements == 1) {
            literal = *lit;
          }
        } else {
          std::vector<std::string> calls = parse_call_chain(expr);
          if (chain.empty()) {
            chain = std::move(calls);
          }
        }
      }
      ++j;
    }
    if (!any_body) {
      throw ParseError("function body is empty", lineno);
    }
    def.end = lines[last_body].stop;
    graph.defs.push_back(def);
    if (literal && statements == 1) {
      graph.payloads[def.name] = *literal;
    }
    for (std::size_t c = 0; c < chain.size(); ++c) {
      graph.edges.push_back({def.name, chain[c], c, false});
    }
    i = j;
  }
  for (CallEdge& e : graph.edges) {
    e.dangling = !def_names.count(e.callee);
  }
  return graph;
}

std::vector<std::string> reachable_from(const CallGraph& graph,
                                        std::string_view entry) {
  if (!graph.find(entry)) {
    throw UnknownTaskName("no definition for " + std::string(entry));
  }
  std::vector<std::string> order;
  std::set<std::string, std::less<>> seen;
  std::deque<std::string> queue;
  queue.emplace_back(entry);
  seen.insert(std::string(entry));
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    order.push_back(cur);
    for (const CallEdge& e : graph.edges) {
      if (e.caller == cur && !e.dangling && !seen.count(e.callee)) {
        seen.insert(e.callee);
        queue.push_back(e.callee);
      }
    }
  }
  return order;
}

std::size_t count_forward_refs(const CallGraph& graph) {
  if (!graph.assert_name) {
    throw UnknownTaskName("source has no assert stem");
  }
  return count_forward_refs(graph, *graph.assert_name);
}

std::size_t count_forward_refs(const CallGraph& graph,
                               std::string_view entry) {
  std::vector<std::string> names = reachable_from(graph, entry);
  std::set<std::string, std::less<>> in_chain(names.begin(), names.end());
  std::size_t count = 0;
  for (const CallEdge& e : graph.edges) {
    if (e.dangling || !in_chain.count(e.caller) || !in_chain.count(e.callee)) {
      continue;
    }
    if (graph.def_index(e.callee) > graph.def_index(e.caller)) {
      ++count;
    }
  }
  return count;
}

Spread compute_spread(const CallGraph& graph, std::string_view source,
                      const Tokenizer& tokenizer,
                      std::span<const std::string> task_names) {
  if (task_names.empty()) {
    throw DomainError("spread needs at least one task function");
  }
  const std::vector<std::uint32_t> ends = tokenizer.token_ends(source);
  if (ends.empty()) {
    throw DomainError("cannot compute spread of empty text");
  }
  std::size_t first = ends.size();
  std::size_t last = 0;
  for (const std::string& name : task_names) {
    const FunctionDef* def = graph.find(name);
    if (!def) {
      throw UnknownTaskName("no definition for " + name);
    }
    first = std::min(first, token_index_at(ends, def->begin));
    last = std::max(last, token_index_at(ends, def->end - 1));
  }
  Spread s;
  s.tokens = last - first + 1;
  s.norm = static_cast<double>(s.tokens) / static_cast<double>(ends.size());
  return s;
}

int bin_position(std::size_t token_index, std::size_t total_tokens) {
  if (total_tokens == 0 || token_index >= total_tokens) {
    throw DomainError("token index outside the context");
  }
  const std::size_t bin = 20 * token_index / total_tokens;
  return static_cast<int>(std::min<std::size_t>(bin, 19));
}

std::string to_label(const CommentConfig& config) {
  if (config.direction == CommentDirection::None) {
    return "none";
  }
  std::string out;
  switch (config.direction) {
    case CommentDirection::Calls:
      out = "calls";
      break;
    case CommentDirection::CalledBy:
      out = "called-by";
      break;
    default:
      out = "both";
      break;
  }
  out += config.wording == CommentTemplate::NamesOnly ? "/names" : "/sentence";
  out += config.depth == CommentDepth::NextHop ? "/next" : "/full";
  return out;
}

CommentConfig comment_config_from_label(std::string_view label) {
  CommentConfig config;
  if (label == "none" || label.empty()) {
    return config;
  }
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    std::size_t slash = label.find('/', pos);
    if (slash == std::string_view::npos) {
      parts.push_back(label.substr(pos));
      break;
    }
    parts.push_back(label.substr(pos, slash - pos));
    pos = slash + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("bad comment config label: " + std::string(label));
  }
  if (parts[0] == "calls") {
    config.direction = CommentDirection::Calls;
  } else if (parts[0] == "called-by") {
    config.direction = CommentDirection::CalledBy;
  } else if (parts[0] == "both") {
    config.direction = CommentDirection::Both;
  } else {
    throw ConfigError("bad comment direction: " + std::string(parts[0]));
  }
  if (parts[1] == "names") {
    config.wording = CommentTemplate::NamesOnly;
  } else if (parts[1] == "sentence") {
    config.wording = CommentTemplate::FullSentence;
  } else {
    throw ConfigError("bad comment template: " + std::string(parts[1]));
  }
  if (parts[2] == "next") {
    config.depth = CommentDepth::NextHop;
  } else if (parts[2] == "full") {
    config.depth = CommentDepth::FullGraph;
  } else {
    throw ConfigError("bad comment depth: " + std::string(parts[2]));
  }
  return config;
}

namespace {

// Breadth-first closure over one relation; layer 1 first, then layer 2, ...
// Within a layer, neighbours keep the relation's own order (call-site order
// for callees, definition order for callers).
std::vector<std::string> relation_closure(
    const std::string& start,
    const std::map<std::string, std::vector<std::string>>& direct,
    CommentDepth depth) {
  std::vector<std::string> order;
  std::set<std::string> seen{start};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    auto it = direct.find(cur);
    if (it == direct.end()) {
      continue;
    }
    for (const std::string& nxt : it->second) {
      if (seen.insert(nxt).second) {
        order.push_back(nxt);
        queue.push_back(nxt);
      }
    }
    if (depth == CommentDepth::NextHop) {
      break;
    }
  }
  return order;
}

std::string join_names(const std::vector<std::string>& names,
                       CommentTemplate wording) {
  std::string out;
  if (wording == CommentTemplate::NamesOnly) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) {
        out += ", ";
      }
      out += names[i];
    }
    return out;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) {
      out += (i + 1 == names.size()) ? " and " : ", ";
    }
    out += names[i];
  }
  return out;
}

}  // namespace

std::string annotate(std::string_view source, const CommentConfig& config) {
  if (config.direction == CommentDirection::None) {
    return std::string(source);
  }
  const CallGraph graph = parse(source);

  // Only in-context callees are mentioned; a name with no definition here
  // cannot help the reader locate anything.
  std::map<std::string, std::vector<std::string>> callees;
  std::map<std::string, std::vector<std::string>> callers;
  for (const FunctionDef& def : graph.defs) {
    for (const CallEdge& e : graph.edges) {
      if (e.dangling) {
        continue;
      }
      if (e.caller == def.name) {
        auto& list = callees[def.name];
        if (std::find(list.begin(), list.end(), e.callee) == list.end()) {
          list.push_back(e.callee);
        }
      }
      if (e.callee == def.name) {
        auto& list = callers[def.name];
        if (std::find(list.begin(), list.end(), e.caller) == list.end()) {
          list.push_back(e.caller);
        }
      }
    }
  }

  std::string out;
  out.reserve(source.size() + 64 * graph.defs.size());
  std::size_t copied = 0;
  for (const FunctionDef& def : graph.defs) {
    out.append(source.substr(copied, def.begin - copied));
    copied = def.begin;
    std::string comment;
    if (config.direction == CommentDirection::Calls ||
        config.direction == CommentDirection::Both) {
      std::vector<std::string> names =
          relation_closure(def.name, callees, config.depth);
      if (!names.empty()) {
        comment += config.wording == CommentTemplate::FullSentence
                       ? "# This function calls "
                       : "# ";
        comment += join_names(names, config.wording);
        comment += '\n';
      }
    }
    if (config.direction == CommentDirection::CalledBy ||
        config.direction == CommentDirection::Both) {
      std::vector<std::string> names =
          relation_closure(def.name, callers, config.depth);
      if (!names.empty()) {
        comment += config.wording == CommentTemplate::FullSentence
                       ? "# This function is called by "
                       : "# ";
        comment += join_names(names, config.wording);
        comment += '\n';
      }
    }
    out += comment;
  }
  out.append(source.substr(copied));
  return out;
}

std::string strip_annotations(std::string_view source) {
  const std::vector<Line> lines = split_lines(source);
  std::string out;
  out.reserve(source.size());
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string_view text = lines[i].text;
    if (!text.empty() && text[0] == '#') {
      std::size_t j = i;
      while (j < lines.size() && !lines[j].text.empty() &&
             lines[j].text[0] == '#') {
        ++j;
      }
      if (j < lines.size() && starts_word(lines[j].text, "def")) {
        i = j;  // drop the whole run
        continue;
      }
      for (; i < j; ++i) {
        out.append(source.substr(lines[i].begin,
                                 lines[i].stop - lines[i].begin));
      }
      continue;
    }
    out.append(source.substr(lines[i].begin, lines[i].stop - lines[i].begin));
    ++i;
  }
  return out;
}

}  // namespace keyret
