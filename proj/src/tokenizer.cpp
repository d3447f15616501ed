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

#include "keyret/tokenizer.hpp"

#include <algorithm>
#include <cstring>

#include <nlohmann/json.hpp>

#include "keyret/errors.hpp"
#include "keyret/util.hpp"

namespace keyret {

ByteChunkTokenizer::ByteChunkTokenizer(std::size_t bytes_per_token)
    : width_(bytes_per_token) {
  if (width_ == 0) {
    throw ConfigError("byte-chunk width must be positive");
  }
}

std::string ByteChunkTokenizer::id() const {
  return "byte" + std::to_string(width_);
}

std::vector<std::uint32_t> ByteChunkTokenizer::token_ends(
    std::string_view text) const {
  std::vector<std::uint32_t> ends;
  ends.reserve((text.size() + width_ - 1) / width_);
  for (std::size_t pos = width_; pos < text.size(); pos += width_) {
    ends.push_back(static_cast<std::uint32_t>(pos));
  }
  if (!text.empty()) {
    ends.push_back(static_cast<std::uint32_t>(text.size()));
  }
  return ends;
}

std::size_t ByteChunkTokenizer::count(std::string_view text) const {
  return (text.size() + width_ - 1) / width_;
}

VocabTokenizer::TrieNode::TrieNode() {
  std::memset(next, -1, sizeof(next));
}

VocabTokenizer::VocabTokenizer(std::vector<std::string> tokens) {
  trie_.emplace_back();
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& tok : tokens) {
    if (tok.empty()) {
      continue;
    }
    std::int32_t node = 0;
    for (unsigned char c : tok) {
      std::int32_t& slot = trie_[static_cast<std::size_t>(node)].next[c];
      if (slot < 0) {
        slot = static_cast<std::int32_t>(trie_.size());
        trie_.emplace_back();
      }
      node = slot;
    }
    trie_[static_cast<std::size_t>(node)].terminal = true;
    ++vocab_size_;
    max_token_len_ = std::max(max_token_len_, tok.size());
    h = fnv1a64(tok, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  fingerprint_ = to_hex(h);
}

VocabTokenizer VocabTokenizer::load(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("vocabulary file is not valid JSON: " + path.string() +
                      ": " + e.what());
  }
  std::vector<std::string> tokens;
  if (doc.is_array()) {
    for (const auto& item : doc) {
      if (!item.is_string()) {
        throw ConfigError("vocabulary array must hold strings: " +
                          path.string());
      }
      tokens.push_back(item.get<std::string>());
    }
  } else if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      tokens.push_back(it.key());
    }
  } else {
    throw ConfigError("vocabulary must be a JSON array or object: " +
                      path.string());
  }
  if (tokens.empty()) {
    throw ConfigError("vocabulary is empty: " + path.string());
  }
  return VocabTokenizer(std::move(tokens));
}

std::string VocabTokenizer::id() const {
  return "vocab:" + fingerprint_;
}

std::vector<std::uint32_t> VocabTokenizer::token_ends(
    std::string_view text) const {
  std::vector<std::uint32_t> ends;
  std::size_t pos = 0;
  while (pos < text.size()) {
    // Longest vocabulary entry starting at pos; lone byte as fallback.
    std::size_t best = 1;
    std::int32_t node = 0;
    std::size_t limit = std::min(max_token_len_, text.size() - pos);
    for (std::size_t len = 1; len <= limit; ++len) {
      node = trie_[static_cast<std::size_t>(node)]
                 .next[static_cast<unsigned char>(text[pos + len - 1])];
      if (node < 0) {
        break;
      }
      if (trie_[static_cast<std::size_t>(node)].terminal) {
        best = len;
      }
    }
    pos += best;
    ends.push_back(static_cast<std::uint32_t>(pos));
  }
  return ends;
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& spec) {
  if (spec.empty() || spec == "byte4") {
    return std::make_unique<ByteChunkTokenizer>(4);
  }
  if (spec.rfind("byte", 0) == 0 &&
      spec.find_first_not_of("0123456789", 4) == std::string::npos &&
      spec.size() > 4) {
    return std::make_unique<ByteChunkTokenizer>(
        static_cast<std::size_t>(std::stoul(spec.substr(4))));
  }
  return std::make_unique<VocabTokenizer>(VocabTokenizer::load(spec));
}

std::size_t token_index_at(const std::vector<std::uint32_t>& ends,
                           std::size_t byte_offset) {
  auto it = std::upper_bound(ends.begin(), ends.end(),
                             static_cast<std::uint32_t>(byte_offset));
  if (it == ends.end()) {
    throw DomainError("byte offset beyond tokenized text");
  }
  return static_cast<std::size_t>(it - ends.begin());
}

}  // namespace keyret
