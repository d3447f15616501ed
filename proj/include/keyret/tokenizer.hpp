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

#ifndef KEYRET_TOKENIZER_HPP_
#define KEYRET_TOKENIZER_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace keyret {

// Segmentation of a byte string into tokens. Implementations must cover the
// whole input: token_ends() is strictly increasing and ends at text.size().
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  // Stable identifier recorded in prompt-set headers.
  virtual std::string id() const = 0;

  // True when counts are an approximation rather than a real vocabulary.
  virtual bool approximate() const = 0;

  // Exclusive end offset of every token, in order.
  virtual std::vector<std::uint32_t> token_ends(std::string_view text) const = 0;

  virtual std::size_t count(std::string_view text) const {
    return token_ends(text).size();
  }
};

// Fixed-width fallback: every 4 bytes is one token (last one may be short).
// Roughly matches the bytes-per-token rate of common BPE vocabularies on
// code, but is explicitly approximate.
class ByteChunkTokenizer final : public Tokenizer {
 public:
  explicit ByteChunkTokenizer(std::size_t bytes_per_token = 4);

  std::string id() const override;
  bool approximate() const override { return true; }
  std::vector<std::uint32_t> token_ends(std::string_view text) const override;
  std::size_t count(std::string_view text) const override;

 private:
  std::size_t width_;
};

// Greedy longest-match segmentation over a fixed vocabulary. Any byte not
// covered by the vocabulary becomes its own single-byte token.
class VocabTokenizer final : public Tokenizer {
 public:
  // tokens: the vocabulary entries; empty strings are ignored.
  explicit VocabTokenizer(std::vector<std::string> tokens);

  // Loads a JSON file holding either an array of strings or an object whose
  // keys are the vocabulary (values ignored, e.g. token ids).
  static VocabTokenizer load(const std::filesystem::path& path);

  std::string id() const override;
  bool approximate() const override { return false; }
  std::vector<std::uint32_t> token_ends(std::string_view text) const override;

  std::size_t vocab_size() const { return vocab_size_; }

 private:
  struct TrieNode {
    std::int32_t next[256];
    bool terminal = false;
    TrieNode();
  };

  std::vector<TrieNode> trie_;
  std::size_t vocab_size_ = 0;
  std::size_t max_token_len_ = 0;
  std::string fingerprint_;
};

// spec is "" or "byte4" (byte-chunk width 4), "byteN" for width N, or a path
// to a vocabulary JSON file.
std::unique_ptr<Tokenizer> make_tokenizer(const std::string& spec);

// Index of the token that contains byte_offset. ends must be nonempty and
// byte_offset must fall before the last end.
std::size_t token_index_at(const std::vector<std::uint32_t>& ends,
                           std::size_t byte_offset);

}  // namespace keyret

#endif  // KEYRET_TOKENIZER_HPP_
