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

#ifndef KEYRET_CORPUS_HPP_
#define KEYRET_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "keyret/rng.hpp"
#include "keyret/tokenizer.hpp"

namespace keyret {

// A distractor-free snippet used to pad prompts to the token budget.
struct FillerFunction {
  std::string name;
  // Normalised source: def header plus body, single trailing newline.
  std::string source;
  // Token count of source plus the separator newline that follows every
  // block in an assembled prompt.
  std::size_t token_len = 0;
};

struct CorpusStats {
  std::size_t records = 0;   // JSONL lines seen
  std::size_t loaded = 0;    // usable functions
  std::size_t dropped = 0;   // skipped records (with reasons)
  std::vector<std::string> warnings;
};

// Reads a JSONL corpus of {"prompt", "canonical_solution", ...} records,
// fuses prompt + solution into one function, strips trailing top-level
// test/assert lines, and keeps only records that parse as exactly one
// self-contained function. Unusable records are dropped and counted.
std::vector<FillerFunction> load_corpus(const std::filesystem::path& path,
                                        const Tokenizer& tokenizer,
                                        CorpusStats* stats = nullptr);

// Uniform sample without replacement until the next pick would cross
// budget_tokens; stops at the first overflowing pick. Order of the result is
// the sampling order.
std::vector<FillerFunction> sample_fillers(
    SeededRng& rng, const std::vector<FillerFunction>& pool,
    std::size_t budget_tokens);

}  // namespace keyret

#endif  // KEYRET_CORPUS_HPP_
