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

#ifndef KEYRET_RNG_HPP_
#define KEYRET_RNG_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace keyret {

// SplitMix64 step; used for seed mixing and child-stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source. All draws are built from raw mt19937_64
// output, never from std::*_distribution, so sequences are identical
// across standard libraries and platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw in [0, bound) via rejection. bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(below(bound));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool coin() { return (engine_() & 1u) != 0; }

  // Fisher-Yates; depends only on the draw sequence above.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // k distinct values in [0, bound), ascending. k must be <= bound.
  std::vector<std::uint64_t> sample_distinct(std::uint64_t bound,
                                             std::size_t k);

  // Child stream independent of how much of this stream was consumed:
  // derived from the construction seed, not the engine state.
  SeededRng derive(std::uint64_t stream, std::uint64_t index) const {
    std::uint64_t s = seed_;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xda942042e4dd58b5ULL;
    std::uint64_t c = splitmix64(s);
    return SeededRng(a ^ (b << 1) ^ (c << 2) ^ c);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stream labels for derive(); keeps sibling streams from colliding.
namespace stream {
inline constexpr std::uint64_t kTask = 0x5441534bULL;
inline constexpr std::uint64_t kFill = 0x46494c4cULL;
inline constexpr std::uint64_t kPos = 0x504f5345ULL;
inline constexpr std::uint64_t kMock = 0x4d4f434bULL;
}  // namespace stream

inline std::vector<std::uint64_t> SeededRng::sample_distinct(
    std::uint64_t bound, std::size_t k) {
  // Floyd's algorithm; memory is O(k) regardless of bound.
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t j = bound - k; j < bound; ++j) {
    std::uint64_t t = below(j + 1);
    bool seen = false;
    for (std::uint64_t v : out) {
      if (v == t) {
        seen = true;
        break;
      }
    }
    out.push_back(seen ? j : t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace keyret

#endif  // KEYRET_RNG_HPP_
