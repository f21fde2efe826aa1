// Copyright 2026 the relu-unwrap authors.
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

#ifndef RELUX_PATTERN_HPP_
#define RELUX_PATTERN_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace relux {

// Bit vector over all hidden units of a network, concatenated layer by
// layer. Bit i is 1 when the unit's preactivation is strictly positive;
// a preactivation of exactly zero counts as inactive.
class ActivationPattern {
 public:
  ActivationPattern() = default;
  explicit ActivationPattern(std::size_t bits)
      : words_((bits + 63) / 64, 0), bits_(bits) {}

  std::size_t size() const { return bits_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(std::size_t i, bool v) {
    if (v) {
      words_[i >> 6] |= 1ULL << (i & 63);
    } else {
      words_[i >> 6] &= ~(1ULL << (i & 63));
    }
    dirty_ = true;
  }

  std::size_t count_active() const;

  std::uint64_t hash() const;

  bool operator==(const ActivationPattern& other) const {
    return bits_ == other.bits_ && words_ == other.words_;
  }
  bool operator!=(const ActivationPattern& other) const { return !(*this == other); }

  // Lexicographic order on the bit string, bit 0 first.
  bool lex_less(const ActivationPattern& other) const;

  // Bits [begin, end) as a standalone pattern, used for per-layer views.
  ActivationPattern slice(std::size_t begin, std::size_t end) const;

  // "0101..." with bit 0 leftmost.
  std::string to_string() const;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
  mutable std::uint64_t hash_cache_ = 0;
  mutable bool dirty_ = true;
};

struct PatternHash {
  std::size_t operator()(const ActivationPattern& p) const {
    return static_cast<std::size_t>(p.hash());
  }
};

}  // namespace relux

#endif  // RELUX_PATTERN_HPP_
