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

#include "relux/pattern.hpp"

#include <bit>

namespace relux {

std::size_t ActivationPattern::count_active() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::uint64_t ActivationPattern::hash() const {
  if (dirty_) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ bits_;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    hash_cache_ = h;
    dirty_ = false;
  }
  return hash_cache_;
}

bool ActivationPattern::lex_less(const ActivationPattern& other) const {
  const std::size_t common = bits_ < other.bits_ ? bits_ : other.bits_;
  for (std::size_t i = 0; i < common; ++i) {
    const bool a = test(i), b = other.test(i);
    if (a != b) return b;  // 0 sorts before 1
  }
  return bits_ < other.bits_;
}

ActivationPattern ActivationPattern::slice(std::size_t begin, std::size_t end) const {
  ActivationPattern out(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    if (test(i)) out.set(i - begin, true);
  }
  return out;
}

std::string ActivationPattern::to_string() const {
  std::string s(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

}  // namespace relux
