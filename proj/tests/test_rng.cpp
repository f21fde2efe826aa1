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

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "relux/rng.hpp"

using namespace relux;

TEST_CASE("derive_seed is deterministic and stream-separated") {
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 9999ULL}) {
    for (std::uint64_t stream = 0; stream < 16; ++stream)
      seen.insert(derive_seed(seed, stream));
  }
  // 4 seeds x 16 streams must not collide.
  CHECK(seen.size() == 64);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("uniform stays in [0, 1) and fills the range") {
  Rng rng(123);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("normal draws have the right first two moments") {
  Rng rng(7);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("identical seeds replay identical sequences") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(99), d(100);
  bool all_equal = true;
  for (int i = 0; i < 10; ++i) all_equal &= (c.next_u64() == d.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("uniform_int respects inclusive bounds") {
  Rng rng(5);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) {
    int v = static_cast<int>(rng.uniform_int(0, 6));
    CHECK(v >= 0);
    CHECK(v <= 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);

  for (int i = 0; i < 20; ++i) {
    int v = static_cast<int>(rng.uniform_int(-3, -1));
    CHECK(v >= -3);
    CHECK(v <= -1);
  }
}

TEST_CASE("shuffle produces a permutation, deterministically") {
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng a(3);
  a.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});

  std::vector<int> w{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng b(3);
  b.shuffle(w);
  CHECK(v == w);

  std::vector<int> u{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng c(4);
  c.shuffle(u);
  CHECK(u != v);  // different seed, different permutation
}
