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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "relux/dataset.hpp"
#include "relux/rng.hpp"
#include "relux/trainer.hpp"
#include "relux/unwrapper.hpp"

using namespace relux;

namespace {

ReluNetwork random_net(std::uint64_t seed, int d,
                       const std::vector<int>& hidden, Link link) {
  ReluNetwork net = init_network(d, hidden, link, seed);
  Rng rng(derive_seed(seed, 78));
  for (auto& b : net.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.normal() * 0.3;
  return net;
}

Dataset gaussian_data(std::uint64_t seed, int n, int d, Task task) {
  Rng rng(seed);
  Dataset data;
  data.features = Matrix(n, d);
  data.response = Vector(n);
  for (Eigen::Index i = 0; i < data.features.size(); ++i)
    data.features(i) = rng.normal();
  for (int i = 0; i < n; ++i)
    data.response(i) = task == Task::classification
                           ? (rng.uniform() < 0.5 ? 0.0 : 1.0)
                           : rng.normal();
  for (int j = 0; j < d; ++j) data.feature_names.push_back("x" + std::to_string(j));
  data.response_name = "y";
  data.task = task;
  return data;
}

}  // namespace

TEST_CASE("toy layer-1 patterns match the quadrant geometry") {
  ReluNetwork net = oracles::toy_net();
  Vector top(2), bottom(2);
  top << 0.0, 0.5;
  bottom << 0.0, -0.5;
  ActivationPattern p_top = activation_pattern(net, top);
  CHECK(p_top.test(0));
  CHECK(p_top.test(1));
  ActivationPattern p_bottom = activation_pattern(net, bottom);
  CHECK_FALSE(p_bottom.test(0));
  CHECK_FALSE(p_bottom.test(1));
}

TEST_CASE("boundary points count as inactive") {
  // On the boundary -x1 + x2 == 0 the first unit's preactivation is 0.
  ReluNetwork net = oracles::toy_net();
  Vector x(2);
  x << 0.5, 0.5;
  ForwardTrace trace = forward(net, x);
  CHECK(trace.preactivations[0](0) == 0.0);
  CHECK_FALSE(activation_pattern(net, x).test(0));
}

TEST_CASE("patterns match the naive sign oracle") {
  Rng rng(17);
  ReluNetwork net = random_net(4, 3, {6, 4}, Link::identity);
  for (int rep = 0; rep < 200; ++rep) {
    Vector x(3);
    oracles::Vec xv(3);
    for (int j = 0; j < 3; ++j) {
      x(j) = rng.normal();
      xv[static_cast<std::size_t>(j)] = x(j);
    }
    ActivationPattern p = activation_pattern(net, x);
    auto ref = oracles::naive_forward(net, xv);
    std::size_t bit = 0;
    for (const auto& z : ref.preacts)
      for (double v : z) CHECK(p.test(bit++) == (v > 0.0));
  }
}

TEST_CASE("single-layer all-active LLM collapses the affine chain") {
  ReluNetwork net;
  net.input_dim = 2;
  net.hidden_sizes = {3};
  net.link = Link::identity;
  Rng rng(5);
  net.weights = {Matrix(3, 2), Matrix(1, 3)};
  net.biases = {Vector(3), Vector(1)};
  for (auto& w : net.weights)
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
  for (auto& b : net.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.normal();

  ActivationPattern all_on(3);
  for (std::size_t i = 0; i < 3; ++i) all_on.set(i, true);
  LocalLinearModel llm = llm_coefficients(net, all_on);
  Matrix expected_w = net.weights[1] * net.weights[0];
  double expected_b = (net.weights[1] * net.biases[0])(0) + net.biases[1](0);
  CHECK((llm.slope.transpose() - expected_w.row(0)).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK(llm.intercept == doctest::Approx(expected_b).epsilon(1e-14));
}

TEST_CASE("all-inactive pattern gives the constant model b_L") {
  ReluNetwork net = random_net(12, 2, {4, 3}, Link::identity);
  ActivationPattern off(static_cast<std::size_t>(net.total_hidden()));
  LocalLinearModel llm = llm_coefficients(net, off);
  CHECK(llm.slope.isZero(0.0));
  CHECK(llm.intercept == net.biases.back()(0));
}

TEST_CASE("LLM evaluation equals the forward pass on random nets") {
  Rng rng(91);
  ReluNetwork net = random_net(7, 2, {3, 4}, Link::identity);
  for (int rep = 0; rep < 50; ++rep) {
    Vector x(2);
    x << rng.normal(), rng.normal();
    ActivationPattern p = activation_pattern(net, x);
    LocalLinearModel llm = llm_coefficients(net, p);
    double eta = forward(net, x).eta;
    CHECK(std::fabs(llm.eval(x) - eta) <= 1e-9);
  }
}

TEST_CASE("unwrap of a singleton dataset") {
  ReluNetwork net = random_net(3, 2, {4}, Link::identity);
  Dataset data = gaussian_data(1, 1, 2, Task::regression);
  UnwrapResult result = unwrap(net, data);
  REQUIRE(result.regions.size() == 1);
  CHECK(result.regions[0].count == 1);
  CHECK(result.regions[0].single_flag);
  CHECK(result.regions[0].response_std == 0.0);
  CHECK(result.regions[0].local_degenerate);
  CHECK(result.regions[0].local_perf.has_value());
  CHECK(*result.regions[0].local_perf == 0.0);
}

TEST_CASE("unwrap partitions the instance set") {
  ReluNetwork net = random_net(21, 3, {8, 6}, Link::identity);
  Dataset data = gaussian_data(2, 500, 3, Task::regression);
  UnwrapResult result = unwrap(net, data);

  std::vector<int> seen(500, 0);
  int total = 0;
  for (const auto& region : result.regions) {
    CHECK(region.count == static_cast<int>(region.instances.size()));
    CHECK(region.count >= 1);
    total += region.count;
    for (int idx : region.instances) seen[static_cast<std::size_t>(idx)] += 1;
  }
  CHECK(total == 500);
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));

  // Patterns pairwise distinct.
  std::set<std::size_t> hashes;
  for (const auto& region : result.regions) hashes.insert(region.pattern.hash());
  CHECK(hashes.size() == result.regions.size());

  // Sorted by count desc, ties lexicographic by bits.
  for (std::size_t i = 1; i < result.regions.size(); ++i) {
    const auto& a = result.regions[i - 1];
    const auto& b = result.regions[i];
    bool ordered = a.count > b.count ||
                   (a.count == b.count && a.pattern.lex_less(b.pattern));
    CHECK(ordered);
  }
}

TEST_CASE("exactness: every member's LLM value equals the forward pass") {
  ReluNetwork net = random_net(33, 2, {10, 6}, Link::logit);
  Dataset data = gaussian_data(5, 400, 2, Task::classification);
  UnwrapResult result = unwrap(net, data);
  for (const auto& region : result.regions) {
    for (int idx : region.instances) {
      Vector x = data.features.row(idx).transpose();
      double eta = forward(net, x).eta;
      CHECK(std::fabs(region.llm.eval(x) - eta) <=
            1e-9 + 1e-9 * std::fabs(eta));
    }
  }
}

TEST_CASE("region statistics match brute-force recomputation") {
  ReluNetwork net = random_net(44, 2, {6, 4}, Link::identity);
  Dataset data = gaussian_data(6, 300, 2, Task::regression);
  UnwrapResult result = unwrap(net, data);
  for (const auto& region : result.regions) {
    double mean = 0.0;
    Vector center = Vector::Zero(2);
    for (int idx : region.instances) {
      mean += data.response(idx);
      center += data.features.row(idx).transpose();
    }
    mean /= region.count;
    center /= region.count;
    CHECK(region.response_mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK((region.center - center).norm() <= 1e-12);
    double var = 0.0;
    for (int idx : region.instances) {
      double dlt = data.response(idx) - mean;
      var += dlt * dlt;
    }
    CHECK(region.response_std ==
          doctest::Approx(std::sqrt(var / region.count)).epsilon(1e-9));
  }
}

TEST_CASE("convexity witness: segment midpoints satisfy the sign constraints") {
  ReluNetwork net = random_net(8, 2, {5, 5}, Link::identity);
  Dataset data = gaussian_data(9, 300, 2, Task::regression);
  UnwrapResult result = unwrap(net, data);
  Rng rng(77);
  int checked = 0;
  for (const auto& region : result.regions) {
    if (region.count < 2 || checked >= 100) continue;
    auto pick = [&]() {
      auto j = rng.uniform_int(0, static_cast<std::int64_t>(region.instances.size()) - 1);
      return region.instances[static_cast<std::size_t>(j)];
    };
    for (int rep = 0; rep < 4 && checked < 100; ++rep) {
      int a = pick();
      int b = pick();
      double t = rng.uniform();
      Vector m = (1.0 - t) * data.features.row(a).transpose() +
                 t * data.features.row(b).transpose();
      if (!(activation_pattern(net, m) == region.pattern)) continue;
      // Active bits demand z > 0, inactive demand z <= 0: the Lemma
      // inequality (-1)^P o z <= 0 with ties to inactive.
      ForwardTrace trace = forward(net, m);
      std::size_t bit = 0;
      for (const auto& z : trace.preactivations) {
        for (Eigen::Index i = 0; i < z.size(); ++i, ++bit) {
          if (region.pattern.test(bit)) CHECK(z(i) > 0.0);
          else CHECK(z(i) <= 0.0);
        }
      }
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("trivial patterns yield exactly zero slopes") {
  ReluNetwork net = random_net(10, 2, {3, 3}, Link::identity);
  // Kill layer 2 entirely: pattern with that segment all-zero is trivial.
  ActivationPattern p(6);
  p.set(0, true);
  p.set(1, true);
  LocalLinearModel llm = llm_coefficients(net, p);
  CHECK(llm.slope.isZero(0.0));
}

TEST_CASE("assign_region flags training membership and novel patterns") {
  ReluNetwork net = oracles::toy_net();
  // Training data only in the (1,1) quadrant.
  Dataset data;
  data.features = Matrix(3, 2);
  data.features << 0.0, 0.5, -0.1, 0.6, 0.1, 0.7;
  data.response = Vector::Zero(3);
  data.feature_names = {"x1", "x2"};
  data.task = Task::regression;
  UnwrapResult result = unwrap(net, data);

  int home = -1;
  for (std::size_t r = 0; r < result.regions.size(); ++r)
    for (int row : result.regions[r].instances)
      if (row == 0) home = static_cast<int>(r);
  REQUIRE(home >= 0);
  RegionAssignment seen =
      assign_region(result, net, data.features.row(0).transpose());
  CHECK(seen.member);
  CHECK(seen.region_id == home);
  Vector below(2);
  below << 0.0, -0.5;
  RegionAssignment novel = assign_region(result, net, below);
  CHECK_FALSE(novel.member);
  CHECK(novel.region_id == -1);
  // The novel point's LLM is still exact.
  CHECK(std::fabs(novel.llm.eval(below) - forward(net, below).eta) <= 1e-12);
}

TEST_CASE("grid enumeration of the zero network finds one pattern") {
  ReluNetwork net = oracles::toy_net();
  for (auto& w : net.weights) w.setZero();
  for (auto& b : net.biases) b.setZero();
  GridEnumeration grid =
      enumerate_regions_grid(net, {-1.0, 1.0}, {-1.0, 1.0}, 50);
  CHECK(grid.patterns.size() == 1);
  CHECK(grid.layer_pattern_count(net, 0) == 1);
}

TEST_CASE("toy grid enumeration reproduces the published partition") {
  ReluNetwork net = oracles::toy_net();
  GridEnumeration grid =
      enumerate_regions_grid(net, {-1.0, 1.0}, {-1.0, 1.0}, 2000);
  CHECK(grid.patterns.size() == 22);
  CHECK(grid.layer_pattern_count(net, 0) == 4);
}

TEST_CASE("grid enumeration rejects non-2d nets and bad bounds") {
  ReluNetwork net3 = random_net(2, 3, {4}, Link::identity);
  CHECK_THROWS_AS(enumerate_regions_grid(net3, {0.0, 1.0}, {0.0, 1.0}, 10),
                  ShapeError);
  ReluNetwork net = oracles::toy_net();
  CHECK_THROWS_AS(enumerate_regions_grid(net, {1.0, -1.0}, {0.0, 1.0}, 10),
                  DataError);
  CHECK_THROWS_AS(enumerate_regions_grid(net, {-1.0, 1.0}, {0.0, 1.0}, 1),
                  DataError);
}

TEST_CASE("region table csv pins the published header") {
  ReluNetwork net = random_net(50, 2, {4}, Link::logit);
  Dataset data = gaussian_data(11, 60, 2, Task::classification);
  UnwrapResult result = unwrap(net, data);
  std::string csv = region_table_csv(result);
  CHECK(csv.rfind("Count, Response Mean, Response Std, Local AUC, Global AUC\n",
                  0) == 0);

  Dataset reg = gaussian_data(12, 60, 2, Task::regression);
  ReluNetwork rnet = random_net(51, 2, {4}, Link::identity);
  std::string rcsv = region_table_csv(unwrap(rnet, reg));
  CHECK(rcsv.rfind("Count, Response Mean, Response Std, Local MSE, Global MSE\n",
                   0) == 0);
}

TEST_CASE("single-class regions render an empty Local AUC cell") {
  ReluNetwork net = oracles::toy_net();
  net.link = Link::logit;
  Dataset data;
  data.features = Matrix(2, 2);
  // Identical rows: the same activation pattern by construction.
  data.features << 0.0, 0.5, 0.0, 0.5;
  data.response = Vector::Zero(2);
  data.response << 1.0, 1.0;
  data.feature_names = {"x1", "x2"};
  data.task = Task::classification;
  UnwrapResult result = unwrap(net, data);
  REQUIRE(result.regions.size() == 1);
  CHECK_FALSE(result.regions[0].local_perf.has_value());
  std::string csv = region_table_csv(result);
  auto line_end = csv.find('\n');
  std::string row = csv.substr(line_end + 1);
  CHECK(row.find(",,") != std::string::npos);  // empty Local AUC cell
}

TEST_CASE("unwrap is deterministic across repeated calls") {
  ReluNetwork net = random_net(60, 2, {8, 4}, Link::identity);
  Dataset data = gaussian_data(13, 250, 2, Task::regression);
  UnwrapResult a = unwrap(net, data);
  UnwrapResult b = unwrap(net, data);
  CHECK(region_table_csv(a) == region_table_csv(b));
  CHECK(llm_table_csv(a, data.feature_names) ==
        llm_table_csv(b, data.feature_names));
}
