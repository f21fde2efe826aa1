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

#ifndef RELUX_UNWRAPPER_HPP_
#define RELUX_UNWRAPPER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relux/dataset.hpp"
#include "relux/network.hpp"
#include "relux/pattern.hpp"

namespace relux {

// One linear piece of the network: eta = slope . x + intercept, exact on
// the activation region identified by `pattern`.
struct LocalLinearModel {
  Vector slope;
  double intercept = 0.0;
  ActivationPattern pattern;

  double eval(const Eigen::Ref<const Vector>& x) const {
    return slope.dot(x) + intercept;
  }
  Vector eval_batch(const Matrix& X) const {
    return (X * slope).array() + intercept;
  }
};

struct RegionRecord {
  ActivationPattern pattern;
  LocalLinearModel llm;
  std::vector<int> instances;  // row indices into the unwrapped dataset
  int count = 0;
  Vector center;               // mean of member feature rows
  double response_mean = 0.0;
  double response_std = 0.0;   // exactly 0 when single_flag
  bool single_flag = false;    // all member responses identical
  // Fit of this LLM on its own members: MSE (identity) or AUC (logit).
  // AUC is undefined when members carry a single class.
  std::optional<double> local_perf;
  bool local_degenerate = false;  // one-member region, local MSE trivially 0
  // Fit of this LLM on every instance in the dataset.
  std::optional<double> global_perf;
};

struct UnwrapResult {
  std::vector<RegionRecord> regions;  // count desc, ties lexicographic
  std::unordered_map<ActivationPattern, int, PatternHash> region_of;
  std::vector<int> instance_region;   // row index -> region id
  Link link = Link::identity;
  Task task = Task::regression;
  int total_instances = 0;
  // The network's own fit over the dataset (MSE or AUC), the reference
  // point for extrapolation verdicts.
  std::optional<double> model_perf;
  std::uint64_t net_fingerprint = 0;
  std::uint64_t data_fingerprint = 0;
};

ActivationPattern pattern_from_preacts(const std::vector<Vector>& preacts);

ActivationPattern activation_pattern(const ReluNetwork& net,
                                     const Eigen::Ref<const Vector>& x);

// Closed-form coefficients of the linear piece selected by `pattern`:
// inactive units drop out of the layer products, so the composition of the
// remaining affine maps collapses to a single slope vector and intercept.
LocalLinearModel llm_coefficients(const ReluNetwork& net,
                                  const ActivationPattern& pattern);

// Groups the dataset rows by activation pattern and derives the per-region
// linear models and fit statistics.
UnwrapResult unwrap(const ReluNetwork& net, const Dataset& data);

struct RegionAssignment {
  ActivationPattern pattern;
  bool member = false;  // pattern seen among the unwrapped regions
  int region_id = -1;
  LocalLinearModel llm;
};

RegionAssignment assign_region(const UnwrapResult& result,
                               const ReluNetwork& net,
                               const Eigen::Ref<const Vector>& x);

struct GridEnumeration {
  std::vector<ActivationPattern> patterns;  // first-seen scan order
  std::vector<std::int32_t> cell_pattern;   // row-major, resolution^2 entries
  int resolution = 0;
  std::array<double, 2> x_bounds{};
  std::array<double, 2> y_bounds{};

  // Distinct bit patterns restricted to one hidden layer (0-based).
  int layer_pattern_count(const ReluNetwork& net, int layer) const;
};

// Scans a uniform grid over a 2-d input box and records every activation
// pattern that appears.
GridEnumeration enumerate_regions_grid(const ReluNetwork& net,
                                       const std::array<double, 2>& x_bounds,
                                       const std::array<double, 2>& y_bounds,
                                       int resolution);

// Region table: count and response/fit statistics per region, largest
// first. Undefined entries render as empty cells.
std::string region_table_csv(const UnwrapResult& result);

// Per-region linear coefficients.
std::string llm_table_csv(const UnwrapResult& result,
                          const std::vector<std::string>& feature_names);

}  // namespace relux

#endif  // RELUX_UNWRAPPER_HPP_
