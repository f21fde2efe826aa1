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

#ifndef RELUX_INTERPRET_HPP_
#define RELUX_INTERPRET_HPP_

#include <string>
#include <vector>

#include "relux/unwrapper.hpp"

namespace relux {

// Marginal view of one region's LLM along a single feature. The drawn line
// is slope * x - offset, where offset centers the line to zero mean over
// the region's members.
struct ProfileSegment {
  int region_id = 0;
  int feature = 0;
  double slope = 0.0;
  double offset = 0.0;  // mean of slope * x_ij over members
  double x_min = 0.0;
  double x_max = 0.0;
  int count = 0;
  // Gaussian KDE of member feature values at 64 evenly spaced points over
  // [x_min, x_max], scaled to unit maximum.
  std::vector<double> density;
};

std::vector<ProfileSegment> local_profile(const UnwrapResult& result,
                                          const Dataset& data, int feature,
                                          int top_k);

// Count-weighted squared-coefficient shares; intercept and feature terms
// share one normalizer, so the table sums to 1.
struct ImportanceTable {
  double ji_intercept = 0.0;
  Vector ji_features;
  std::vector<int> order;  // features sorted by JI descending, ties by index
};

ImportanceTable joint_importance(const UnwrapResult& result);

struct ParallelCoordinates {
  std::vector<int> region_ids;
  std::vector<int> counts;
  Matrix coefficients;  // one row per retained region: intercept, then slopes
  bool include_intercept = false;  // whether charts start at the intercept axis
};

ParallelCoordinates parallel_coordinates(const UnwrapResult& result,
                                         bool exclude_single,
                                         bool include_intercept);

// Gaussian KDE with the Silverman rule-of-thumb bandwidth, sampled at
// `points` evenly spaced locations on [lo, hi] and scaled to unit max.
// Degenerate inputs (single value, zero spread) give a flat curve of ones.
std::vector<double> kde_curve(const std::vector<double>& values, double lo,
                              double hi, int points);

std::string profile_csv(const std::vector<ProfileSegment>& segments);
std::string importance_csv(const ImportanceTable& table,
                           const std::vector<std::string>& feature_names);
std::string parallel_csv(const ParallelCoordinates& pc,
                         const std::vector<std::string>& feature_names);

}  // namespace relux

#endif  // RELUX_INTERPRET_HPP_
