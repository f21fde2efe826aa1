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

#ifndef RELUX_DIAGNOSE_HPP_
#define RELUX_DIAGNOSE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "relux/unwrapper.hpp"

namespace relux {

// Region rendered in polar coordinates: direction from its (projected)
// slope vector, radius from its instance count.
struct PolarPoint {
  int region_id = 0;
  double angle = 0.0;  // radians in [0, 2*pi)
  double radius = 0.0;
  bool single_flag = false;
};

struct PolarProjection {
  std::vector<PolarPoint> points;
  bool degenerate = false;  // PCA collapsed (identical coefficient rows)
};

// d == 2 uses the slopes directly; higher dimensions project the slope
// rows onto their top two principal directions first.
PolarProjection polar_projection(const UnwrapResult& result);

struct Census {
  int total_regions = 0;
  int single_regions = 0;
  double fraction_single = 0.0;           // share of regions
  double fraction_single_weighted = 0.0;  // share of instances
};

Census single_census(const UnwrapResult& result);
std::string census_json(const Census& census);

enum class Verdict { poor, good, extraordinary, undefined };
std::string verdict_name(Verdict v);

struct ExtrapolationThresholds {
  double auc_good = 0.75;   // classification: performance >= this is good
  double mse_factor = 2.0;  // regression: MSE <= factor * model MSE is good
};

struct ExtrapolationRow {
  int region_id = 0;
  int count = 0;
  std::optional<double> local_perf;
  std::optional<double> global_perf;
  Verdict verdict = Verdict::undefined;
};

// Good locally and globally -> good; good locally, poor globally -> poor
// (the LLM does not extend); poor locally, good globally -> extraordinary;
// undefined local performance -> undefined.
std::vector<ExtrapolationRow> extrapolation_report(
    const UnwrapResult& result, int top_k,
    const ExtrapolationThresholds& thresholds);

std::string polar_csv(const PolarProjection& projection);
std::string extrapolation_csv(const std::vector<ExtrapolationRow>& rows,
                              bool auc_metric);

}  // namespace relux

#endif  // RELUX_DIAGNOSE_HPP_
