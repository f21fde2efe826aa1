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

#ifndef RELUX_CHARTS_HPP_
#define RELUX_CHARTS_HPP_

#include <string>
#include <vector>

#include "relux/diagnose.hpp"
#include "relux/interpret.hpp"
#include "relux/unwrapper.hpp"

namespace relux {

// Each chart renders to a standalone 800x600 SVG document. Output depends
// only on the input structs, never on clocks, locales, or thread counts.

// Per-region marginal lines for one feature, with the member-density KDE
// band along the bottom.
std::string profile_chart(const std::vector<ProfileSegment>& segments,
                          const std::string& feature_name);

// Joint importance bars: intercept first, then features sorted descending.
std::string importance_chart(const ImportanceTable& table,
                             const std::vector<std::string>& feature_names);

// One polyline per region across coefficient axes; line width tracks
// region size.
std::string parallel_chart(const ParallelCoordinates& pc,
                           const std::vector<std::string>& feature_names);

// Slope vectors on a polar disc. `sqrt_radius` compresses the radial scale
// so far-out regions do not flatten the interior.
std::string polar_chart(const PolarProjection& projection, bool sqrt_radius);

// Grouped local/global bars with verdict labels per region.
std::string extrapolation_chart(const std::vector<ExtrapolationRow>& rows,
                                bool auc_metric,
                                const ExtrapolationThresholds& thresholds);

// 2-d linear-region map. Drawing downsamples to at most 256x256 cells; the
// legend reports the exact region count found at full resolution.
std::string regionmap_chart(const GridEnumeration& grid);

}  // namespace relux

#endif  // RELUX_CHARTS_HPP_
