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

#include "relux/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "relux/io.hpp"
#include "relux/stats.hpp"

namespace relux {

std::vector<double> kde_curve(const std::vector<double>& values, double lo,
                              double hi, int points) {
  if (values.empty()) throw DataError("interpret", "kde of empty sample");
  if (points < 1) throw DataError("interpret", "kde needs >= 1 sample point");

  const auto n = static_cast<double>(values.size());
  const double sd = stats::sample_std(values);
  const double iqr = stats::quantile(values, 0.75) - stats::quantile(values, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;  // degenerate IQR, fall back to sd
  const double bandwidth = 0.9 * spread * std::pow(n, -0.2);

  std::vector<double> curve(static_cast<std::size_t>(points), 0.0);
  if (!(bandwidth > 0.0)) {
    // All member values identical: flat unit density.
    std::fill(curve.begin(), curve.end(), 1.0);
    return curve;
  }
  const double step = points > 1 ? (hi - lo) / (points - 1) : 0.0;
  double peak = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = lo + step * k;
    double acc = 0.0;
    for (double v : values) acc += stats::normal_pdf((t - v) / bandwidth);
    curve[static_cast<std::size_t>(k)] = acc / (n * bandwidth);
    peak = std::max(peak, curve[static_cast<std::size_t>(k)]);
  }
  if (peak > 0.0) {
    for (double& c : curve) c /= peak;
  }
  return curve;
}

std::vector<ProfileSegment> local_profile(const UnwrapResult& result,
                                          const Dataset& data, int feature,
                                          int top_k) {
  if (result.regions.empty()) throw DataError("interpret", "empty unwrap result");
  if (feature < 0 || feature >= data.dim())
    throw ShapeError("interpret", "feature index out of range");
  if (top_k < 1) throw DataError("interpret", "top_k must be >= 1");

  const std::size_t take =
      std::min<std::size_t>(result.regions.size(), static_cast<std::size_t>(top_k));
  std::vector<ProfileSegment> segments;
  segments.reserve(take);
  for (std::size_t ri = 0; ri < take; ++ri) {
    const RegionRecord& region = result.regions[ri];
    ProfileSegment seg;
    seg.region_id = static_cast<int>(ri);
    seg.feature = feature;
    seg.slope = region.llm.slope(feature);
    seg.count = region.count;

    std::vector<double> xs;
    xs.reserve(region.instances.size());
    double offset_acc = 0.0;
    for (int row : region.instances) {
      const double x = data.features(row, feature);
      xs.push_back(x);
      offset_acc += seg.slope * x;
    }
    seg.offset = offset_acc / static_cast<double>(xs.size());
    seg.x_min = *std::min_element(xs.begin(), xs.end());
    seg.x_max = *std::max_element(xs.begin(), xs.end());
    seg.density = kde_curve(xs, seg.x_min, seg.x_max, 64);
    segments.push_back(std::move(seg));
  }
  return segments;
}

ImportanceTable joint_importance(const UnwrapResult& result) {
  if (result.regions.empty()) throw DataError("interpret", "empty unwrap result");
  const auto d = result.regions.front().llm.slope.size();

  double intercept_term = 0.0;
  Vector feature_terms = Vector::Zero(d);
  for (const RegionRecord& region : result.regions) {
    const double weight = static_cast<double>(region.count);
    intercept_term += weight * region.llm.intercept * region.llm.intercept;
    feature_terms += weight * region.llm.slope.cwiseProduct(region.llm.slope);
  }
  const double total = intercept_term + feature_terms.sum();

  ImportanceTable table;
  if (total > 0.0) {
    table.ji_intercept = intercept_term / total;
    table.ji_features = feature_terms / total;
  } else {
    // All coefficients exactly zero; put the whole share on the intercept.
    table.ji_intercept = 1.0;
    table.ji_features = Vector::Zero(d);
  }
  table.order.resize(static_cast<std::size_t>(d));
  std::iota(table.order.begin(), table.order.end(), 0);
  std::stable_sort(table.order.begin(), table.order.end(), [&](int a, int b) {
    return table.ji_features(a) > table.ji_features(b);
  });
  return table;
}

ParallelCoordinates parallel_coordinates(const UnwrapResult& result,
                                         bool exclude_single,
                                         bool include_intercept) {
  if (result.regions.empty()) throw DataError("interpret", "empty unwrap result");
  const auto d = result.regions.front().llm.slope.size();

  ParallelCoordinates pc;
  pc.include_intercept = include_intercept;
  for (std::size_t ri = 0; ri < result.regions.size(); ++ri) {
    const RegionRecord& region = result.regions[ri];
    if (exclude_single && region.single_flag) continue;
    pc.region_ids.push_back(static_cast<int>(ri));
    pc.counts.push_back(region.count);
  }
  pc.coefficients.resize(static_cast<Eigen::Index>(pc.region_ids.size()), d + 1);
  for (std::size_t r = 0; r < pc.region_ids.size(); ++r) {
    const RegionRecord& region =
        result.regions[static_cast<std::size_t>(pc.region_ids[r])];
    pc.coefficients(static_cast<Eigen::Index>(r), 0) = region.llm.intercept;
    pc.coefficients.row(static_cast<Eigen::Index>(r)).tail(d) =
        region.llm.slope.transpose();
  }
  return pc;
}

std::string profile_csv(const std::vector<ProfileSegment>& segments) {
  std::ostringstream out;
  out << "region_id,feature,slope,offset,xmin,xmax,count\n";
  for (const ProfileSegment& seg : segments) {
    out << seg.region_id << ',' << seg.feature << ',' << format_double(seg.slope)
        << ',' << format_double(seg.offset) << ',' << format_double(seg.x_min)
        << ',' << format_double(seg.x_max) << ',' << seg.count << '\n';
  }
  return out.str();
}

std::string importance_csv(const ImportanceTable& table,
                           const std::vector<std::string>& feature_names) {
  if (feature_names.size() != static_cast<std::size_t>(table.ji_features.size()))
    throw ShapeError("interpret", "feature name count does not match table");
  std::ostringstream out;
  out << "name,ji\n";
  out << "intercept," << format_double(table.ji_intercept) << '\n';
  for (int j : table.order) {
    out << feature_names[static_cast<std::size_t>(j)] << ','
        << format_double(table.ji_features(j)) << '\n';
  }
  return out.str();
}

std::string parallel_csv(const ParallelCoordinates& pc,
                         const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "region_id,count,b";
  for (const std::string& name : feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < pc.region_ids.size(); ++r) {
    out << pc.region_ids[r] << ',' << pc.counts[r];
    for (Eigen::Index c = 0; c < pc.coefficients.cols(); ++c)
      out << ',' << format_double(pc.coefficients(static_cast<Eigen::Index>(r), c));
    out << '\n';
  }
  return out.str();
}

}  // namespace relux
