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

#include "relux/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <utility>

#include "relux/svg.hpp"

namespace relux {
namespace {

using svg::Builder;
using svg::color_for_rank;

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kLeft = 64.0;
constexpr double kRight = 776.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 552.0;

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  double a = 0.0;  // pixel at lo
  double b = 1.0;  // pixel at hi

  double operator()(double v) const {
    if (hi == lo) return 0.5 * (a + b);
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    double c = lo;
    lo = c - 1.0;
    hi = c + 1.0;
    return;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

// Round tick step to 1/2/5 times a power of ten.
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  double raw = span / std::max(1, target);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double r = raw / mag;
  double step = (r <= 1.0) ? 1.0 : (r <= 2.0) ? 2.0 : (r <= 5.0) ? 5.0 : 10.0;
  return step * mag;
}

void draw_axes(Builder& svg, const Scale& x, const Scale& y,
               const std::string& x_label, const std::string& y_label) {
  svg.open_group("axes");
  svg.line(kLeft, kBottom, kRight, kBottom, "#444444", 1.0);
  svg.line(kLeft, kTop, kLeft, kBottom, "#444444", 1.0);
  double xs = nice_step(x.hi - x.lo, 6);
  for (double t = std::ceil(x.lo / xs) * xs; t <= x.hi + 1e-12 * xs; t += xs) {
    double px = x(t);
    svg.line(px, kBottom, px, kBottom + 5.0, "#444444", 1.0);
    svg.text(px, kBottom + 18.0, short_num(t), 10.0, "middle");
  }
  double ys = nice_step(y.hi - y.lo, 6);
  for (double t = std::ceil(y.lo / ys) * ys; t <= y.hi + 1e-12 * ys; t += ys) {
    double py = y(t);
    svg.line(kLeft - 5.0, py, kLeft, py, "#444444", 1.0);
    svg.text(kLeft - 8.0, py + 3.0, short_num(t), 10.0, "end");
  }
  if (!x_label.empty())
    svg.text(0.5 * (kLeft + kRight), kHeight - 12.0, x_label, 12.0, "middle");
  if (!y_label.empty())
    svg.text(16.0, kTop - 10.0, y_label, 12.0, "start");
  svg.close_group();
}

}  // namespace

std::string profile_chart(const std::vector<ProfileSegment>& segments,
                          const std::string& feature_name) {
  Builder svg;
  svg.open_group("title");
  svg.text(kLeft, 24.0, "local profiles: " + feature_name, 14.0);
  svg.close_group();

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : segments) {
    x_lo = std::min(x_lo, s.x_min);
    x_hi = std::max(x_hi, s.x_max);
    for (double xe : {s.x_min, s.x_max}) {
      double v = s.slope * xe - s.offset;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (segments.empty()) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  pad_range(x_lo, x_hi);
  pad_range(y_lo, y_hi);

  // Reserve a band under the line area for the density curves.
  const double band_top = kBottom - 96.0;
  Scale xs{x_lo, x_hi, kLeft, kRight};
  Scale ys{y_lo, y_hi, band_top - 8.0, kTop};
  draw_axes(svg, xs, ys, feature_name, "centered response");
  svg.open_group("density band");
  svg.line(kLeft, band_top, kRight, band_top, "#bbbbbb", 0.8, 1.0, true);
  svg.close_group();

  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string color = color_for_rank(static_cast<int>(i));
    svg.open_group("region " + std::to_string(s.region_id) + " (count " +
                   std::to_string(s.count) + ")");
    if (s.x_max > s.x_min) {
      svg.line(xs(s.x_min), ys(s.slope * s.x_min - s.offset), xs(s.x_max),
               ys(s.slope * s.x_max - s.offset), color, 1.6);
      std::vector<std::pair<double, double>> pts;
      pts.reserve(s.density.size());
      for (size_t k = 0; k < s.density.size(); ++k) {
        double fx = s.x_min + (s.x_max - s.x_min) * static_cast<double>(k) /
                                  static_cast<double>(s.density.size() - 1);
        pts.emplace_back(xs(fx), kBottom - s.density[k] * (kBottom - band_top));
      }
      svg.polyline(pts, color, 1.0, 0.75);
    } else {
      // Zero-width span: all members share the feature value.
      svg.circle(xs(s.x_min), ys(-s.offset + s.slope * s.x_min), 3.0, color);
      svg.line(xs(s.x_min), kBottom, xs(s.x_min), band_top, color, 1.0, 0.75);
    }
    svg.close_group();
  }
  return svg.finish();
}

std::string importance_chart(const ImportanceTable& table,
                             const std::vector<std::string>& feature_names) {
  Builder svg;
  svg.open_group("title");
  svg.text(kLeft, 24.0, "joint importance", 14.0);
  svg.close_group();

  std::vector<std::pair<std::string, double>> bars;
  bars.emplace_back("(intercept)", table.ji_intercept);
  for (int j : table.order) {
    std::string name = (j < static_cast<int>(feature_names.size()))
                           ? feature_names[j]
                           : ("x" + std::to_string(j));
    bars.emplace_back(name, table.ji_features(j));
  }

  double y_hi = 0.0;
  for (const auto& [name, v] : bars) y_hi = std::max(y_hi, v);
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.08;
  Scale ys{0.0, y_hi, kBottom, kTop};
  Scale xs{0.0, static_cast<double>(bars.size()), kLeft, kRight};
  draw_axes(svg, xs, ys, "", "JI");

  double slot = (kRight - kLeft) / static_cast<double>(bars.size());
  double bw = std::min(slot * 0.7, 80.0);
  for (size_t i = 0; i < bars.size(); ++i) {
    const auto& [name, v] = bars[i];
    double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    svg.open_group(name + " = " + short_num(v));
    svg.rect(cx - 0.5 * bw, ys(v), bw, kBottom - ys(v),
             i == 0 ? "#888888" : color_for_rank(static_cast<int>(i) - 1));
    svg.text(cx, ys(v) - 4.0, short_num(v), 9.0, "middle");
    svg.text(cx, kBottom + 30.0, name, 10.0, "middle");
    svg.close_group();
  }
  return svg.finish();
}

std::string parallel_chart(const ParallelCoordinates& pc,
                           const std::vector<std::string>& feature_names) {
  Builder svg;
  svg.open_group("title");
  svg.text(kLeft, 24.0, "parallel coordinates (" +
                            std::to_string(pc.region_ids.size()) + " regions)",
           14.0);
  svg.close_group();

  const int d = static_cast<int>(pc.coefficients.cols());
  std::vector<std::string> axis_names;
  std::vector<int> axis_cols;
  for (int c = pc.include_intercept ? 0 : 1; c < d; ++c) {
    axis_cols.push_back(c);
    if (c == 0) {
      axis_names.emplace_back("b");
    } else if (c - 1 < static_cast<int>(feature_names.size())) {
      axis_names.push_back(feature_names[c - 1]);
    } else {
      axis_names.push_back("x" + std::to_string(c - 1));
    }
  }
  const int axes = static_cast<int>(axis_cols.size());
  if (axes == 0 || pc.coefficients.rows() == 0) {
    svg.open_group("empty");
    svg.text(0.5 * kWidth, 0.5 * kHeight, "no regions to draw", 12.0,
             "middle");
    svg.close_group();
    return svg.finish();
  }

  std::vector<double> lo(axes), hi(axes);
  for (int a = 0; a < axes; ++a) {
    lo[a] = pc.coefficients.col(axis_cols[a]).minCoeff();
    hi[a] = pc.coefficients.col(axis_cols[a]).maxCoeff();
  }

  auto axis_x = [&](int a) {
    if (axes == 1) return 0.5 * (kLeft + kRight);
    return kLeft + (kRight - kLeft) * static_cast<double>(a) /
                       static_cast<double>(axes - 1);
  };
  auto axis_y = [&](int a, double v) {
    if (hi[a] == lo[a]) return 0.5 * (kTop + kBottom);
    return kBottom - (v - lo[a]) / (hi[a] - lo[a]) * (kBottom - kTop);
  };

  svg.open_group("axes");
  for (int a = 0; a < axes; ++a) {
    double px = axis_x(a);
    svg.line(px, kTop, px, kBottom, "#888888", 1.0);
    svg.text(px, kBottom + 18.0, axis_names[a], 10.0, "middle");
    svg.text(px, kTop - 6.0, short_num(hi[a]), 9.0, "middle");
    svg.text(px, kBottom + 32.0, short_num(lo[a]), 9.0, "middle");
  }
  svg.close_group();

  int max_count = 1;
  for (int c : pc.counts) max_count = std::max(max_count, c);
  for (size_t r = 0; r < pc.region_ids.size(); ++r) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(axes);
    for (int a = 0; a < axes; ++a)
      pts.emplace_back(axis_x(a),
                       axis_y(a, pc.coefficients(static_cast<int>(r),
                                                 axis_cols[a])));
    double w = 0.8 + 2.4 * std::log2(1.0 + pc.counts[r]) /
                         std::log2(1.0 + max_count);
    svg.open_group("region " + std::to_string(pc.region_ids[r]) + " (count " +
                   std::to_string(pc.counts[r]) + ")");
    if (axes == 1) {
      svg.circle(pts[0].first, pts[0].second, w + 1.0,
                 color_for_rank(static_cast<int>(r)), 0.7);
    } else {
      svg.polyline(pts, color_for_rank(static_cast<int>(r)), w, 0.6);
    }
    svg.close_group();
  }
  return svg.finish();
}

std::string polar_chart(const PolarProjection& projection, bool sqrt_radius) {
  Builder svg;
  svg.open_group("title");
  svg.text(kLeft, 24.0, std::string("slope directions") +
                            (sqrt_radius ? " (sqrt radius)" : ""), 14.0);
  svg.close_group();
  if (projection.degenerate) {
    svg.open_group("note");
    svg.text(kLeft, 40.0, "projection degenerate: identical slopes", 11.0,
             "start", "#aa3333");
    svg.close_group();
  }

  const double cx = 400.0, cy = 316.0, R = 236.0;
  double r_max = 0.0;
  for (const auto& p : projection.points) r_max = std::max(r_max, p.radius);
  if (!(r_max > 0.0)) r_max = 1.0;
  auto rad = [&](double r) {
    double t = r / r_max;
    if (sqrt_radius) t = std::sqrt(t);
    return t * R;
  };

  svg.open_group("grid");
  for (int k = 1; k <= 4; ++k) {
    double rr = R * k / 4.0;
    std::vector<std::pair<double, double>> ring;
    for (int i = 0; i <= 72; ++i) {
      double a = 2.0 * std::numbers::pi * i / 72.0;
      ring.emplace_back(cx + rr * std::cos(a), cy - rr * std::sin(a));
    }
    svg.polyline(ring, "#dddddd", 0.8);
    double ring_val = r_max * k / 4.0;
    if (sqrt_radius) ring_val = r_max * (k / 4.0) * (k / 4.0);
    svg.text(cx + rr + 3.0, cy - 3.0, short_num(ring_val), 9.0, "start",
             "#999999");
  }
  for (int k = 0; k < 8; ++k) {
    double a = 2.0 * std::numbers::pi * k / 8.0;
    svg.line(cx, cy, cx + R * std::cos(a), cy - R * std::sin(a), "#eeeeee",
             0.8);
    svg.text(cx + (R + 14.0) * std::cos(a), cy - (R + 14.0) * std::sin(a) + 3.0,
             std::to_string(45 * k), 9.0, "middle", "#999999");
  }
  svg.close_group();

  for (size_t i = 0; i < projection.points.size(); ++i) {
    const auto& p = projection.points[i];
    double rr = rad(p.radius);
    double px = cx + rr * std::cos(p.angle);
    double py = cy - rr * std::sin(p.angle);
    svg.open_group("region " + std::to_string(p.region_id) +
                   (p.single_flag ? " (single)" : ""));
    svg.circle(px, py, 4.0, p.single_flag ? "#1f77b4" : "#d62728", 0.85);
    svg.close_group();
  }

  svg.open_group("legend");
  svg.circle(kLeft + 6.0, kHeight - 30.0, 4.0, "#d62728", 0.85);
  svg.text(kLeft + 16.0, kHeight - 26.0, "mixed response", 10.0);
  svg.circle(kLeft + 150.0, kHeight - 30.0, 4.0, "#1f77b4", 0.85);
  svg.text(kLeft + 160.0, kHeight - 26.0, "single response", 10.0);
  svg.close_group();
  return svg.finish();
}

std::string extrapolation_chart(const std::vector<ExtrapolationRow>& rows,
                                bool auc_metric,
                                const ExtrapolationThresholds& thresholds) {
  Builder svg;
  const std::string metric = auc_metric ? "AUC" : "MSE";
  svg.open_group("title");
  svg.text(kLeft, 24.0, "extrapolation: local vs global " + metric, 14.0);
  svg.close_group();

  double y_hi = auc_metric ? 1.0 : 0.0;
  for (const auto& r : rows) {
    if (r.local_perf) y_hi = std::max(y_hi, *r.local_perf);
    if (r.global_perf) y_hi = std::max(y_hi, *r.global_perf);
  }
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.08;
  Scale ys{0.0, y_hi, kBottom, kTop};
  const int n = std::max<int>(1, static_cast<int>(rows.size()));
  Scale xs{0.0, static_cast<double>(n), kLeft, kRight};
  draw_axes(svg, xs, ys, "region (largest first)", metric);

  if (auc_metric) {
    svg.open_group("threshold " + short_num(thresholds.auc_good));
    svg.line(kLeft, ys(thresholds.auc_good), kRight, ys(thresholds.auc_good),
             "#aa3333", 1.0, 0.9, true);
    svg.close_group();
  }

  double slot = (kRight - kLeft) / static_cast<double>(n);
  double bw = std::min(slot * 0.32, 36.0);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double cl = kLeft + slot * (static_cast<double>(i) + 0.5) - bw;
    double cg = kLeft + slot * (static_cast<double>(i) + 0.5);
    svg.open_group("region " + std::to_string(r.region_id) + ": " +
                   verdict_name(r.verdict));
    if (r.local_perf) {
      svg.rect(cl, ys(*r.local_perf), bw, kBottom - ys(*r.local_perf),
               "#1f77b4", 0.9);
    } else {
      svg.text(cl + 0.5 * bw, kBottom - 6.0, "-", 10.0, "middle", "#1f77b4");
    }
    if (r.global_perf) {
      svg.rect(cg, ys(*r.global_perf), bw, kBottom - ys(*r.global_perf),
               "#ff7f0e", 0.9);
    } else {
      svg.text(cg + 0.5 * bw, kBottom - 6.0, "-", 10.0, "middle", "#ff7f0e");
    }
    svg.text(cg, ys(y_hi / 1.08) - 6.0, verdict_name(r.verdict), 8.0,
             "middle", "#666666");
    svg.text(cg, kBottom + 30.0, std::to_string(r.region_id), 9.0, "middle");
    svg.close_group();
  }

  svg.open_group("legend");
  svg.rect(kLeft, kHeight - 38.0, 12.0, 12.0, "#1f77b4", 0.9);
  svg.text(kLeft + 16.0, kHeight - 28.0, "local " + metric, 10.0);
  svg.rect(kLeft + 120.0, kHeight - 38.0, 12.0, 12.0, "#ff7f0e", 0.9);
  svg.text(kLeft + 136.0, kHeight - 28.0, "global " + metric, 10.0);
  svg.close_group();
  return svg.finish();
}

std::string regionmap_chart(const GridEnumeration& grid) {
  Builder svg;
  svg.open_group("title");
  svg.text(kLeft, 24.0, "linear regions: " +
                            std::to_string(grid.patterns.size()), 14.0);
  svg.close_group();

  const int res = grid.resolution;
  const int draw = std::min(res, 256);
  Scale xs{grid.x_bounds[0], grid.x_bounds[1], kLeft, kRight};
  Scale ys{grid.y_bounds[0], grid.y_bounds[1], kBottom, kTop};
  draw_axes(svg, xs, ys, "x0", "x1");

  const double cw = (kRight - kLeft) / static_cast<double>(draw);
  const double ch = (kBottom - kTop) / static_cast<double>(draw);
  auto src = [&](int k) {
    // Nearest-neighbor pick from the full-resolution scan.
    if (draw == res) return k;
    return static_cast<int>((static_cast<long long>(k) * (res - 1)) /
                            std::max(1, draw - 1));
  };

  svg.open_group("regions (downsampled to " + std::to_string(draw) + "x" +
                 std::to_string(draw) + ")");
  for (int r = 0; r < draw; ++r) {
    const int gr = src(r);
    int run_start = 0;
    std::int32_t run_id = grid.cell_pattern[static_cast<size_t>(gr) * res +
                                            src(0)];
    for (int c = 1; c <= draw; ++c) {
      std::int32_t id =
          (c < draw)
              ? grid.cell_pattern[static_cast<size_t>(gr) * res + src(c)]
              : -1;
      if (id != run_id) {
        // Horizontal run of one region id -> single rect.
        svg.rect(kLeft + cw * run_start, kBottom - ch * (r + 1),
                 cw * (c - run_start) + 0.25, ch + 0.25,
                 color_for_rank(run_id), 0.85);
        run_start = c;
        run_id = id;
      }
    }
  }
  svg.close_group();

  svg.open_group("legend");
  svg.text(kLeft, kHeight - 14.0,
           "regions: " + std::to_string(grid.patterns.size()) +
               "  resolution: " + std::to_string(res) + "x" +
               std::to_string(res),
           11.0);
  svg.close_group();
  return svg.finish();
}

}  // namespace relux
