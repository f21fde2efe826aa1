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

#include "relux/svg.hpp"

#include <cmath>
#include <cstdio>

namespace relux::svg {
namespace {

// Coordinates are emitted with fixed precision: enough for crisp geometry,
// short enough to keep files byte-stable and small.
std::string num(double v) {
  if (!std::isfinite(v)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string hsv_to_hex(double h, double s, double v) {
  h = h - std::floor(h);
  double r = 0.0, g = 0.0, b = 0.0;
  double hh = h * 6.0;
  int sector = static_cast<int>(hh) % 6;
  double f = hh - std::floor(hh);
  double p = v * (1.0 - s);
  double q = v * (1.0 - s * f);
  double t = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(r * 255.0)),
                static_cast<int>(std::lround(g * 255.0)),
                static_cast<int>(std::lround(b * 255.0)));
  return buf;
}

}  // namespace

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string color_for_rank(int rank) {
  if (rank < 0) rank = 0;
  constexpr double kGoldenRatioConjugate = 0.618033988749895;
  double hue = std::fmod(0.12 + kGoldenRatioConjugate * rank, 1.0);
  // Alternate saturation/value bands so runs of adjacent ranks do not
  // collapse into near-identical tones on long palettes.
  double sat = (rank % 3 == 1) ? 0.55 : 0.78;
  double val = (rank % 2 == 0) ? 0.78 : 0.60;
  return hsv_to_hex(hue, sat, val);
}

Builder::Builder(int width, int height) : width_(width), height_(height) {
  body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
           "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
           std::to_string(height_) + "\">\n";
  body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width_) +
           "\" height=\"" + std::to_string(height_) +
           "\" fill=\"#ffffff\"/>\n";
}

void Builder::open_group(const std::string& title) {
  body_ += "<g><title>" + escape_xml(title) + "</title>\n";
  ++open_groups_;
}

void Builder::close_group() {
  if (open_groups_ > 0) {
    body_ += "</g>\n";
    --open_groups_;
  }
}

void Builder::line(double x1, double y1, double x2, double y2,
                   const std::string& stroke, double width, double opacity,
                   bool dashed) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
           num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\"";
  if (opacity < 1.0) body_ += " stroke-opacity=\"" + num(opacity) + "\"";
  if (dashed) body_ += " stroke-dasharray=\"5,4\"";
  body_ += "/>\n";
}

void Builder::polyline(const std::vector<std::pair<double, double>>& points,
                       const std::string& stroke, double width,
                       double opacity) {
  if (points.size() < 2) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\"";
  if (opacity < 1.0) body_ += " stroke-opacity=\"" + num(opacity) + "\"";
  body_ += " points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i > 0) body_ += ' ';
    body_ += num(points[i].first) + "," + num(points[i].second);
  }
  body_ += "\"/>\n";
}

void Builder::rect(double x, double y, double w, double h,
                   const std::string& fill, double opacity) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
           num(w) + "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void Builder::circle(double cx, double cy, double r, const std::string& fill,
                     double opacity) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
           num(r) + "\" fill=\"" + fill + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void Builder::text(double x, double y, const std::string& content,
                   double size, const std::string& anchor,
                   const std::string& fill) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) +
           "\" font-family=\"monospace\" font-size=\"" + num(size) +
           "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\">" +
           escape_xml(content) + "</text>\n";
}

std::string Builder::finish() {
  while (open_groups_ > 0) close_group();
  std::string out = std::move(body_);
  out += "</svg>\n";
  body_.clear();
  return out;
}

}  // namespace relux::svg
