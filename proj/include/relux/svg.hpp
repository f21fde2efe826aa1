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

#ifndef RELUX_SVG_HPP_
#define RELUX_SVG_HPP_

#include <string>
#include <utility>
#include <vector>

namespace relux::svg {

std::string escape_xml(const std::string& text);

// Stable palette keyed by rank; walks the hue circle by the golden angle
// so neighboring ranks stay distinguishable.
std::string color_for_rank(int rank);

// Minimal SVG document assembler. Every plotted series goes inside a
// titled group so artifacts stay inspectable without rendering.
class Builder {
 public:
  Builder(int width = 800, int height = 600);

  void open_group(const std::string& title);
  void close_group();

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double width = 1.0,
            double opacity = 1.0, bool dashed = false);
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke, double width = 1.0,
                double opacity = 1.0);
  void rect(double x, double y, double w, double h, const std::string& fill,
            double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill,
              double opacity = 1.0);
  void text(double x, double y, const std::string& content,
            double size = 12.0, const std::string& anchor = "start",
            const std::string& fill = "#333333");

  std::string finish();

 private:
  int width_;
  int height_;
  int open_groups_ = 0;
  std::string body_;
};

}  // namespace relux::svg

#endif  // RELUX_SVG_HPP_
