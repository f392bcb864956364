// Copyright 2026 The avplan Authors
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

#include "avplan/svg.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace avplan {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 80.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_front_svg(std::span<const RiskProfile> front,
                             std::string_view title) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  int c_lo = 0;
  int c_hi = 1;
  double cost_lo = 0.0;
  double cost_hi = 1.0;
  if (!front.empty()) {
    auto [cmin, cmax] = std::minmax_element(
        front.begin(), front.end(),
        [](const auto& a, const auto& b) { return a.plan.c < b.plan.c; });
    auto [kmin, kmax] = std::minmax_element(
        front.begin(), front.end(),
        [](const auto& a, const auto& b) { return a.cost < b.cost; });
    c_lo = cmin->plan.c;
    c_hi = std::max(cmax->plan.c, c_lo + 1);
    cost_lo = kmin->cost;
    cost_hi = kmax->cost > cost_lo ? kmax->cost : cost_lo + 1.0;
  }
  auto sx = [&](double c) { return kLeft + (c - c_lo) / (c_hi - c_lo) * plot_w; };
  auto sy = [&](double p) { return kTop + (1.0 - p) * plot_h; };
  auto sy_cost = [&](double v) {
    return kTop + (1.0 - (v - cost_lo) / (cost_hi - cost_lo)) * plot_h;
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));

  // Axes frame and ticks.
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);
  for (int i = 0; i <= 5; ++i) {
    const double p = i / 5.0;
    const double y = sy(p);
    const double cost = cost_lo + p * (cost_hi - cost_lo);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5:.1f}</text>\n"
        "<text x=\"{6}\" y=\"{4}\">{7:.0f}</text>\n",
        kLeft, y, kLeft + plot_w, kLeft - 6, y + 4, p, kLeft + plot_w + 6, cost);
  }
  const int span = c_hi - c_lo;
  const int step = std::max(1, span / 10);
  for (int c = c_lo; c <= c_hi; c += step) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       sx(c), kTop + plot_h + 18, c);
  }
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">maximum allowable failures "
      "c</text>\n"
      "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      "{})\">PR / AP</text>\n"
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(90 {} "
      "{})\">test cost (days)</text>\n",
      kLeft + plot_w / 2, kHeight - 20, kTop + plot_h / 2, kTop + plot_h / 2,
      kWidth - 20, kTop + plot_h / 2, kWidth - 20, kTop + plot_h / 2);

  // Series.
  std::string pr_line;
  std::string ap_line;
  std::string cost_line;
  std::string marks;
  for (const auto& p : front) {
    const double x = sx(p.plan.c);
    pr_line += fmt::format("{:.2f},{:.2f} ", x, sy(p.pr));
    ap_line += fmt::format("{:.2f},{:.2f} ", x, sy(p.ap));
    cost_line += fmt::format("{:.2f},{:.2f} ", x, sy_cost(p.cost));
    marks += fmt::format(
        "<circle cx=\"{0:.2f}\" cy=\"{1:.2f}\" r=\"3\" fill=\"#d62728\"/>\n"
        "<rect x=\"{2:.2f}\" y=\"{3:.2f}\" width=\"6\" height=\"6\" "
        "fill=\"#1f77b4\"/>\n"
        "<path d=\"M {0:.2f} {4:.2f} l 4 7 l -8 0 z\" fill=\"#2ca02c\"/>\n",
        x, sy(p.pr), x - 3, sy(p.ap) - 3, sy_cost(p.cost) - 4);
  }
  svg += fmt::format(
      "<polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\"/>\n"
      "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\"/>\n"
      "<polyline points=\"{}\" fill=\"none\" stroke=\"#2ca02c\" "
      "stroke-dasharray=\"4 3\"/>\n",
      pr_line, ap_line, cost_line);
  svg += marks;

  // Legend.
  const double lx = kLeft + 10;
  const double ly = kTop + 10;
  svg += fmt::format(
      "<rect x=\"{0}\" y=\"{1}\" width=\"130\" height=\"62\" fill=\"white\" "
      "stroke=\"#999\"/>\n"
      "<circle cx=\"{2}\" cy=\"{3}\" r=\"4\" fill=\"#d62728\"/>"
      "<text x=\"{4}\" y=\"{5}\">PR</text>\n"
      "<rect x=\"{6}\" y=\"{7}\" width=\"8\" height=\"8\" fill=\"#1f77b4\"/>"
      "<text x=\"{4}\" y=\"{8}\">AP</text>\n"
      "<path d=\"M {2} {9} l 4 7 l -8 0 z\" fill=\"#2ca02c\"/>"
      "<text x=\"{4}\" y=\"{10}\">cost (right axis)</text>\n",
      lx, ly, lx + 12, ly + 14, lx + 24, ly + 18, lx + 8, ly + 28, ly + 36,
      ly + 42, ly + 54);
  svg += "</svg>\n";
  return svg;
}

}  // namespace avplan
