// Copyright 2026 The Fingerkin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fingerkin::cli {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMargin = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string SvgPlot(const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y0) / (y1 - y0) * plot_h;
  };

  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         Escape(title) + "</text>\n";
  out += "<rect x=\"" + Num(kMargin) + "\" y=\"" + Num(kMargin) + "\" width=\"" +
         Num(plot_w) + "\" height=\"" + Num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"320\" y=\"" + Num(kHeight - 15) +
         "\" text-anchor=\"middle\">" + Escape(x_label) + "</text>\n";
  out += "<text x=\"15\" y=\"240\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 15 240)\">" +
         Escape(y_label) + "</text>\n";
  const double bottom = kHeight - kMargin;
  out += "<text x=\"" + Num(kMargin) + "\" y=\"" + Num(bottom + 16) +
         "\" text-anchor=\"middle\">" + Num(x0) + "</text>\n";
  out += "<text x=\"" + Num(kWidth - kMargin) + "\" y=\"" + Num(bottom + 16) +
         "\" text-anchor=\"middle\">" + Num(x1) + "</text>\n";
  out += "<text x=\"" + Num(kMargin - 4) + "\" y=\"" + Num(bottom) +
         "\" text-anchor=\"end\">" + Num(y0) + "</text>\n";
  out += "<text x=\"" + Num(kMargin - 4) + "\" y=\"" + Num(kMargin + 4) +
         "\" text-anchor=\"end\">" + Num(y1) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = kColors[i % std::size(kColors)];
    if (s.line) {
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"";
      for (const auto& [x, y] : s.points) {
        if (std::isfinite(x) && std::isfinite(y)) {
          out += Num(px(x)) + "," + Num(py(y)) + " ";
        }
      }
      out += "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out += "<circle cx=\"" + Num(px(x)) + "\" cy=\"" + Num(py(y)) +
               "\" r=\"1.5\" fill=\"" + color + "\"/>\n";
      }
    }
    const double ly = kMargin + 16 + 16 * static_cast<double>(i);
    out += "<text x=\"" + Num(kWidth - kMargin - 6) + "\" y=\"" + Num(ly) +
           "\" text-anchor=\"end\" fill=\"" + color + "\">" + Escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fingerkin::cli
