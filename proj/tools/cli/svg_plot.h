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

// Small static SVG charts for quick inspection of command output.

#ifndef FINGERKIN_TOOLS_CLI_SVG_PLOT_H_
#define FINGERKIN_TOOLS_CLI_SVG_PLOT_H_

#include <string>
#include <utility>
#include <vector>

namespace fingerkin::cli {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  // Polyline when true, dots otherwise.
  bool line = true;
};

std::string SvgPlot(const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace fingerkin::cli

#endif  // FINGERKIN_TOOLS_CLI_SVG_PLOT_H_
