/**
 * Copyright 2026 The ColorCode Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "colorcode/core/codes.hpp"
#include "colorcode/core/rgb8.hpp"

namespace colorcode::metrics {

struct DimensionHistogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::int64_t> counts;
  double mean = 0.0;
  double std = 0.0;  // population
};

struct CodeHistogram {
  std::int64_t samples = 0;
  std::vector<DimensionHistogram> dimensions;
};

// Per-dimension histogram of a set of color codes. Bin edges span the data
// range of each dimension unless `range` is given; a degenerate range is
// widened by 0.5 on either side.
CodeHistogram code_histograms(const std::vector<ColorCode>& codes, int bins,
                              std::optional<std::pair<double, double>> range = {});

nlohmann::json to_json(const CodeHistogram& h);

// Bar chart per dimension, four panels per row.
Rgb8Image render_histograms(const CodeHistogram& h);

// Writes <stem>.png and <stem>.json.
void write_histograms(const CodeHistogram& h, const std::filesystem::path& stem);

struct Region {
  std::optional<std::vector<std::uint8_t>> mask;  // H×W 0/1, row-major
  std::optional<std::pair<int, int>> center;      // (x, y)
  int radius = 0;                                 // 0 with a mask: whole mask
};

// Centroid of the largest k-means cluster (k = min(3, distinct colors)) of the
// pixels inside the region. With a mask the region is centered on the mask's
// center of mass.
std::array<std::uint8_t, 3> dominant_color(const Rgb8Image& img, const Region& region, std::uint64_t seed = 0);

}  // namespace colorcode::metrics
