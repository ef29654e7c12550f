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

#include "colorcode/metrics/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "colorcode/core/error.hpp"
#include "colorcode/io/image_io.hpp"

namespace colorcode::metrics {

CodeHistogram code_histograms(const std::vector<ColorCode>& codes, int bins,
                              std::optional<std::pair<double, double>> range) {
  require(!codes.empty(), "code_histograms: no codes given");
  require(codes.size() >= 2, "code_histograms: need at least 2 codes");
  require(bins >= 1, "code_histograms: bins must be positive");
  const auto dims = codes.front().size();
  require(dims > 0, "code_histograms: empty codes");
  for (const auto& c : codes) require(c.size() == dims, "code_histograms: codes differ in length");
  if (range) require(range->first < range->second, "code_histograms: range must be increasing");

  CodeHistogram out;
  out.samples = static_cast<std::int64_t>(codes.size());
  const double n = static_cast<double>(codes.size());
  for (std::size_t d = 0; d < dims; ++d) {
    DimensionHistogram h;
    double lo = codes.front()[d], hi = lo, sum = 0.0;
    for (const auto& c : codes) {
      lo = std::min(lo, c[d]);
      hi = std::max(hi, c[d]);
      sum += c[d];
    }
    h.mean = sum / n;
    double sq = 0.0;
    for (const auto& c : codes) sq += (c[d] - h.mean) * (c[d] - h.mean);
    h.std = std::sqrt(sq / n);
    if (range) {
      lo = range->first;
      hi = range->second;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (const auto& c : codes) {
      auto b = static_cast<long>(std::floor((c[d] - lo) / (hi - lo) * bins));
      h.counts[static_cast<std::size_t>(std::clamp<long>(b, 0, bins - 1))]++;
    }
    out.dimensions.push_back(std::move(h));
  }
  return out;
}

nlohmann::json to_json(const CodeHistogram& h) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& d : h.dimensions) {
    dims.push_back({{"edges", d.edges}, {"counts", d.counts}, {"mean", d.mean}, {"std", d.std}});
  }
  return {{"samples", h.samples}, {"dimensions", dims}};
}

Rgb8Image render_histograms(const CodeHistogram& h) {
  constexpr int kPanelW = 200, kPanelH = 120, kPad = 10, kCols = 4;
  const int n = static_cast<int>(h.dimensions.size());
  const int cols = std::min(kCols, n);
  const int rows = (n + kCols - 1) / kCols;
  cv::Mat canvas(rows * kPanelH, cols * kPanelW, CV_8UC3, cv::Scalar(255, 255, 255));
  for (int d = 0; d < n; ++d) {
    const auto& dim = h.dimensions[static_cast<std::size_t>(d)];
    const int ox = (d % kCols) * kPanelW, oy = (d / kCols) * kPanelH;
    const auto peak = std::max<std::int64_t>(1, *std::max_element(dim.counts.begin(), dim.counts.end()));
    const double bar_w = static_cast<double>(kPanelW - 2 * kPad) / static_cast<double>(dim.counts.size());
    const int base = oy + kPanelH - kPad;
    for (std::size_t b = 0; b < dim.counts.size(); ++b) {
      const int x0 = ox + kPad + static_cast<int>(std::lround(b * bar_w));
      const int x1 = ox + kPad + static_cast<int>(std::lround((b + 1) * bar_w)) - 1;
      const int height = static_cast<int>(std::lround((kPanelH - 3 * kPad) * static_cast<double>(dim.counts[b]) / peak));
      if (height > 0) cv::rectangle(canvas, {x0, base - height}, {std::max(x0, x1), base}, {180, 110, 40}, cv::FILLED);
    }
    cv::line(canvas, {ox + kPad, base}, {ox + kPanelW - kPad, base}, {0, 0, 0});
    cv::putText(canvas, "dim " + std::to_string(d), {ox + kPad, oy + 2 * kPad}, cv::FONT_HERSHEY_SIMPLEX, 0.4,
                {0, 0, 0});
  }
  Rgb8Image out(canvas.cols, canvas.rows);
  for (int y = 0; y < canvas.rows; ++y) {
    for (int x = 0; x < canvas.cols; ++x) {
      const auto& px = canvas.at<cv::Vec3b>(y, x);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = px[2 - c];
    }
  }
  return out;
}

void write_histograms(const CodeHistogram& h, const std::filesystem::path& stem) {
  io::write_png(std::filesystem::path(stem.string() + ".png"), render_histograms(h));
  std::ofstream out(stem.string() + ".json");
  if (!out) fail(ErrorKind::Io, "cannot write " + stem.string() + ".json");
  out << to_json(h).dump(2) << '\n';
}

std::array<std::uint8_t, 3> dominant_color(const Rgb8Image& img, const Region& region, std::uint64_t seed) {
  require(img.channels == 3 && img.width > 0 && img.height > 0, "dominant_color: expected a color image");
  require(region.mask || region.center, "dominant_color: region needs a mask or a center");
  const auto npx = static_cast<std::size_t>(img.width) * img.height;
  double cx = 0.0, cy = 0.0;
  if (region.mask) {
    require(region.mask->size() == npx, "dominant_color: mask does not match the image size");
    std::size_t count = 0;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        if ((*region.mask)[static_cast<std::size_t>(y) * img.width + x]) {
          cx += x;
          cy += y;
          ++count;
        }
      }
    }
    if (count == 0) fail(ErrorKind::InvalidArgument, "dominant_color: region is empty");
    cx /= static_cast<double>(count);
    cy /= static_cast<double>(count);
  } else {
    cx = region.center->first;
    cy = region.center->second;
  }
  const double r2 = static_cast<double>(region.radius) * region.radius;
  std::vector<cv::Vec3f> samples;
  std::set<int> distinct;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (region.mask && !(*region.mask)[static_cast<std::size_t>(y) * img.width + x]) continue;
      const bool radius_applies = !region.mask || region.radius > 0;
      if (radius_applies && (x - cx) * (x - cx) + (y - cy) * (y - cy) > r2) continue;
      const int r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
      samples.emplace_back(static_cast<float>(r), static_cast<float>(g), static_cast<float>(b));
      distinct.insert((r << 16) | (g << 8) | b);
    }
  }
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "dominant_color: region is empty");

  const int k = std::min<int>(3, static_cast<int>(distinct.size()));
  cv::Mat data(static_cast<int>(samples.size()), 3, CV_32F, samples.data());
  cv::Mat labels, centers;
  cv::theRNG().state = seed == 0 ? 0x12345 : seed;
  cv::kmeans(data, k, labels, cv::TermCriteria(cv::TermCriteria::EPS + cv::TermCriteria::COUNT, 100, 1e-3), 3,
             cv::KMEANS_PP_CENTERS, centers);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < labels.rows; ++i) sizes[static_cast<std::size_t>(labels.at<int>(i))]++;
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    out[static_cast<std::size_t>(c)] =
        static_cast<std::uint8_t>(std::clamp(std::lround(centers.at<float>(best, c)), 0L, 255L));
  }
  return out;
}

}  // namespace colorcode::metrics
