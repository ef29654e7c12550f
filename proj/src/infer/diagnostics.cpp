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

#include "colorcode/infer/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "colorcode/core/error.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/metrics/quality.hpp"

namespace colorcode::infer {

namespace {

ImageTensor fit(const Rgb8Image& img, int size) {
  int w = img.width - img.width % 4, h = img.height - img.height % 4;
  if (size > 0) w = h = size;
  if (w == img.width && h == img.height) return normalize_image(img);
  if (size > 0) return normalize_image(io::resize(img, w, h));
  return normalize_image(io::crop(img, 0, 0, w, h));
}

}  // namespace

double mean_hue(const Rgb8Image& img, double* mean_saturation) {
  require(img.channels == 3, "mean_hue: expected a color image");
  cv::Mat rgb(img.height, img.width, CV_8UC3, const_cast<std::uint8_t*>(img.pixels.data()));
  cv::Mat f, hsv;
  rgb.convertTo(f, CV_32F, 1.0 / 255.0);
  cv::cvtColor(f, hsv, cv::COLOR_RGB2HSV);
  double sx = 0.0, sy = 0.0, sat = 0.0;
  for (int y = 0; y < hsv.rows; ++y) {
    for (int x = 0; x < hsv.cols; ++x) {
      const auto& px = hsv.at<cv::Vec3f>(y, x);
      const double rad = px[0] * M_PI / 180.0;
      sx += px[1] * std::cos(rad);
      sy += px[1] * std::sin(rad);
      sat += px[1];
    }
  }
  if (mean_saturation) *mean_saturation = sat / static_cast<double>(hsv.total());
  double deg = std::atan2(sy, sx) * 180.0 / M_PI;
  return deg < 0.0 ? deg + 360.0 : deg;
}

HueShiftReport hue_shift(const Enhancer& enhancer, const Rgb8Image& guidance) {
  const auto input = fit(guidance, 0);
  const auto before = denormalize_image(input);
  const auto after = tensor_to_rgb8(enhancer.enhance(input).tensor());
  HueShiftReport r;
  r.hue_before = mean_hue(before, &r.mean_saturation);
  r.hue_after = mean_hue(after);
  r.shift = std::remainder(r.hue_after - r.hue_before, 360.0);
  if (r.shift == -180.0) r.shift = 180.0;
  return r;
}

std::vector<AlphaSweepEntry> alpha_sweep(const Enhancer& enhancer, const Rgb8Image& x, const Rgb8Image& g,
                                         const std::vector<double>& alphas) {
  const auto xt = fit(x, 0);
  const auto gt = fit(g, 0);
  const auto base = tensor_to_rgb8(enhancer.enhance(xt).tensor());
  const double base_uiqm = metrics::uiqm(base);
  std::vector<AlphaSweepEntry> out;
  for (double a : alphas) {
    const auto img = tensor_to_rgb8(enhancer.adapt({xt, gt, a, std::nullopt}).tensor());
    AlphaSweepEntry e{a, metrics::uiqm(img), 0.0, 0.0};
    e.uiqm_delta = e.uiqm - base_uiqm;
    double diff = 0.0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) diff += std::abs(int(img.pixels[i]) - int(base.pixels[i]));
    e.mean_abs_diff = diff / static_cast<double>(img.pixels.size());
    out.push_back(e);
  }
  return out;
}

nlohmann::json to_json(const HueShiftReport& r) {
  return {{"hue_before", r.hue_before},
          {"hue_after", r.hue_after},
          {"shift", r.shift},
          {"mean_saturation", r.mean_saturation}};
}

nlohmann::json to_json(const std::vector<AlphaSweepEntry>& sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : sweep) {
    out.push_back({{"alpha", e.alpha},
                   {"uiqm", e.uiqm},
                   {"uiqm_delta", e.uiqm_delta},
                   {"mean_abs_diff", e.mean_abs_diff}});
  }
  return out;
}

std::vector<ColorCode> collect_color_codes(const Enhancer& enhancer, const std::filesystem::path& root,
                                           int image_size) {
  const auto dir = std::filesystem::is_directory(root / "input") ? root / "input" : root;
  if (!std::filesystem::is_directory(dir)) fail(ErrorKind::NotFound, "dataset not found: " + root.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ColorCode> codes;
  for (const auto& f : files) {
    try {
      codes.push_back(enhancer.color_code(normalize_image(io::center_square(io::read_image(f), image_size))));
    } catch (const Error& e) {
      log::warn("code_sample_skipped", {{"path", f.string()}, {"reason", e.what()}});
    }
  }
  if (codes.empty()) fail(ErrorKind::InvalidArgument, "no readable images under " + dir.string());
  return codes;
}

GuidancePool load_guidance_pool(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) fail(ErrorKind::NotFound, "guidance pool not found: " + root.string());
  GuidancePool pool{root, {}};
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) {
      pool.images.push_back(entry.path());
    }
  }
  std::sort(pool.images.begin(), pool.images.end());
  if (pool.images.empty()) fail(ErrorKind::InvalidArgument, "guidance pool " + root.string() + " is empty");
  return pool;
}

nlohmann::json pool_diagnostics(const Enhancer& enhancer, const GuidancePool& pool, int image_size) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& path : pool.images) {
    const auto img = io::read_image(path);
    const auto input = fit(img, image_size);
    out[path.filename().string()] = to_json(hue_shift(enhancer, denormalize_image(input)));
  }
  return out;
}

}  // namespace colorcode::infer
