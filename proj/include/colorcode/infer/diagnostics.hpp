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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "colorcode/core/rgb8.hpp"
#include "colorcode/infer/inference.hpp"

namespace colorcode::infer {

// Saturation-weighted circular mean hue (degrees) of the guidance before and
// after the enhancement path, and their signed difference in (-180, 180].
struct HueShiftReport {
  double hue_before = 0.0;
  double hue_after = 0.0;
  double shift = 0.0;
  double mean_saturation = 0.0;  // of the guidance, in [0, 1]
};

double mean_hue(const Rgb8Image& img, double* mean_saturation = nullptr);
HueShiftReport hue_shift(const Enhancer& enhancer, const Rgb8Image& guidance);

struct AlphaSweepEntry {
  double alpha = 0.0;
  double uiqm = 0.0;
  double uiqm_delta = 0.0;    // against alpha = 0
  double mean_abs_diff = 0.0;  // 8-bit units, against alpha = 0
};

// Adapts x toward g for each alpha and scores the results.
std::vector<AlphaSweepEntry> alpha_sweep(const Enhancer& enhancer, const Rgb8Image& x, const Rgb8Image& g,
                                         const std::vector<double>& alphas);

nlohmann::json to_json(const HueShiftReport& r);
nlohmann::json to_json(const std::vector<AlphaSweepEntry>& sweep);

// Color codes of every image in `root` (or root/input for a paired dataset),
// each resized to short side image_size and center-cropped. Unreadable files
// are skipped and logged.
std::vector<ColorCode> collect_color_codes(const Enhancer& enhancer, const std::filesystem::path& root,
                                           int image_size);

// Candidate guidance images in a directory.
struct GuidancePool {
  std::filesystem::path root;
  std::vector<std::filesystem::path> images;  // sorted
};

GuidancePool load_guidance_pool(const std::filesystem::path& root);

// Hue-shift diagnostic for every pool entry, keyed by filename.
nlohmann::json pool_diagnostics(const Enhancer& enhancer, const GuidancePool& pool, int image_size);

}  // namespace colorcode::infer
