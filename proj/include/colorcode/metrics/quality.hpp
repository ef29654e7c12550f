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

#include "colorcode/core/rgb8.hpp"

namespace colorcode::metrics {

inline constexpr double kPsnrCap = 100.0;

// 10·log10(255² / MSE) over all channels; identical images give kPsnrCap.
double psnr(const Rgb8Image& a, const Rgb8Image& b);

// SSIM on ITU-R 601 luminance with an 11×11 Gaussian window (sigma 1.5),
// population statistics and C1 = (0.01·255)², C2 = (0.03·255)², averaged over
// the valid region.
double ssim(const Rgb8Image& a, const Rgb8Image& b);

struct UiqmParts {
  double uicm = 0.0;
  double uism = 0.0;
  double uiconm = 0.0;
  double uiqm = 0.0;
};

// Underwater image quality measure: 0.0282·UICM + 0.2953·UISM + 3.5753·UIConM.
// Colorfulness uses 10%/10% trimmed RG/YB means; sharpness is the Sobel-weighted
// EME over 10×10 blocks; contrast is the logAMEE over 10×10 blocks. Partial
// blocks at the right and bottom edges are dropped.
UiqmParts uiqm_parts(const Rgb8Image& img);
double uiqm(const Rgb8Image& img);

}  // namespace colorcode::metrics
