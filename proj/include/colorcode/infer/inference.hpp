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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "colorcode/core/codes.hpp"
#include "colorcode/core/image.hpp"
#include "colorcode/nn/bundle.hpp"

namespace colorcode::infer {

// Elementwise clamp to [-tau, tau].
std::vector<double> truncate(std::span<const double> v, double tau);
ColorCode truncate(const ColorCode& code, double tau);

// ((1 - alpha) * m_x + alpha * truncate(m_g, tau)) / sqrt((1 - alpha)^2 + alpha^2)
ColorCode fuse_codes(const ColorCode& m_x, const ColorCode& m_g, double alpha, double tau);

// H×W map of 0/1 values, row-major.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  BinaryMask() = default;
  BinaryMask(int w, int h, std::vector<std::uint8_t> v);
  std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct AdaptationRequest {
  ImageTensor x;
  ImageTensor guidance;
  double alpha = 0.0;
  std::optional<BinaryMask> mask;
};

struct InterpolationRequest {
  ImageTensor x;
  std::vector<double> z;
  double alpha = 0.5;
};

struct GridCell {
  std::vector<double> z;
  ImageTensor image;
  bool fixed_enhancement = false;  // z is the zero vector
};

struct InterpolationGrid {
  int steps = 0;
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.5;
  std::vector<std::vector<GridCell>> cells;  // cells[i][j]: z = (value(i), value(j))
};

// Grid coordinate i of `steps` equally spaced values over [lo, hi].
double grid_value(int i, int steps, double lo, double hi);

// Enhancement, adaptation and interpolation over a read-only bundle. Safe to
// share across threads.
class Enhancer {
 public:
  // truncation_tau defaults to the bundle config's value.
  explicit Enhancer(std::shared_ptr<const nn::NetworkBundle> bundle, std::optional<double> truncation_tau = {});

  ImageTensor enhance(const ImageTensor& x) const;
  ImageTensor adapt(const AdaptationRequest& req) const;
  ImageTensor interpolate(const InterpolationRequest& req) const;
  InterpolationGrid interpolation_grid(const ImageTensor& x, int steps, double lo, double hi,
                                       double alpha = 0.5) const;

  ColorCode color_code(const ImageTensor& x) const;
  ImageTensor decode(const ImageTensor& x, const ColorCode& m) const;

  int code_length() const { return bundle_->config().code_length; }
  double truncation_tau() const { return tau_; }
  const nn::NetworkBundle& bundle() const { return *bundle_; }

 private:
  std::shared_ptr<const nn::NetworkBundle> bundle_;
  double tau_;
};

}  // namespace colorcode::infer
