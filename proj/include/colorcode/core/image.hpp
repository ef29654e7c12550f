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

#include <torch/torch.h>

#include "colorcode/core/rgb8.hpp"

namespace colorcode {

// A 3×H×W floating-point image with values in [-1, 1]. H and W are divisible
// by 4 so the content code has an integral H/4 × W/4 grid.
class ImageTensor {
 public:
  // Validates shape, divisibility, finiteness and range. Accepts a 3×H×W
  // tensor of any floating dtype; the tensor is detached and made contiguous.
  explicit ImageTensor(torch::Tensor data);

  const torch::Tensor& tensor() const { return data_; }
  int height() const { return static_cast<int>(data_.size(1)); }
  int width() const { return static_cast<int>(data_.size(2)); }

  // 1×3×H×W view for network input.
  torch::Tensor batched() const { return data_.unsqueeze(0); }

 private:
  torch::Tensor data_;
};

// raw / 127.5 - 1, elementwise.
ImageTensor normalize_image(const Rgb8Image& raw);

// round_half_up((img + 1) * 127.5), clamped to [0, 255].
Rgb8Image denormalize_image(const ImageTensor& img);

// Same mapping for a tensor that may sit slightly outside [-1, 1]
// (e.g. float round-off from tanh); values are clamped.
Rgb8Image tensor_to_rgb8(const torch::Tensor& chw);

}  // namespace colorcode
