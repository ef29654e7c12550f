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

#include "colorcode/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "invalid_argument";
    case ErrorKind::Conflict:
      return "conflict";
    case ErrorKind::NotFound:
      return "not_found";
    case ErrorKind::Corrupt:
      return "corrupt";
    case ErrorKind::NumericalFailure:
      return "numerical_failure";
    case ErrorKind::Io:
      return "io_error";
  }
  return "unknown";
}

ImageTensor::ImageTensor(torch::Tensor data) {
  require(data.defined(), "image tensor is undefined");
  require(data.dim() == 3, "image tensor must be 3-D (channels x height x width), got " +
                               std::to_string(data.dim()) + " dims");
  require(data.size(0) == 3, "image tensor must have 3 channels, got " + std::to_string(data.size(0)));
  require(data.is_floating_point(), "image tensor must be floating point");
  const auto h = data.size(1);
  const auto w = data.size(2);
  require(h > 0 && w > 0, "image tensor has an empty spatial extent");
  require(h % 4 == 0 && w % 4 == 0, "image height and width must be divisible by 4, got " + std::to_string(h) +
                                        "x" + std::to_string(w));
  data = data.detach().contiguous();
  require(torch::isfinite(data).all().item<bool>(), "image tensor contains non-finite values");
  require(data.abs().max().item<double>() <= 1.0, "image tensor values must lie in [-1, 1]");
  data_ = std::move(data);
}

ImageTensor normalize_image(const Rgb8Image& raw) {
  require(raw.channels == 3, "expected a 3-channel RGB image, got " + std::to_string(raw.channels) + " channels");
  require(raw.pixels.size() == static_cast<std::size_t>(raw.width) * raw.height * 3,
          "pixel buffer size does not match image dimensions");
  auto hwc = torch::from_blob(const_cast<std::uint8_t*>(raw.pixels.data()), {raw.height, raw.width, 3}, torch::kUInt8);
  auto chw = hwc.permute({2, 0, 1}).to(torch::kFloat32).div(127.5).sub(1.0);
  return ImageTensor(chw);
}

Rgb8Image tensor_to_rgb8(const torch::Tensor& chw) {
  require(chw.dim() == 3 && chw.size(0) == 3, "expected a 3 x H x W tensor");
  const int h = static_cast<int>(chw.size(1));
  const int w = static_cast<int>(chw.size(2));
  auto values = chw.detach().to(torch::kFloat64).contiguous();
  auto acc = values.accessor<double, 3>();
  Rgb8Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = std::floor((acc[c][y][x] + 1.0) * 127.5 + 0.5);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return out;
}

Rgb8Image denormalize_image(const ImageTensor& img) { return tensor_to_rgb8(img.tensor()); }

}  // namespace colorcode
