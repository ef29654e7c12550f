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

#include <cstddef>
#include <span>
#include <vector>

#include <torch/torch.h>

namespace colorcode {

// Fixed-length latent vector. Tag separates color codes from style codes
// so the two cannot be swapped by accident.
template <typename Tag>
class LatentVector {
 public:
  LatentVector() = default;
  explicit LatentVector(std::vector<double> values);

  // From a 1-D tensor (or 1×K row) of any floating dtype.
  static LatentVector from_tensor(const torch::Tensor& t);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // 1×K tensor for decoder input.
  torch::Tensor to_tensor(torch::ScalarType dtype = torch::kFloat32) const;

  bool operator==(const LatentVector&) const = default;

 private:
  std::vector<double> values_;
};

struct ColorTag {};
struct StyleTag {};

using ColorCode = LatentVector<ColorTag>;
using StyleCode = LatentVector<StyleTag>;

// K_c × H/4 × W/4 feature map.
class ContentCode {
 public:
  explicit ContentCode(torch::Tensor values);

  const torch::Tensor& tensor() const { return values_; }
  int channels() const { return static_cast<int>(values_.size(0)); }
  int height() const { return static_cast<int>(values_.size(1)); }
  int width() const { return static_cast<int>(values_.size(2)); }

 private:
  torch::Tensor values_;
};

extern template class LatentVector<ColorTag>;
extern template class LatentVector<StyleTag>;

}  // namespace colorcode
