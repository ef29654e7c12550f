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

#include "colorcode/core/codes.hpp"

#include <cmath>
#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode {

template <typename Tag>
LatentVector<Tag>::LatentVector(std::vector<double> values) : values_(std::move(values)) {
  require(!values_.empty(), "latent code is empty");
  for (double v : values_) {
    require(std::isfinite(v), "latent code contains a non-finite entry");
  }
}

template <typename Tag>
LatentVector<Tag> LatentVector<Tag>::from_tensor(const torch::Tensor& t) {
  require(t.dim() == 1 || (t.dim() == 2 && t.size(0) == 1), "latent code tensor must be 1-D or 1 x K");
  auto flat = t.detach().reshape({-1}).to(torch::kFloat64).contiguous();
  const double* p = flat.data_ptr<double>();
  return LatentVector(std::vector<double>(p, p + flat.numel()));
}

template <typename Tag>
torch::Tensor LatentVector<Tag>::to_tensor(torch::ScalarType dtype) const {
  auto t = torch::from_blob(const_cast<double*>(values_.data()), {1, static_cast<long>(values_.size())},
                            torch::kFloat64);
  return t.to(dtype);
}

template class LatentVector<ColorTag>;
template class LatentVector<StyleTag>;

ContentCode::ContentCode(torch::Tensor values) {
  require(values.dim() == 3, "content code must be K_c x H/4 x W/4, got " + std::to_string(values.dim()) + " dims");
  values_ = std::move(values);
}

}  // namespace colorcode
