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

#include "colorcode/losses/mmd.hpp"

#include <array>
#include <cmath>
#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode::losses {

Kernel::Kernel(Kind kind, double scale) : kind_(kind), scale_(scale) {
  require(std::isfinite(scale) && scale > 0.0, "kernel scale must be positive");
}

Kernel Kernel::from_config(const TrainConfig& cfg) {
  const double c = 2.0 * cfg.code_length * cfg.prior_std * cfg.prior_std;
  return cfg.kernel == KernelKind::Imq ? imq(c) : rbf_mixture(c);
}

torch::Tensor Kernel::gram(const torch::Tensor& a, const torch::Tensor& b) const {
  require(a.dim() == 2 && b.dim() == 2 && a.size(1) == b.size(1), "kernel: expected n x K and m x K inputs");
  auto sq = (a.unsqueeze(1) - b.unsqueeze(0)).pow(2).sum(-1);
  switch (kind_) {
    case Kind::Imq:
      return scale_ / (scale_ + sq);
    case Kind::Gaussian:
      return torch::exp(-sq / scale_);
    case Kind::RbfMixture: {
      static constexpr std::array<double, 7> kScales = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
      torch::Tensor total = torch::zeros_like(sq);
      for (double s : kScales) total = total + torch::exp(-sq / (s * scale_));
      return total;
    }
  }
  return sq;
}

torch::Tensor mmd_loss(const torch::Tensor& codes, const torch::Tensor& prior_samples, const Kernel& kernel) {
  require(codes.dim() == 2 && prior_samples.dim() == 2, "mmd_loss: expected n x K code and prior matrices");
  require(codes.sizes() == prior_samples.sizes(), "mmd_loss: codes and prior samples must have equal shapes");
  const auto n = codes.size(0);
  require(n >= 2, "mmd_loss: need at least 2 samples, got " + std::to_string(n));
  const double nn = static_cast<double>(n);

  auto k_mm = kernel.gram(codes, codes);
  auto k_zz = kernel.gram(prior_samples, prior_samples);
  auto k_mz = kernel.gram(codes, prior_samples);
  auto off_mm = k_mm.sum() - k_mm.diagonal().sum();
  auto off_zz = k_zz.sum() - k_zz.diagonal().sum();
  return (off_mm + off_zz) / (nn * nn - nn) - 2.0 / (nn * nn) * k_mz.sum();
}

}  // namespace colorcode::losses
