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

#include "colorcode/core/config.hpp"

namespace colorcode::losses {

// Positive-definite kernel on code vectors.
//   Imq:        C / (C + |a-b|^2)
//   RbfMixture: sum over s in {0.1, 0.2, 0.5, 1, 2, 5, 10} of exp(-|a-b|^2 / (s C))
//   Gaussian:   exp(-|a-b|^2 / C)
// For the configured kernels C = 2 * K_m * sigma^2.
class Kernel {
 public:
  enum class Kind { Imq, RbfMixture, Gaussian };

  static Kernel imq(double scale) { return Kernel(Kind::Imq, scale); }
  static Kernel rbf_mixture(double scale) { return Kernel(Kind::RbfMixture, scale); }
  static Kernel gaussian(double bandwidth) { return Kernel(Kind::Gaussian, bandwidth); }
  static Kernel from_config(const TrainConfig& cfg);

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }

  // n×K, m×K -> n×m Gram matrix.
  torch::Tensor gram(const torch::Tensor& a, const torch::Tensor& b) const;

 private:
  Kernel(Kind kind, double scale);

  Kind kind_;
  double scale_;
};

// Unbiased MMD^2 estimate between encoded codes and prior samples (both n×K):
//   1/(n^2-n) [sum_{l!=j} k(m_l,m_j) + sum_{l!=j} k(z_l,z_j)] - 2/n^2 sum_{l,j} k(m_l,z_j)
// Requires n >= 2. May be negative. Differentiable w.r.t. both inputs.
torch::Tensor mmd_loss(const torch::Tensor& codes, const torch::Tensor& prior_samples, const Kernel& kernel);

}  // namespace colorcode::losses
