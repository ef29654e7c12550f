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

#include <vector>

#include <torch/torch.h>

#include "colorcode/core/image.hpp"

namespace colorcode::losses {

// Probability clamp applied before every log in the adversarial terms.
inline constexpr double kLogEpsilon = 1e-7;

// Mean SSIM over the valid region of an 11×11 Gaussian window (sigma 1.5),
// computed per channel and averaged. Inputs are N×C×H×W with H, W >= 11;
// data_range is max - min of the value domain (2 for normalized images).
torch::Tensor structure_similarity(const torch::Tensor& a, const torch::Tensor& b, double data_range = 2.0);
double structure_similarity(const ImageTensor& a, const ImageTensor& b);

// MSE(y_hat, y) - SSIM(y_hat, y); the SSIM term is dropped when
// structure_enabled is false.
torch::Tensor enhancement_loss(const torch::Tensor& y_hat, const torch::Tensor& y, bool structure_enabled = true);

// |x_rec - x|_1 + |y_rec - y|_1, each a per-element mean.
torch::Tensor self_reconstruction_loss(const torch::Tensor& x_rec, const torch::Tensor& x, const torch::Tensor& y_rec,
                                       const torch::Tensor& y);

// Mean absolute error between the content codes and their re-encodings after
// cross decoding, summed over both directions.
torch::Tensor content_code_reconstruction_loss(const torch::Tensor& c_x, const torch::Tensor& c_x_reencoded,
                                               const torch::Tensor& c_y, const torch::Tensor& c_y_reencoded);

// Same for the sampled style vectors.
torch::Tensor style_code_reconstruction_loss(const torch::Tensor& s_x, const torch::Tensor& s_x_reencoded,
                                             const torch::Tensor& s_y, const torch::Tensor& s_y_reencoded);

// -[mean log D(real) + mean log(1 - D(fake))], averaged over scales.
torch::Tensor adversarial_loss_discriminator(const std::vector<torch::Tensor>& real_scores,
                                             const std::vector<torch::Tensor>& fake_scores);

// Non-saturating generator term -mean log D(fake), averaged over scales.
torch::Tensor adversarial_loss_generator(const std::vector<torch::Tensor>& fake_scores);

}  // namespace colorcode::losses
