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

#include "colorcode/losses/losses.hpp"

#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode::losses {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

torch::Tensor gaussian_window(int channels, torch::ScalarType dtype) {
  auto coords = torch::arange(kWindow, torch::TensorOptions().dtype(torch::kFloat64)) - (kWindow - 1) / 2.0;
  auto g = torch::exp(-coords.pow(2) / (2.0 * kSigma * kSigma));
  g = g / g.sum();
  auto w2d = torch::outer(g, g);
  return w2d.expand({channels, 1, kWindow, kWindow}).contiguous().to(dtype);
}

void require_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  require(a.sizes() == b.sizes(), std::string(what) + ": shape mismatch");
}

}  // namespace

torch::Tensor structure_similarity(const torch::Tensor& a, const torch::Tensor& b, double data_range) {
  require_same_shape(a, b, "structure_similarity");
  require(a.dim() == 4, "structure_similarity: expected N x C x H x W tensors");
  require(a.size(2) >= kWindow && a.size(3) >= kWindow,
          "structure_similarity: images must be at least 11x11, got " + std::to_string(a.size(2)) + "x" +
              std::to_string(a.size(3)));
  const auto channels = a.size(1);
  const auto window = gaussian_window(static_cast<int>(channels), a.scalar_type());
  auto filter = [&](const torch::Tensor& t) {
    return torch::nn::functional::conv2d(t, window, torch::nn::functional::Conv2dFuncOptions().groups(channels));
  };
  const double c1 = (0.01 * data_range) * (0.01 * data_range);
  const double c2 = (0.03 * data_range) * (0.03 * data_range);

  auto mu_a = filter(a);
  auto mu_b = filter(b);
  auto var_a = filter(a * a) - mu_a * mu_a;
  auto var_b = filter(b * b) - mu_b * mu_b;
  auto cov = filter(a * b) - mu_a * mu_b;
  auto ssim_map = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                  ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
  return ssim_map.mean();
}

double structure_similarity(const ImageTensor& a, const ImageTensor& b) {
  torch::NoGradGuard no_grad;
  return structure_similarity(a.batched().to(torch::kFloat64), b.batched().to(torch::kFloat64), 2.0).item<double>();
}

torch::Tensor enhancement_loss(const torch::Tensor& y_hat, const torch::Tensor& y, bool structure_enabled) {
  require_same_shape(y_hat, y, "enhancement_loss");
  auto loss = torch::mse_loss(y_hat, y);
  if (structure_enabled) loss = loss - structure_similarity(y_hat, y, 2.0);
  return loss;
}

torch::Tensor self_reconstruction_loss(const torch::Tensor& x_rec, const torch::Tensor& x, const torch::Tensor& y_rec,
                                       const torch::Tensor& y) {
  require_same_shape(x_rec, x, "self_reconstruction_loss (x)");
  require_same_shape(y_rec, y, "self_reconstruction_loss (y)");
  return torch::l1_loss(x_rec, x) + torch::l1_loss(y_rec, y);
}

torch::Tensor content_code_reconstruction_loss(const torch::Tensor& c_x, const torch::Tensor& c_x_reencoded,
                                               const torch::Tensor& c_y, const torch::Tensor& c_y_reencoded) {
  require_same_shape(c_x_reencoded, c_x, "content_code_reconstruction_loss (x)");
  require_same_shape(c_y_reencoded, c_y, "content_code_reconstruction_loss (y)");
  return torch::l1_loss(c_x_reencoded, c_x) + torch::l1_loss(c_y_reencoded, c_y);
}

torch::Tensor style_code_reconstruction_loss(const torch::Tensor& s_x, const torch::Tensor& s_x_reencoded,
                                             const torch::Tensor& s_y, const torch::Tensor& s_y_reencoded) {
  require_same_shape(s_x_reencoded, s_x, "style_code_reconstruction_loss (x)");
  require_same_shape(s_y_reencoded, s_y, "style_code_reconstruction_loss (y)");
  return torch::l1_loss(s_x_reencoded, s_x) + torch::l1_loss(s_y_reencoded, s_y);
}

torch::Tensor adversarial_loss_discriminator(const std::vector<torch::Tensor>& real_scores,
                                             const std::vector<torch::Tensor>& fake_scores) {
  require(!real_scores.empty() && real_scores.size() == fake_scores.size(),
          "adversarial_loss_discriminator: real and fake score lists must be non-empty and equal length");
  torch::Tensor total;
  for (std::size_t s = 0; s < real_scores.size(); ++s) {
    auto real = real_scores[s].clamp(kLogEpsilon, 1.0 - kLogEpsilon);
    auto fake = fake_scores[s].clamp(kLogEpsilon, 1.0 - kLogEpsilon);
    auto term = -(real.log().mean() + (1.0 - fake).log().mean());
    total = total.defined() ? total + term : term;
  }
  return total / static_cast<double>(real_scores.size());
}

torch::Tensor adversarial_loss_generator(const std::vector<torch::Tensor>& fake_scores) {
  require(!fake_scores.empty(), "adversarial_loss_generator: empty score list");
  torch::Tensor total;
  for (const auto& scores : fake_scores) {
    auto term = -scores.clamp(kLogEpsilon, 1.0 - kLogEpsilon).log().mean();
    total = total.defined() ? total + term : term;
  }
  return total / static_cast<double>(fake_scores.size());
}

}  // namespace colorcode::losses
