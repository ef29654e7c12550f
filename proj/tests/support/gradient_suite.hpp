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

#include <string>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "colorcode/losses/losses.hpp"
#include "colorcode/losses/mmd.hpp"
#include "oracles.hpp"

namespace colorcode::testing {

// Float64 toy generator, encoder, code head and two-scale discriminator with
// 4 hidden channels, driven by 16×16 images.
struct ToyNetworks : torch::nn::Module {
  torch::nn::Conv2d gen1{nullptr}, gen2{nullptr}, enc{nullptr}, head_conv{nullptr}, disc1{nullptr}, disc2{nullptr};
  torch::nn::Linear head{nullptr};

  explicit ToyNetworks(int code_length) {
    using torch::nn::Conv2dOptions;
    gen1 = register_module("gen1", torch::nn::Conv2d(Conv2dOptions(3, 4, 3).padding(1)));
    gen2 = register_module("gen2", torch::nn::Conv2d(Conv2dOptions(4, 3, 3).padding(1)));
    enc = register_module("enc", torch::nn::Conv2d(Conv2dOptions(3, 4, 4).stride(4)));
    head_conv = register_module("head_conv", torch::nn::Conv2d(Conv2dOptions(3, 4, 3).stride(2)));
    head = register_module("head", torch::nn::Linear(4, code_length));
    disc1 = register_module("disc1", torch::nn::Conv2d(Conv2dOptions(3, 4, 4).stride(2).padding(1)));
    disc2 = register_module("disc2", torch::nn::Conv2d(Conv2dOptions(4, 1, 1)));
    to(torch::kFloat64);
  }

  torch::Tensor generate(const torch::Tensor& x) { return torch::tanh(gen2(torch::tanh(gen1(x)))); }
  torch::Tensor content(const torch::Tensor& x) { return enc(x); }
  torch::Tensor code(const torch::Tensor& x) { return head(torch::relu(head_conv(x)).mean({2, 3})); }
  std::vector<torch::Tensor> discriminate(const torch::Tensor& x) {
    auto score = [&](const torch::Tensor& t) {
      return torch::sigmoid(disc2(torch::leaky_relu(disc1(t), 0.2)));
    };
    return {score(x), score(torch::avg_pool2d(x, 3, 2, 1))};
  }
};

// Relative error of autograd against central differences for every loss,
// keyed by loss name.
inline std::vector<std::pair<std::string, double>> loss_gradient_errors(std::uint64_t seed) {
  torch::manual_seed(seed);
  const int k = 3;
  ToyNetworks net(k);
  const auto opts = torch::TensorOptions().dtype(torch::kFloat64);
  const auto x = torch::rand({2, 3, 16, 16}, opts) * 2 - 1;
  const auto y = torch::rand({2, 3, 16, 16}, opts) * 2 - 1;
  const auto codes_in = torch::rand({4, 3, 16, 16}, opts) * 2 - 1;
  const auto prior = torch::randn({4, k}, opts);
  const auto params = net.parameters();

  std::vector<std::pair<std::string, std::function<torch::Tensor()>>> cases = {
      {"enhancement", [&] { return losses::enhancement_loss(net.generate(x), y, true); }},
      {"enhancement_without_structure", [&] { return losses::enhancement_loss(net.generate(x), y, false); }},
      {"structure_similarity", [&] { return losses::structure_similarity(net.generate(x), y); }},
      {"self_reconstruction",
       [&] { return losses::self_reconstruction_loss(net.generate(x), x, net.generate(y), y); }},
      {"content_code_reconstruction",
       [&] {
         return losses::content_code_reconstruction_loss(net.content(x), net.content(net.generate(x)), net.content(y),
                                                         net.content(net.generate(y)));
       }},
      {"style_code_reconstruction",
       [&] {
         return losses::style_code_reconstruction_loss(net.code(x), net.code(net.generate(x)), net.code(y),
                                                       net.code(net.generate(y)));
       }},
      {"adversarial_discriminator",
       [&] { return losses::adversarial_loss_discriminator(net.discriminate(y), net.discriminate(net.generate(x))); }},
      {"adversarial_generator", [&] { return losses::adversarial_loss_generator(net.discriminate(net.generate(x))); }},
      {"mmd_imq",
       [&] { return losses::mmd_loss(net.code(net.generate(codes_in)), prior, losses::Kernel::imq(2.0 * k)); }},
      {"mmd_rbf_mixture",
       [&] {
         return losses::mmd_loss(net.code(net.generate(codes_in)), prior, losses::Kernel::rbf_mixture(2.0 * k));
       }},
      {"mmd_gaussian",
       [&] { return losses::mmd_loss(net.code(net.generate(codes_in)), prior, losses::Kernel::gaussian(1.0)); }},
  };
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [name, fn] : cases) out.emplace_back(name, gradient_check(fn, params));
  return out;
}

}  // namespace colorcode::testing
