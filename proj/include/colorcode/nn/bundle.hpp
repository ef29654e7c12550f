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
#include <string_view>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "colorcode/core/codes.hpp"
#include "colorcode/core/config.hpp"
#include "colorcode/core/image.hpp"
#include "colorcode/nn/networks.hpp"

namespace colorcode::nn {

// x: distorted domain, y: reference domain.
enum class Domain { X, Y };

std::string_view to_string(Domain d);

// Every trainable network of the model. The generator set holds the
// encoders and decoders; the discriminator set holds the two discriminators.
// Network names are stable and double as checkpoint entry names.
class NetworkBundle {
 public:
  explicit NetworkBundle(const TrainConfig& cfg);
  NetworkBundle(const NetworkBundle&) = delete;
  NetworkBundle& operator=(const NetworkBundle&) = delete;
  NetworkBundle(NetworkBundle&&) = default;
  NetworkBundle& operator=(NetworkBundle&&) = default;

  // Re-draws every weight from N(0, init_std) with biases zeroed and norm
  // affines reset. The same seed gives bit-identical parameters.
  void initialize(std::uint64_t seed);

  const TrainConfig& config() const { return config_; }

  // Named networks in a fixed order; generator set first.
  std::vector<std::pair<std::string, std::shared_ptr<torch::nn::Module>>> named_networks() const;
  std::vector<std::string> generator_names() const;
  std::vector<std::string> discriminator_names() const;
  std::shared_ptr<torch::nn::Module> network(std::string_view name) const;

  std::vector<torch::Tensor> generator_parameters() const;
  std::vector<torch::Tensor> discriminator_parameters() const;

  void to(torch::ScalarType dtype);
  torch::ScalarType dtype() const;

  // Batched, differentiable forward passes. Images are N×3×H×W.
  torch::Tensor content(const torch::Tensor& images, Domain d) const;
  torch::Tensor style(const torch::Tensor& images, Domain d) const;
  torch::Tensor color(const torch::Tensor& images) const;
  torch::Tensor enhance_decode(const torch::Tensor& content, const torch::Tensor& color_code) const;
  torch::Tensor reconstruct_decode(const torch::Tensor& content, const torch::Tensor& style_code, Domain d) const;
  std::vector<torch::Tensor> discriminate(const torch::Tensor& images, Domain d) const;

  ContentEncoder content_encoder_x = nullptr, content_encoder_y = nullptr;
  StyleEncoder style_encoder_x = nullptr, style_encoder_y = nullptr, color_encoder_x = nullptr;
  Decoder recon_decoder_x = nullptr, recon_decoder_y = nullptr, enhance_decoder_x = nullptr;
  MultiScaleDiscriminator discriminator_x = nullptr, discriminator_y = nullptr;

 private:
  void check_image_batch(const torch::Tensor& images, int min_side, std::string_view what) const;

  TrainConfig config_;
};

// Single-image operations over a bundle. These run without autograd and
// return validated value types.
ContentCode encode_content(const NetworkBundle& bundle, const ImageTensor& x, Domain d);
ColorCode encode_color(const NetworkBundle& bundle, const ImageTensor& x);
StyleCode encode_style(const NetworkBundle& bundle, const ImageTensor& x, Domain d);
ImageTensor decode_enhance(const NetworkBundle& bundle, const ContentCode& c, const ColorCode& m);
ImageTensor decode_reconstruct(const NetworkBundle& bundle, const ContentCode& c, const StyleCode& s, Domain d);
std::vector<torch::Tensor> discriminate(const NetworkBundle& bundle, const ImageTensor& img, Domain d);

}  // namespace colorcode::nn
