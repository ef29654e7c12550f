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

namespace colorcode::nn {

enum class Norm { None, Instance, Layer };
enum class Activation { None, Relu, LeakyRelu, Tanh };
enum class Padding { Reflect, Zero };

struct ConvSpec {
  int in = 0;
  int out = 0;
  int kernel = 3;
  int stride = 1;
  int pad = 1;
  Norm norm = Norm::None;
  Activation act = Activation::Relu;
  Padding padding = Padding::Reflect;
};

// pad -> conv -> norm -> activation
class ConvBlockImpl : public torch::nn::Module {
 public:
  explicit ConvBlockImpl(const ConvSpec& spec);
  torch::Tensor forward(torch::Tensor x);

 private:
  ConvSpec spec_;
  torch::nn::Conv2d conv_{nullptr};
  torch::nn::InstanceNorm2d instance_{nullptr};
  torch::nn::GroupNorm layer_{nullptr};
};
TORCH_MODULE(ConvBlock);

// Two 3×3 conv blocks with a skip connection, instance normalization.
class ResBlockImpl : public torch::nn::Module {
 public:
  explicit ResBlockImpl(int channels);
  torch::Tensor forward(torch::Tensor x);

 private:
  ConvBlock first_{nullptr};
  ConvBlock second_{nullptr};
};
TORCH_MODULE(ResBlock);

// Residual block whose two normalizations are adaptive instance norms. Scale
// and shift come from the caller, one (gamma, beta) pair per normalization.
class AdainResBlockImpl : public torch::nn::Module {
 public:
  explicit AdainResBlockImpl(int channels);
  // affine: N × (4·channels), laid out [gamma1, beta1, gamma2, beta2].
  torch::Tensor forward(torch::Tensor x, const torch::Tensor& affine);
  int channels() const { return channels_; }

 private:
  int channels_;
  torch::nn::Conv2d first_{nullptr};
  torch::nn::Conv2d second_{nullptr};
};
TORCH_MODULE(AdainResBlock);

// Instance-normalize x then apply per-sample (1 + gamma), beta.
torch::Tensor adaptive_instance_norm(const torch::Tensor& x, const torch::Tensor& gamma, const torch::Tensor& beta);

// 7×7 conv -> two stride-2 4×4 downsamples -> residual blocks. Output has
// 4·base channels at a quarter of the input resolution.
class ContentEncoderImpl : public torch::nn::Module {
 public:
  ContentEncoderImpl(int base_channels, int residual_blocks);
  torch::Tensor forward(torch::Tensor x);
  int out_channels() const { return out_channels_; }

 private:
  int out_channels_;
  torch::nn::Sequential body_{nullptr};
};
TORCH_MODULE(ContentEncoder);

// 7×7 conv -> `downsamples` stride-2 convs -> global average pool -> 1×1
// projection to code_length. No normalization. Used for both the style
// encoders and the color encoder.
class StyleEncoderImpl : public torch::nn::Module {
 public:
  StyleEncoderImpl(int base_channels, int downsamples, int code_length);
  // Returns N × code_length.
  torch::Tensor forward(torch::Tensor x);
  int min_input() const { return 1 << (downsamples_ + 1); }

 private:
  int downsamples_;
  torch::nn::Sequential body_{nullptr};
};
TORCH_MODULE(StyleEncoder);

// Three-layer MLP from a code to the decoder's AdaIN parameters.
class MappingNetworkImpl : public torch::nn::Module {
 public:
  MappingNetworkImpl(int code_length, int hidden, int out_features);
  torch::Tensor forward(torch::Tensor code);

 private:
  torch::nn::Sequential body_{nullptr};
};
TORCH_MODULE(MappingNetwork);

// Mapping network -> AdaIN residual blocks -> two (nearest ×2, 5×5 conv,
// layer norm) stages -> 7×7 conv -> tanh.
class DecoderImpl : public torch::nn::Module {
 public:
  DecoderImpl(int content_channels, int residual_blocks, int code_length, int mapping_channels);
  torch::Tensor forward(torch::Tensor content, torch::Tensor code);
  int code_length() const { return code_length_; }

 private:
  int code_length_;
  MappingNetwork mapping_{nullptr};
  std::vector<AdainResBlock> blocks_;
  torch::nn::Sequential upsample_{nullptr};
};
TORCH_MODULE(Decoder);

// Multi-scale patch discriminator. Each scale is a stack of stride-2 4×4
// convs (leaky slope 0.2) ending in a 1×1 score map; scales are separated by
// 3×3 average pooling. Scores are squashed to (0, 1).
class MultiScaleDiscriminatorImpl : public torch::nn::Module {
 public:
  MultiScaleDiscriminatorImpl(int base_channels, int layers, int scales);
  std::vector<torch::Tensor> forward(torch::Tensor x);
  int min_input() const { return 1 << (layers_ + scales_ - 1); }

 private:
  int layers_;
  int scales_;
  std::vector<torch::nn::Sequential> heads_;
};
TORCH_MODULE(MultiScaleDiscriminator);

}  // namespace colorcode::nn
