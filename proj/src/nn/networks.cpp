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

#include "colorcode/nn/networks.hpp"

#include <string>

namespace colorcode::nn {

namespace F = torch::nn::functional;

ConvBlockImpl::ConvBlockImpl(const ConvSpec& spec) : spec_(spec) {
  conv_ = register_module("conv", torch::nn::Conv2d(torch::nn::Conv2dOptions(spec.in, spec.out, spec.kernel)
                                                         .stride(spec.stride)
                                                         .padding(0)
                                                         .bias(true)));
  if (spec.norm == Norm::Instance) {
    instance_ = register_module("norm", torch::nn::InstanceNorm2d(torch::nn::InstanceNorm2dOptions(spec.out)));
  } else if (spec.norm == Norm::Layer) {
    layer_ = register_module("norm", torch::nn::GroupNorm(torch::nn::GroupNormOptions(1, spec.out)));
  }
}

torch::Tensor ConvBlockImpl::forward(torch::Tensor x) {
  if (spec_.pad > 0) {
    auto options = F::PadFuncOptions({spec_.pad, spec_.pad, spec_.pad, spec_.pad});
    if (spec_.padding == Padding::Reflect) {
      options.mode(torch::kReflect);
    } else {
      options.mode(torch::kConstant);
    }
    x = F::pad(x, options);
  }
  x = conv_(x);
  if (instance_) x = instance_(x);
  if (layer_) x = layer_(x);
  switch (spec_.act) {
    case Activation::Relu:
      return torch::relu(x);
    case Activation::LeakyRelu:
      return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(0.2));
    case Activation::Tanh:
      return torch::tanh(x);
    case Activation::None:
      break;
  }
  return x;
}

ResBlockImpl::ResBlockImpl(int channels) {
  first_ = register_module("conv1", ConvBlock(ConvSpec{channels, channels, 3, 1, 1, Norm::Instance, Activation::Relu}));
  second_ = register_module("conv2", ConvBlock(ConvSpec{channels, channels, 3, 1, 1, Norm::Instance, Activation::None}));
}

torch::Tensor ResBlockImpl::forward(torch::Tensor x) { return x + second_(first_(x)); }

torch::Tensor adaptive_instance_norm(const torch::Tensor& x, const torch::Tensor& gamma, const torch::Tensor& beta) {
  auto normalized = F::instance_norm(x, F::InstanceNormFuncOptions().eps(1e-5));
  return normalized * (1.0 + gamma.unsqueeze(-1).unsqueeze(-1)) + beta.unsqueeze(-1).unsqueeze(-1);
}

AdainResBlockImpl::AdainResBlockImpl(int channels) : channels_(channels) {
  first_ = register_module("conv1", torch::nn::Conv2d(torch::nn::Conv2dOptions(channels, channels, 3)));
  second_ = register_module("conv2", torch::nn::Conv2d(torch::nn::Conv2dOptions(channels, channels, 3)));
}

torch::Tensor AdainResBlockImpl::forward(torch::Tensor x, const torch::Tensor& affine) {
  const auto parts = affine.split(channels_, 1);
  const auto reflect = F::PadFuncOptions({1, 1, 1, 1}).mode(torch::kReflect);
  auto h = first_(F::pad(x, reflect));
  h = torch::relu(adaptive_instance_norm(h, parts[0], parts[1]));
  h = second_(F::pad(h, reflect));
  h = adaptive_instance_norm(h, parts[2], parts[3]);
  return x + h;
}

ContentEncoderImpl::ContentEncoderImpl(int base_channels, int residual_blocks) {
  torch::nn::Sequential seq;
  int dim = base_channels;
  seq->push_back(ConvBlock(ConvSpec{3, dim, 7, 1, 3, Norm::Instance, Activation::Relu}));
  for (int i = 0; i < 2; ++i) {
    seq->push_back(ConvBlock(ConvSpec{dim, dim * 2, 4, 2, 1, Norm::Instance, Activation::Relu}));
    dim *= 2;
  }
  for (int i = 0; i < residual_blocks; ++i) seq->push_back(ResBlock(dim));
  out_channels_ = dim;
  body_ = register_module("body", seq);
}

torch::Tensor ContentEncoderImpl::forward(torch::Tensor x) { return body_->forward(x); }

StyleEncoderImpl::StyleEncoderImpl(int base_channels, int downsamples, int code_length) : downsamples_(downsamples) {
  torch::nn::Sequential seq;
  int dim = base_channels;
  seq->push_back(ConvBlock(ConvSpec{3, dim, 7, 1, 3, Norm::None, Activation::Relu}));
  for (int i = 0; i < downsamples; ++i) {
    const int next = i < 2 ? dim * 2 : dim;
    seq->push_back(ConvBlock(ConvSpec{dim, next, 4, 2, 1, Norm::None, Activation::Relu}));
    dim = next;
  }
  seq->push_back(torch::nn::AdaptiveAvgPool2d(torch::nn::AdaptiveAvgPool2dOptions(1)));
  seq->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(dim, code_length, 1)));
  body_ = register_module("body", seq);
}

torch::Tensor StyleEncoderImpl::forward(torch::Tensor x) { return body_->forward(x).flatten(1); }

MappingNetworkImpl::MappingNetworkImpl(int code_length, int hidden, int out_features) {
  torch::nn::Sequential seq;
  seq->push_back(torch::nn::Linear(code_length, hidden));
  seq->push_back(torch::nn::ReLU());
  seq->push_back(torch::nn::Linear(hidden, hidden));
  seq->push_back(torch::nn::ReLU());
  seq->push_back(torch::nn::Linear(hidden, out_features));
  body_ = register_module("body", seq);
}

torch::Tensor MappingNetworkImpl::forward(torch::Tensor code) { return body_->forward(code); }

DecoderImpl::DecoderImpl(int content_channels, int residual_blocks, int code_length, int mapping_channels)
    : code_length_(code_length) {
  mapping_ = register_module("mapping",
                             MappingNetwork(code_length, mapping_channels, residual_blocks * 4 * content_channels));
  for (int i = 0; i < residual_blocks; ++i) {
    blocks_.push_back(register_module("adain_block" + std::to_string(i), AdainResBlock(content_channels)));
  }
  torch::nn::Sequential seq;
  int dim = content_channels;
  for (int i = 0; i < 2; ++i) {
    seq->push_back(torch::nn::Upsample(
        torch::nn::UpsampleOptions().scale_factor(std::vector<double>{2.0, 2.0}).mode(torch::kNearest)));
    seq->push_back(ConvBlock(ConvSpec{dim, dim / 2, 5, 1, 2, Norm::Layer, Activation::Relu}));
    dim /= 2;
  }
  seq->push_back(ConvBlock(ConvSpec{dim, 3, 7, 1, 3, Norm::None, Activation::Tanh}));
  upsample_ = register_module("upsample", seq);
}

torch::Tensor DecoderImpl::forward(torch::Tensor content, torch::Tensor code) {
  auto x = content;
  if (!blocks_.empty()) {
    const auto affine = mapping_(code).split(4 * blocks_.front()->channels(), 1);
    for (std::size_t i = 0; i < blocks_.size(); ++i) x = blocks_[i]->forward(x, affine[i]);
  }
  return upsample_->forward(x);
}

MultiScaleDiscriminatorImpl::MultiScaleDiscriminatorImpl(int base_channels, int layers, int scales)
    : layers_(layers), scales_(scales) {
  for (int s = 0; s < scales; ++s) {
    torch::nn::Sequential seq;
    int dim = base_channels;
    seq->push_back(ConvBlock(ConvSpec{3, dim, 4, 2, 1, Norm::None, Activation::LeakyRelu}));
    for (int i = 1; i < layers; ++i) {
      seq->push_back(ConvBlock(ConvSpec{dim, dim * 2, 4, 2, 1, Norm::None, Activation::LeakyRelu}));
      dim *= 2;
    }
    seq->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(dim, 1, 1)));
    heads_.push_back(register_module("scale" + std::to_string(s), seq));
  }
}

std::vector<torch::Tensor> MultiScaleDiscriminatorImpl::forward(torch::Tensor x) {
  std::vector<torch::Tensor> out;
  out.reserve(heads_.size());
  for (std::size_t s = 0; s < heads_.size(); ++s) {
    out.push_back(torch::sigmoid(heads_[s]->forward(x)));
    if (s + 1 < heads_.size()) {
      x = F::avg_pool2d(x, F::AvgPool2dFuncOptions(3).stride(2).padding(1).count_include_pad(false));
    }
  }
  return out;
}

}  // namespace colorcode::nn
