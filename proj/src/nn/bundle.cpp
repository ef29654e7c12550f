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

#include "colorcode/nn/bundle.hpp"

#include <algorithm>
#include <cmath>

#include <ATen/CPUGeneratorImpl.h>

#include "colorcode/core/error.hpp"

namespace colorcode::nn {

std::string_view to_string(Domain d) { return d == Domain::X ? "x" : "y"; }

NetworkBundle::NetworkBundle(const TrainConfig& cfg) : config_(validated(cfg)) {
  const int kc = cfg.content_channels();
  content_encoder_x = ContentEncoder(cfg.base_channels, cfg.residual_blocks);
  content_encoder_y = ContentEncoder(cfg.base_channels, cfg.residual_blocks);
  style_encoder_x = StyleEncoder(cfg.base_channels, cfg.style_downsamples, cfg.code_length);
  style_encoder_y = StyleEncoder(cfg.base_channels, cfg.style_downsamples, cfg.code_length);
  color_encoder_x = StyleEncoder(cfg.base_channels, cfg.style_downsamples, cfg.code_length);
  recon_decoder_x = Decoder(kc, cfg.residual_blocks, cfg.code_length, cfg.mapping_channels);
  recon_decoder_y = Decoder(kc, cfg.residual_blocks, cfg.code_length, cfg.mapping_channels);
  enhance_decoder_x = Decoder(kc, cfg.residual_blocks, cfg.code_length, cfg.mapping_channels);
  discriminator_x = MultiScaleDiscriminator(cfg.disc_channels, cfg.disc_layers, cfg.disc_scales);
  discriminator_y = MultiScaleDiscriminator(cfg.disc_channels, cfg.disc_layers, cfg.disc_scales);
  initialize(cfg.seed);
}

std::vector<std::pair<std::string, std::shared_ptr<torch::nn::Module>>> NetworkBundle::named_networks() const {
  return {
      {"color_encoder_x", color_encoder_x.ptr()},     {"content_encoder_x", content_encoder_x.ptr()},
      {"style_encoder_x", style_encoder_x.ptr()},     {"content_encoder_y", content_encoder_y.ptr()},
      {"style_encoder_y", style_encoder_y.ptr()},     {"recon_decoder_x", recon_decoder_x.ptr()},
      {"enhance_decoder_x", enhance_decoder_x.ptr()}, {"recon_decoder_y", recon_decoder_y.ptr()},
      {"discriminator_x", discriminator_x.ptr()},     {"discriminator_y", discriminator_y.ptr()},
  };
}

std::vector<std::string> NetworkBundle::generator_names() const {
  return {"color_encoder_x", "content_encoder_x", "style_encoder_x", "content_encoder_y",
          "style_encoder_y", "recon_decoder_x",   "enhance_decoder_x", "recon_decoder_y"};
}

std::vector<std::string> NetworkBundle::discriminator_names() const { return {"discriminator_x", "discriminator_y"}; }

std::shared_ptr<torch::nn::Module> NetworkBundle::network(std::string_view name) const {
  for (auto& [n, m] : named_networks()) {
    if (n == name) return m;
  }
  fail(ErrorKind::NotFound, "no network named '" + std::string(name) + "'");
}

namespace {

std::vector<torch::Tensor> collect(const NetworkBundle& b, const std::vector<std::string>& names) {
  std::vector<torch::Tensor> out;
  for (const auto& name : names) {
    for (auto& p : b.network(name)->parameters()) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<torch::Tensor> NetworkBundle::generator_parameters() const { return collect(*this, generator_names()); }

std::vector<torch::Tensor> NetworkBundle::discriminator_parameters() const {
  return collect(*this, discriminator_names());
}

void NetworkBundle::initialize(std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  const auto discriminators = discriminator_names();
  for (auto& [name, net] : named_networks()) {
    const bool kaiming = config_.init_scheme == InitScheme::Kaiming &&
                         std::find(discriminators.begin(), discriminators.end(), name) == discriminators.end();
    auto draw = [&](torch::Tensor& w) {
      const double fan_in = static_cast<double>(w.numel() / w.size(0));
      w.normal_(0.0, kaiming ? std::sqrt(2.0 / fan_in) : config_.init_std, gen);
    };
    for (auto& m : net->modules(/*include_self=*/false)) {
      if (auto* conv = m->as<torch::nn::Conv2dImpl>()) {
        draw(conv->weight);
        if (conv->bias.defined()) conv->bias.zero_();
      } else if (auto* linear = m->as<torch::nn::LinearImpl>()) {
        draw(linear->weight);
        if (linear->bias.defined()) linear->bias.zero_();
      } else if (auto* gn = m->as<torch::nn::GroupNormImpl>()) {
        if (gn->weight.defined()) gn->weight.fill_(1.0);
        if (gn->bias.defined()) gn->bias.zero_();
      }
    }
  }
}

void NetworkBundle::to(torch::ScalarType dtype) {
  for (auto& [name, net] : named_networks()) net->to(dtype);
}

torch::ScalarType NetworkBundle::dtype() const { return color_encoder_x->parameters().front().scalar_type(); }

void NetworkBundle::check_image_batch(const torch::Tensor& images, int min_side, std::string_view what) const {
  require(images.dim() == 4 && images.size(1) == 3,
          std::string(what) + ": expected an N x 3 x H x W image batch");
  const auto h = images.size(2);
  const auto w = images.size(3);
  require(h % 4 == 0 && w % 4 == 0, std::string(what) + ": spatial dims must be divisible by 4, got " +
                                        std::to_string(h) + "x" + std::to_string(w));
  require(h >= min_side && w >= min_side, std::string(what) + ": input " + std::to_string(h) + "x" +
                                              std::to_string(w) + " is smaller than the minimum " +
                                              std::to_string(min_side));
}

torch::Tensor NetworkBundle::content(const torch::Tensor& images, Domain d) const {
  check_image_batch(images, 8, "encode_content");
  return d == Domain::X ? content_encoder_x.ptr()->forward(images) : content_encoder_y.ptr()->forward(images);
}

torch::Tensor NetworkBundle::style(const torch::Tensor& images, Domain d) const {
  check_image_batch(images, style_encoder_x->min_input(), "encode_style");
  return d == Domain::X ? style_encoder_x.ptr()->forward(images) : style_encoder_y.ptr()->forward(images);
}

torch::Tensor NetworkBundle::color(const torch::Tensor& images) const {
  check_image_batch(images, color_encoder_x->min_input(), "encode_color");
  return color_encoder_x.ptr()->forward(images);
}

namespace {

void check_decoder_inputs(const torch::Tensor& content, const torch::Tensor& code, const TrainConfig& cfg) {
  require(content.dim() == 4 && content.size(1) == cfg.content_channels(),
          "decode: content code must be N x " + std::to_string(cfg.content_channels()) + " x h x w");
  require(code.dim() == 2 && code.size(1) == cfg.code_length,
          "decode: code length " + std::to_string(code.dim() == 2 ? code.size(1) : -1) +
              " does not match configured K_m=" + std::to_string(cfg.code_length));
  require(code.size(0) == content.size(0), "decode: content and code batch sizes differ");
}

}  // namespace

torch::Tensor NetworkBundle::enhance_decode(const torch::Tensor& content, const torch::Tensor& color_code) const {
  check_decoder_inputs(content, color_code, config_);
  return enhance_decoder_x.ptr()->forward(content, color_code);
}

torch::Tensor NetworkBundle::reconstruct_decode(const torch::Tensor& content, const torch::Tensor& style_code,
                                                Domain d) const {
  check_decoder_inputs(content, style_code, config_);
  return d == Domain::X ? recon_decoder_x.ptr()->forward(content, style_code)
                        : recon_decoder_y.ptr()->forward(content, style_code);
}

std::vector<torch::Tensor> NetworkBundle::discriminate(const torch::Tensor& images, Domain d) const {
  check_image_batch(images, discriminator_x->min_input(), "discriminate");
  return d == Domain::X ? discriminator_x.ptr()->forward(images) : discriminator_y.ptr()->forward(images);
}

namespace {

torch::Tensor as_input(const NetworkBundle& b, const ImageTensor& img) { return img.batched().to(b.dtype()); }

}  // namespace

ContentCode encode_content(const NetworkBundle& bundle, const ImageTensor& x, Domain d) {
  torch::NoGradGuard no_grad;
  return ContentCode(bundle.content(as_input(bundle, x), d).squeeze(0));
}

ColorCode encode_color(const NetworkBundle& bundle, const ImageTensor& x) {
  torch::NoGradGuard no_grad;
  return ColorCode::from_tensor(bundle.color(as_input(bundle, x)));
}

StyleCode encode_style(const NetworkBundle& bundle, const ImageTensor& x, Domain d) {
  torch::NoGradGuard no_grad;
  return StyleCode::from_tensor(bundle.style(as_input(bundle, x), d));
}

ImageTensor decode_enhance(const NetworkBundle& bundle, const ContentCode& c, const ColorCode& m) {
  torch::NoGradGuard no_grad;
  const auto dtype = bundle.dtype();
  return ImageTensor(bundle.enhance_decode(c.tensor().unsqueeze(0).to(dtype), m.to_tensor(dtype)).squeeze(0));
}

ImageTensor decode_reconstruct(const NetworkBundle& bundle, const ContentCode& c, const StyleCode& s, Domain d) {
  torch::NoGradGuard no_grad;
  const auto dtype = bundle.dtype();
  return ImageTensor(
      bundle.reconstruct_decode(c.tensor().unsqueeze(0).to(dtype), s.to_tensor(dtype), d).squeeze(0));
}

std::vector<torch::Tensor> discriminate(const NetworkBundle& bundle, const ImageTensor& img, Domain d) {
  torch::NoGradGuard no_grad;
  auto maps = bundle.discriminate(as_input(bundle, img), d);
  for (auto& m : maps) m = m.squeeze(0).squeeze(0);
  return maps;
}

}  // namespace colorcode::nn
