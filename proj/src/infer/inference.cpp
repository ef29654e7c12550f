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

#include "colorcode/infer/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode::infer {

std::vector<double> truncate(std::span<const double> v, double tau) {
  require(tau > 0.0, "truncate: tau must be positive");
  std::vector<double> out(v.begin(), v.end());
  for (auto& e : out) e = std::clamp(e, -tau, tau);
  return out;
}

ColorCode truncate(const ColorCode& code, double tau) { return ColorCode(truncate(code.values(), tau)); }

ColorCode fuse_codes(const ColorCode& m_x, const ColorCode& m_g, double alpha, double tau) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
          "fuse_codes: alpha must lie in [0, 1], got " + std::to_string(alpha));
  require(m_x.size() == m_g.size(), "fuse_codes: code lengths differ (" + std::to_string(m_x.size()) + " vs " +
                                        std::to_string(m_g.size()) + ")");
  const auto guide = truncate(m_g.values(), tau);
  const double keep = 1.0 - alpha;
  const double norm = std::sqrt(keep * keep + alpha * alpha);
  std::vector<double> fused(m_x.size());
  for (std::size_t i = 0; i < fused.size(); ++i) fused[i] = (keep * m_x[i] + alpha * guide[i]) / norm;
  return ColorCode(std::move(fused));
}

BinaryMask::BinaryMask(int w, int h, std::vector<std::uint8_t> v) : width(w), height(h), values(std::move(v)) {
  require(w > 0 && h > 0, "mask dimensions must be positive");
  require(values.size() == static_cast<std::size_t>(w) * h, "mask has " + std::to_string(values.size()) +
                                                                " values, expected " + std::to_string(w * h));
  for (auto v : values) require(v == 0 || v == 1, "mask values must be 0 or 1");
}

double grid_value(int i, int steps, double lo, double hi) {
  if (steps == 1) return (lo + hi) / 2.0;
  return lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
}

Enhancer::Enhancer(std::shared_ptr<const nn::NetworkBundle> bundle, std::optional<double> truncation_tau)
    : bundle_(std::move(bundle)) {
  if (!bundle_) fail(ErrorKind::InvalidArgument, "no model loaded: load a checkpoint first");
  tau_ = truncation_tau.value_or(bundle_->config().truncation_tau);
  require(tau_ > 0.0, "truncation tau must be positive");
}

ColorCode Enhancer::color_code(const ImageTensor& x) const { return nn::encode_color(*bundle_, x); }

ImageTensor Enhancer::decode(const ImageTensor& x, const ColorCode& m) const {
  return nn::decode_enhance(*bundle_, nn::encode_content(*bundle_, x, nn::Domain::X), m);
}

ImageTensor Enhancer::enhance(const ImageTensor& x) const { return decode(x, color_code(x)); }

ImageTensor Enhancer::adapt(const AdaptationRequest& req) const {
  require(std::isfinite(req.alpha) && req.alpha >= 0.0 && req.alpha <= 1.0,
          "adapt: alpha must lie in [0, 1], got " + std::to_string(req.alpha));
  if (req.mask) {
    require(req.mask->width == req.x.width() && req.mask->height == req.x.height(),
            "adapt: mask is " + std::to_string(req.mask->width) + "x" + std::to_string(req.mask->height) +
                " but the image is " + std::to_string(req.x.width()) + "x" + std::to_string(req.x.height()));
  }
  const auto m_g = color_code(req.guidance);
  const auto m_x = color_code(req.x);
  auto adapted = decode(req.x, fuse_codes(m_x, m_g, req.alpha, tau_));
  if (!req.mask) return adapted;
  const auto base = decode(req.x, m_x);
  auto mask = torch::from_blob(const_cast<std::uint8_t*>(req.mask->values.data()),
                               {1, req.mask->height, req.mask->width}, torch::kUInt8)
                  .to(torch::kBool);
  return ImageTensor(torch::where(mask, adapted.tensor(), base.tensor()));
}

ImageTensor Enhancer::interpolate(const InterpolationRequest& req) const {
  require(req.z.size() == static_cast<std::size_t>(code_length()),
          "interpolate: z has length " + std::to_string(req.z.size()) + " but the model uses K_m=" +
              std::to_string(code_length()));
  return decode(req.x, fuse_codes(color_code(req.x), ColorCode(req.z), req.alpha, tau_));
}

InterpolationGrid Enhancer::interpolation_grid(const ImageTensor& x, int steps, double lo, double hi,
                                               double alpha) const {
  if (code_length() != 2) {
    fail(ErrorKind::Conflict, "interpolation grid needs a model trained with K_m=2 (this one has K_m=" +
                                  std::to_string(code_length()) + "); use interpolate with a single z instead");
  }
  require(steps >= 1, "interpolation grid: steps must be at least 1");
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, "interpolation grid: need lo <= hi");
  const auto content = nn::encode_content(*bundle_, x, nn::Domain::X);
  const auto m_x = color_code(x);
  InterpolationGrid grid{steps, lo, hi, alpha, {}};
  grid.cells.resize(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      std::vector<double> z{grid_value(i, steps, lo, hi), grid_value(j, steps, lo, hi)};
      auto image = nn::decode_enhance(*bundle_, content, fuse_codes(m_x, ColorCode(z), alpha, tau_));
      const bool center = z[0] == 0.0 && z[1] == 0.0;
      grid.cells[static_cast<std::size_t>(i)].push_back({std::move(z), std::move(image), center});
    }
  }
  return grid;
}

}  // namespace colorcode::infer
