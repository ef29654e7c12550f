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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace colorcode {

enum class KernelKind { Imq, RbfMixture };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// Gaussian draws every weight from N(0, init_std). Kaiming scales generator-set
// weights by sqrt(2 / fan_in); discriminators keep N(0, init_std).
enum class InitScheme { Gaussian, Kaiming };

std::string_view to_string(InitScheme scheme);
InitScheme init_scheme_from_string(std::string_view name);

// Every training hyperparameter. Defaults are the published settings where
// they exist; architecture fields default to the MUNIT configuration.
struct TrainConfig {
  // Objective weights.
  double lambda1 = 10.0;
  double lambda2 = 1.0;
  double lambda3 = 10.0;
  bool structure_loss_enabled = true;

  // Adam.
  double learning_rate = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;

  // Color code and its Gaussian prior.
  int code_length = 8;
  double prior_mean = 0.0;
  double prior_std = 1.0;
  bool mmd_enabled = true;
  KernelKind kernel = KernelKind::Imq;
  double truncation_tau = 2.0;

  // Data.
  int image_size = 256;
  int batch_size = 8;
  std::int64_t total_iterations = 80000;
  std::uint64_t seed = 0;

  // Architecture. Content channels = base_channels * 4.
  int base_channels = 64;
  int residual_blocks = 4;
  int mapping_channels = 256;
  int style_downsamples = 4;
  int disc_channels = 64;
  int disc_layers = 4;
  int disc_scales = 3;
  double init_std = 0.02;
  InitScheme init_scheme = InitScheme::Gaussian;

  // Loop bookkeeping.
  std::int64_t log_interval = 1;
  std::int64_t checkpoint_interval = 5000;

  int content_channels() const { return base_channels * 4; }
  // Smallest side accepted by the style/color encoders.
  int min_encoder_input() const { return 1 << (style_downsamples + 1); }

  bool operator==(const TrainConfig&) const = default;
};

struct ConfigViolation {
  std::string field;
  std::string message;
};

// Empty result means the config is valid.
std::vector<ConfigViolation> validate_config(const TrainConfig& cfg);

// Returns cfg unchanged or throws Error(InvalidArgument) listing every violation.
TrainConfig validated(const TrainConfig& cfg);

// Flat JSON; unknown keys are rejected. Missing keys keep their defaults.
nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const nlohmann::json& doc);
TrainConfig load_config(const std::string& path);

// Fields that must agree between a checkpoint and a requested config for the
// parameter blobs to be loadable. Empty means compatible.
std::vector<std::string> architecture_mismatches(const TrainConfig& a, const TrainConfig& b);

}  // namespace colorcode
