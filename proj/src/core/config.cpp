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

#include "colorcode/core/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "colorcode/core/error.hpp"

namespace colorcode {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Imq:
      return "imq";
    case KernelKind::RbfMixture:
      return "rbf_mixture";
  }
  return "imq";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "imq") return KernelKind::Imq;
  if (name == "rbf_mixture") return KernelKind::RbfMixture;
  fail(ErrorKind::InvalidArgument, "unknown kernel '" + std::string(name) + "' (expected imq or rbf_mixture)");
}

std::string_view to_string(InitScheme scheme) { return scheme == InitScheme::Kaiming ? "kaiming" : "gaussian"; }

InitScheme init_scheme_from_string(std::string_view name) {
  if (name == "gaussian") return InitScheme::Gaussian;
  if (name == "kaiming") return InitScheme::Kaiming;
  fail(ErrorKind::InvalidArgument, "unknown init_scheme '" + std::string(name) + "' (expected gaussian or kaiming)");
}

std::vector<ConfigViolation> validate_config(const TrainConfig& cfg) {
  std::vector<ConfigViolation> out;
  auto check = [&](bool ok, const char* field, const char* message) {
    if (!ok) out.push_back({field, std::string(field) + " " + message});
  };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto open_unit = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };

  check(finite_nonneg(cfg.lambda1), "lambda1", "not non-negative");
  check(finite_nonneg(cfg.lambda2), "lambda2", "not non-negative");
  check(finite_nonneg(cfg.lambda3), "lambda3", "not non-negative");
  check(finite_pos(cfg.learning_rate), "learning_rate", "not positive");
  check(open_unit(cfg.adam_beta1), "adam_beta1", "not in (0,1)");
  check(open_unit(cfg.adam_beta2), "adam_beta2", "not in (0,1)");
  check(cfg.code_length > 0, "code_length", "not positive");
  check(std::isfinite(cfg.prior_mean), "prior_mean", "not finite");
  check(finite_pos(cfg.prior_std), "prior_std", "not positive");
  check(finite_pos(cfg.truncation_tau), "truncation_tau", "not positive");
  check(cfg.image_size > 0, "image_size", "not positive");
  check(cfg.image_size % 4 == 0, "image_size", "not divisible by 4");
  check(cfg.batch_size > 0, "batch_size", "not positive");
  check(!cfg.mmd_enabled || cfg.batch_size >= 2, "batch_size", "must be at least 2 when mmd_enabled");
  check(cfg.total_iterations >= 0, "total_iterations", "negative");
  check(cfg.base_channels > 0, "base_channels", "not positive");
  check(cfg.residual_blocks >= 0, "residual_blocks", "negative");
  check(cfg.mapping_channels > 0, "mapping_channels", "not positive");
  check(cfg.style_downsamples >= 0 && cfg.style_downsamples <= 8, "style_downsamples", "not in [0,8]");
  check(cfg.disc_channels > 0, "disc_channels", "not positive");
  check(cfg.disc_layers > 0, "disc_layers", "not positive");
  check(cfg.disc_scales > 0, "disc_scales", "not positive");
  check(finite_pos(cfg.init_std), "init_std", "not positive");
  check(cfg.log_interval > 0, "log_interval", "not positive");
  check(cfg.checkpoint_interval > 0, "checkpoint_interval", "not positive");
  check(cfg.image_size >= cfg.min_encoder_input(), "image_size", "smaller than the color encoder minimum input");
  check(cfg.disc_layers + cfg.disc_scales > 31 || cfg.image_size >= (1 << (cfg.disc_layers + cfg.disc_scales - 1)),
        "image_size", "smaller than the discriminator pyramid minimum input");
  return out;
}

TrainConfig validated(const TrainConfig& cfg) {
  const auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& v : violations) msg << "\n  - " << v.message;
    fail(ErrorKind::InvalidArgument, msg.str());
  }
  return cfg;
}

namespace {

// One accessor pair per JSON key keeps serialization and parsing in lockstep.
struct Field {
  std::function<nlohmann::json(const TrainConfig&)> get;
  std::function<void(TrainConfig&, const nlohmann::json&)> set;
};

template <typename T>
Field member(T TrainConfig::*ptr) {
  return {[ptr](const TrainConfig& c) { return nlohmann::json(c.*ptr); },
          [ptr](TrainConfig& c, const nlohmann::json& j) { c.*ptr = j.get<T>(); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"lambda1", member(&TrainConfig::lambda1)},
      {"lambda2", member(&TrainConfig::lambda2)},
      {"lambda3", member(&TrainConfig::lambda3)},
      {"structure_loss_enabled", member(&TrainConfig::structure_loss_enabled)},
      {"learning_rate", member(&TrainConfig::learning_rate)},
      {"adam_beta1", member(&TrainConfig::adam_beta1)},
      {"adam_beta2", member(&TrainConfig::adam_beta2)},
      {"code_length", member(&TrainConfig::code_length)},
      {"prior_mean", member(&TrainConfig::prior_mean)},
      {"prior_std", member(&TrainConfig::prior_std)},
      {"mmd_enabled", member(&TrainConfig::mmd_enabled)},
      {"kernel",
       {[](const TrainConfig& c) { return nlohmann::json(std::string(to_string(c.kernel))); },
        [](TrainConfig& c, const nlohmann::json& j) { c.kernel = kernel_kind_from_string(j.get<std::string>()); }}},
      {"truncation_tau", member(&TrainConfig::truncation_tau)},
      {"image_size", member(&TrainConfig::image_size)},
      {"batch_size", member(&TrainConfig::batch_size)},
      {"total_iterations", member(&TrainConfig::total_iterations)},
      {"seed", member(&TrainConfig::seed)},
      {"base_channels", member(&TrainConfig::base_channels)},
      {"residual_blocks", member(&TrainConfig::residual_blocks)},
      {"mapping_channels", member(&TrainConfig::mapping_channels)},
      {"style_downsamples", member(&TrainConfig::style_downsamples)},
      {"disc_channels", member(&TrainConfig::disc_channels)},
      {"disc_layers", member(&TrainConfig::disc_layers)},
      {"disc_scales", member(&TrainConfig::disc_scales)},
      {"init_std", member(&TrainConfig::init_std)},
      {"init_scheme",
       {[](const TrainConfig& c) { return nlohmann::json(std::string(to_string(c.init_scheme))); },
        [](TrainConfig& c, const nlohmann::json& j) { c.init_scheme = init_scheme_from_string(j.get<std::string>()); }}},
      {"log_interval", member(&TrainConfig::log_interval)},
      {"checkpoint_interval", member(&TrainConfig::checkpoint_interval)},
  };
  return table;
}

}  // namespace

nlohmann::json to_json(const TrainConfig& cfg) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, field] : fields()) doc[name] = field.get(cfg);
  return doc;
}

TrainConfig config_from_json(const nlohmann::json& doc) {
  require(doc.is_object(), "config must be a flat JSON object");
  TrainConfig cfg;
  const auto& table = fields();
  for (const auto& [key, value] : doc.items()) {
    auto it = table.find(key);
    require(it != table.end(), "unknown config key '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidArgument, "config key '" + key + "' has the wrong type: " + e.what());
    }
  }
  return cfg;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!std::filesystem::exists(path)) fail(ErrorKind::NotFound, "config file " + path + " does not exist");
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, "config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

std::vector<std::string> architecture_mismatches(const TrainConfig& a, const TrainConfig& b) {
  std::vector<std::string> out;
  auto cmp = [&](const char* name, auto lhs, auto rhs) {
    if (lhs != rhs) out.emplace_back(name);
  };
  cmp("code_length", a.code_length, b.code_length);
  cmp("base_channels", a.base_channels, b.base_channels);
  cmp("residual_blocks", a.residual_blocks, b.residual_blocks);
  cmp("mapping_channels", a.mapping_channels, b.mapping_channels);
  cmp("style_downsamples", a.style_downsamples, b.style_downsamples);
  cmp("disc_channels", a.disc_channels, b.disc_channels);
  cmp("disc_layers", a.disc_layers, b.disc_layers);
  cmp("disc_scales", a.disc_scales, b.disc_scales);
  return out;
}

}  // namespace colorcode
