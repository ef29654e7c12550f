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
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>
#include <torch/torch.h>

#include "colorcode/core/config.hpp"
#include "colorcode/core/image.hpp"
#include "colorcode/core/rgb8.hpp"

namespace colorcode::testing {

inline std::filesystem::path data_dir() { return COLORCODE_TEST_DATA; }

// Values frozen by the independent Python oracle in tests/oracles.
inline const nlohmann::json& golden() {
  static const nlohmann::json doc = [] {
    std::ifstream in(data_dir() / "golden.json");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "cc") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / (tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Small but complete network set for fast tests.
inline TrainConfig tiny_config(int image_size = 32, int code_length = 8) {
  TrainConfig cfg;
  cfg.image_size = image_size;
  cfg.code_length = code_length;
  cfg.batch_size = 2;
  cfg.total_iterations = 4;
  cfg.base_channels = 4;
  cfg.residual_blocks = 1;
  cfg.mapping_channels = 16;
  cfg.style_downsamples = 2;
  cfg.disc_channels = 4;
  cfg.disc_layers = 2;
  cfg.disc_scales = 2;
  cfg.checkpoint_interval = 2;
  return cfg;
}

inline Rgb8Image random_rgb(std::uint64_t seed, int width, int height) {
  std::mt19937_64 rng(seed);
  Rgb8Image img(width, height);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

inline ImageTensor random_image(std::uint64_t seed, int height, int width) {
  return normalize_image(random_rgb(seed, width, height));
}

}  // namespace colorcode::testing
