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
#include <map>
#include <memory>
#include <string>

#include "colorcode/core/config.hpp"
#include "colorcode/nn/bundle.hpp"
#include "colorcode/train/trainer.hpp"

namespace colorcode::io {

// Single-file archive:
//   "CCKPT001" magic, u32 entry count, then per entry
//   u32 name length, name, u64 payload length, payload.
// Entries: manifest.json, net/<network>, optim/generator,
// optim/discriminator, rng. The manifest carries the config snapshot, the
// iteration counter, the data cursor and a SHA-256 digest of every other entry.
inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointManifest {
  int format_version = kCheckpointFormatVersion;
  TrainConfig config;
  std::int64_t iteration = 0;
  std::int64_t data_cursor = 0;
  std::map<std::string, std::string> digests;  // entry name -> hex SHA-256
};

void save_checkpoint(const train::TrainState& state, const std::filesystem::path& path);

// Restores every parameter bit-exactly along with optimizer moments, counters
// and the sampling RNG. With `expected`, architecture fields must match or the
// load is rejected (Error kind Conflict) with both configs in the message.
// A digest mismatch is rejected with Error kind Corrupt.
train::TrainState load_checkpoint(const std::filesystem::path& path, const TrainConfig* expected = nullptr);

CheckpointManifest read_manifest(const std::filesystem::path& path);

// Inference-only load: networks without optimizer state.
struct LoadedModel {
  std::shared_ptr<const nn::NetworkBundle> bundle;
  TrainConfig config;
  std::int64_t iteration = 0;
  std::string digest;  // SHA-256 of the manifest entry
};
LoadedModel load_model(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace colorcode::io
