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
#include <mutex>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "colorcode/core/config.hpp"
#include "colorcode/core/rgb8.hpp"

namespace colorcode::io {

enum class Split { Train, Test };

Split split_from_string(const std::string& name);

struct ImagePair {
  std::string id;  // relative filename shared by both sides
  std::filesystem::path input;
  std::filesystem::path reference;
};

// Distorted/reference pairs under root/input and root/gt matched by relative
// filename, or listed by an optional root/manifest.json of {input, gt} entries.
struct PairedDataset {
  std::filesystem::path root;
  Split split = Split::Train;
  std::vector<ImagePair> pairs;       // lexicographic by id
  std::vector<std::string> warnings;  // unpaired files and other skips

  std::size_t size() const { return pairs.size(); }
};

PairedDataset load_paired_dataset(const std::filesystem::path& root, Split split);

// Resize-short-side, square crop and optional horizontal flip. One instance
// is applied to both images of a pair.
struct PairTransform {
  int resized_width = 0;
  int resized_height = 0;
  int crop_x = 0;
  int crop_y = 0;
  int size = 0;
  bool flip = false;

  Rgb8Image apply(const Rgb8Image& img) const;
  bool operator==(const PairTransform&) const = default;
};

struct Batch {
  torch::Tensor x;  // N×3×S×S distorted, normalized to [-1, 1]
  torch::Tensor y;  // N×3×S×S reference
  std::vector<std::string> ids;
  std::vector<PairTransform> transforms;

  std::int64_t size() const { return static_cast<std::int64_t>(ids.size()); }
};

// Deterministic batch source: batch k of the stream is a pure function of
// (files, seed, k). Train split reshuffles each epoch and applies random crops
// and flips; test split keeps file order with center crops.
class BatchStream {
 public:
  BatchStream(PairedDataset dataset, const TrainConfig& cfg, Split split);

  std::int64_t batches_per_epoch() const;
  std::vector<std::size_t> epoch_order(std::int64_t epoch) const;

  // Global batch index across epochs. Pairs that fail to decode are skipped
  // and logged, so a batch may be smaller than requested (or empty).
  Batch batch(std::int64_t index) const;

  const PairedDataset& dataset() const { return dataset_; }

 private:
  std::pair<Rgb8Image, Rgb8Image> load_pair(std::size_t i) const;

  PairedDataset dataset_;
  int image_size_;
  int batch_size_;
  std::uint64_t seed_;
  Split split_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::size_t, std::pair<Rgb8Image, Rgb8Image>> cache_;
};

}  // namespace colorcode::io
