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

#include "colorcode/io/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "colorcode/core/error.hpp"
#include "colorcode/core/image.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/io/image_io.hpp"

namespace colorcode::io {

namespace fs = std::filesystem;

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  fail(ErrorKind::InvalidArgument, "unknown split '" + name + "' (expected train or test)");
}

namespace {

bool is_image_file(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::set<std::string> list_images(const fs::path& dir) {
  std::set<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      out.insert(fs::relative(entry.path(), dir).generic_string());
    }
  }
  return out;
}

}  // namespace

PairedDataset load_paired_dataset(const fs::path& root, Split split) {
  PairedDataset ds;
  ds.root = root;
  ds.split = split;
  if (!fs::is_directory(root)) fail(ErrorKind::NotFound, "dataset root does not exist: " + root.string());

  const auto manifest = root / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidArgument, "dataset manifest is not valid JSON: " + std::string(e.what()));
    }
    require(doc.is_array(), "dataset manifest must be a JSON list of {input, gt} entries");
    for (const auto& entry : doc) {
      require(entry.is_object() && entry.contains("input") && entry.contains("gt"),
              "dataset manifest entries need 'input' and 'gt'");
      const auto in_rel = entry["input"].get<std::string>();
      const auto gt_rel = entry["gt"].get<std::string>();
      if (!fs::exists(root / in_rel) || !fs::exists(root / gt_rel)) {
        ds.warnings.push_back("manifest entry missing on disk: " + in_rel + " / " + gt_rel);
        continue;
      }
      ds.pairs.push_back({in_rel, root / in_rel, root / gt_rel});
    }
  } else {
    const auto inputs = list_images(root / "input");
    const auto refs = list_images(root / "gt");
    for (const auto& name : inputs) {
      if (refs.count(name)) {
        ds.pairs.push_back({name, root / "input" / name, root / "gt" / name});
      } else {
        ds.warnings.push_back("unpaired file input/" + name);
      }
    }
    for (const auto& name : refs) {
      if (!inputs.count(name)) ds.warnings.push_back("unpaired file gt/" + name);
    }
  }
  std::sort(ds.pairs.begin(), ds.pairs.end(), [](const ImagePair& a, const ImagePair& b) { return a.id < b.id; });
  for (const auto& w : ds.warnings) log::warn("dataset_warning", {{"root", root.string()}, {"message", w}});
  if (ds.pairs.empty()) fail(ErrorKind::InvalidArgument, "dataset at " + root.string() + " contains no image pairs");
  log::info("dataset_loaded", {{"root", root.string()}, {"pairs", ds.pairs.size()}, {"warnings", ds.warnings.size()}});
  return ds;
}

Rgb8Image PairTransform::apply(const Rgb8Image& img) const {
  auto out = crop(resize(img, resized_width, resized_height), crop_x, crop_y, size, size);
  return flip ? flip_horizontal(out) : out;
}

namespace {

PairTransform plan_transform(int src_w, int src_h, int size, Split split, std::mt19937_64& rng) {
  PairTransform t;
  t.size = size;
  if (src_w <= src_h) {
    t.resized_width = size;
    t.resized_height = std::max(size, static_cast<int>(std::lround(static_cast<double>(src_h) * size / src_w)));
  } else {
    t.resized_height = size;
    t.resized_width = std::max(size, static_cast<int>(std::lround(static_cast<double>(src_w) * size / src_h)));
  }
  const int slack_x = t.resized_width - size;
  const int slack_y = t.resized_height - size;
  if (split == Split::Train) {
    t.crop_x = slack_x > 0 ? static_cast<int>(rng() % static_cast<std::uint64_t>(slack_x + 1)) : 0;
    t.crop_y = slack_y > 0 ? static_cast<int>(rng() % static_cast<std::uint64_t>(slack_y + 1)) : 0;
    t.flip = (rng() & 1u) != 0;
  } else {
    t.crop_x = slack_x / 2;
    t.crop_y = slack_y / 2;
  }
  return t;
}

torch::Tensor to_tensor(const Rgb8Image& img) { return normalize_image(img).tensor(); }

}  // namespace

BatchStream::BatchStream(PairedDataset dataset, const TrainConfig& cfg, Split split)
    : dataset_(std::move(dataset)),
      image_size_(cfg.image_size),
      batch_size_(cfg.batch_size),
      seed_(cfg.seed),
      split_(split) {
  require(!dataset_.pairs.empty(), "cannot batch an empty dataset");
  require(batch_size_ > 0, "batch_size must be positive");
  require(image_size_ > 0 && image_size_ % 4 == 0, "image_size must be a positive multiple of 4");
}

std::int64_t BatchStream::batches_per_epoch() const {
  const auto n = static_cast<std::int64_t>(dataset_.size());
  return (n + batch_size_ - 1) / batch_size_;
}

std::vector<std::size_t> BatchStream::epoch_order(std::int64_t epoch) const {
  std::vector<std::size_t> order(dataset_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (split_ == Split::Train) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(epoch), 0x5EEDu};
    std::mt19937_64 rng(seq);
    // Fisher-Yates with an explicit draw so the order does not depend on the
    // standard library's shuffle implementation.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

std::pair<Rgb8Image, Rgb8Image> BatchStream::load_pair(std::size_t i) const {
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(i); it != cache_.end()) return it->second;
  }
  const auto& pair = dataset_.pairs[i];
  auto x = read_image(pair.input);
  auto y = read_image(pair.reference);
  // Resize both to the input's short-side geometry so one transform fits both.
  std::mt19937_64 unused;
  const auto plan = plan_transform(x.width, x.height, image_size_, Split::Test, unused);
  auto entry = std::make_pair(resize(x, plan.resized_width, plan.resized_height),
                              resize(y, plan.resized_width, plan.resized_height));
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(i, entry);
  return entry;
}

Batch BatchStream::batch(std::int64_t index) const {
  require(index >= 0, "batch index must be non-negative");
  const auto per_epoch = batches_per_epoch();
  const auto epoch = index / per_epoch;
  const auto within = index % per_epoch;
  const auto order = epoch_order(epoch);
  const auto begin = static_cast<std::size_t>(within * batch_size_);
  const auto end = std::min(order.size(), begin + static_cast<std::size_t>(batch_size_));

  Batch out;
  std::vector<torch::Tensor> xs, ys;
  for (std::size_t k = begin; k < end; ++k) {
    const auto i = order[k];
    std::pair<Rgb8Image, Rgb8Image> images;
    try {
      images = load_pair(i);
    } catch (const Error& e) {
      log::warn("sample_skipped", {{"id", dataset_.pairs[i].id}, {"reason", e.what()}});
      continue;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(i), 0xA06u};
    std::mt19937_64 rng(seq);
    const auto t = plan_transform(images.first.width, images.first.height, image_size_, split_, rng);
    xs.push_back(to_tensor(t.apply(images.first)));
    ys.push_back(to_tensor(t.apply(images.second)));
    out.ids.push_back(dataset_.pairs[i].id);
    out.transforms.push_back(t);
  }
  if (!xs.empty()) {
    out.x = torch::stack(xs);
    out.y = torch::stack(ys);
  }
  return out;
}

}  // namespace colorcode::io
