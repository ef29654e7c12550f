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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "colorcode/core/rgb8.hpp"
#include "colorcode/io/dataset.hpp"

namespace colorcode::metrics {

struct EvaluationRow {
  std::string sample_id;
  double psnr = 0.0;
  double ssim = 0.0;
  double uiqm = 0.0;
};

struct EvaluationTable {
  std::vector<EvaluationRow> rows;  // sorted by sample_id
  EvaluationRow mean;               // sample_id "mean"
  std::vector<std::string> skipped;
};

using EnhanceFn = std::function<Rgb8Image(const Rgb8Image&)>;

// Both images of every pair go through the test-split geometry (short side to
// image_size, center crop); PSNR/SSIM compare enhance(x) with y, UIQM scores
// enhance(x). Unreadable pairs are skipped and logged.
EvaluationTable evaluate_dataset(const io::PairedDataset& dataset, int image_size, const EnhanceFn& enhance);

// Writes <dir>/evaluation.csv (sample_id,psnr,ssim,uiqm) and <dir>/evaluation.json.
void write_evaluation(const EvaluationTable& table, const std::filesystem::path& dir);

nlohmann::json to_json(const EvaluationTable& table);

}  // namespace colorcode::metrics
