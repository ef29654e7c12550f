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

#include "colorcode/metrics/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "colorcode/core/error.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/metrics/quality.hpp"

namespace colorcode::metrics {

EvaluationTable evaluate_dataset(const io::PairedDataset& dataset, int image_size, const EnhanceFn& enhance) {
  require(!dataset.pairs.empty(), "evaluate_dataset: empty dataset");
  require(image_size > 0, "evaluate_dataset: image_size must be positive");
  EvaluationTable table;
  for (const auto& pair : dataset.pairs) {
    Rgb8Image x, y;
    try {
      x = io::center_square(io::read_image(pair.input), image_size);
      y = io::center_square(io::read_image(pair.reference), image_size);
    } catch (const Error& e) {
      log::warn("evaluation_sample_skipped", {{"id", pair.id}, {"reason", e.what()}});
      table.skipped.push_back(pair.id);
      continue;
    }
    const auto out = enhance(x);
    table.rows.push_back({pair.id, psnr(out, y), ssim(out, y), uiqm(out)});
  }
  if (table.rows.empty()) fail(ErrorKind::InvalidArgument, "evaluate_dataset: no readable pairs");
  std::sort(table.rows.begin(), table.rows.end(),
            [](const EvaluationRow& a, const EvaluationRow& b) { return a.sample_id < b.sample_id; });
  table.mean.sample_id = "mean";
  for (const auto& r : table.rows) {
    table.mean.psnr += r.psnr;
    table.mean.ssim += r.ssim;
    table.mean.uiqm += r.uiqm;
  }
  const auto n = static_cast<double>(table.rows.size());
  table.mean.psnr /= n;
  table.mean.ssim /= n;
  table.mean.uiqm /= n;
  return table;
}

nlohmann::json to_json(const EvaluationTable& table) {
  auto row = [](const EvaluationRow& r) {
    return nlohmann::json{{"sample_id", r.sample_id}, {"psnr", r.psnr}, {"ssim", r.ssim}, {"uiqm", r.uiqm}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) rows.push_back(row(r));
  return {{"rows", rows}, {"mean", row(table.mean)}, {"skipped", table.skipped}};
}

void write_evaluation(const EvaluationTable& table, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream csv(dir / "evaluation.csv");
  if (!csv) fail(ErrorKind::Io, "cannot write " + (dir / "evaluation.csv").string());
  csv << "sample_id,psnr,ssim,uiqm\n" << std::setprecision(10);
  for (const auto& r : table.rows) csv << r.sample_id << ',' << r.psnr << ',' << r.ssim << ',' << r.uiqm << '\n';
  std::ofstream json(dir / "evaluation.json");
  if (!json) fail(ErrorKind::Io, "cannot write " + (dir / "evaluation.json").string());
  json << to_json(table).dump(2) << '\n';
}

}  // namespace colorcode::metrics
