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
#include <optional>

#include <json.hpp>

#include "colorcode/core/config.hpp"

namespace colorcode::losses {

// Scalar values of the individual objective terms for one step.
struct LossParts {
  double L_m = 0.0;       // enhancement
  double L_r_xy = 0.0;    // self reconstruction, both domains
  double L_r_cc = 0.0;    // content-code reconstruction
  double L_r_ss = 0.0;    // style-code reconstruction
  double L_G_adv = 0.0;   // generator adversarial term, both domains
  double L_D_x = 0.0;     // discriminator loss, domain x
  double L_D_y = 0.0;     // discriminator loss, domain y
  std::optional<double> L_cc;  // color-code distribution constraint
};

struct LossReport {
  LossParts parts;
  double total_generator = 0.0;
  double total_discriminator = 0.0;
};

// Weighted generator objective, shared by the scalar report and the
// autograd path so both always agree:
//   adv + l1 (m + r_xy) + l2 (r_cc + r_ss) [+ l3 cc]
template <typename T>
T weighted_generator_total(const T& adv, const T& m, const T& r_xy, const T& r_cc, const T& r_ss, const T* cc,
                           const TrainConfig& cfg) {
  T total = adv + cfg.lambda1 * (m + r_xy) + cfg.lambda2 * (r_cc + r_ss);
  if (cfg.mmd_enabled && cc != nullptr) total = total + cfg.lambda3 * (*cc);
  return total;
}

// Aggregates parts into totals. L_cc is dropped when mmd is disabled and
// required when enabled. Non-finite parts are rejected by name.
LossReport total_losses(const LossParts& parts, const TrainConfig& cfg);

// One flat JSON object; L_cc is omitted when absent.
nlohmann::json to_json(const LossReport& report);
LossReport loss_report_from_json(const nlohmann::json& doc);

}  // namespace colorcode::losses
