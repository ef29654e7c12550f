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

#include "colorcode/losses/report.hpp"

#include <cmath>
#include <string>

#include "colorcode/core/error.hpp"

namespace colorcode::losses {

LossReport total_losses(const LossParts& parts, const TrainConfig& cfg) {
  auto finite = [](const char* name, double v) {
    if (!std::isfinite(v)) fail(ErrorKind::NumericalFailure, std::string("loss term ") + name + " is not finite");
  };
  finite("L_m", parts.L_m);
  finite("L_r_xy", parts.L_r_xy);
  finite("L_r_cc", parts.L_r_cc);
  finite("L_r_ss", parts.L_r_ss);
  finite("L_G_adv", parts.L_G_adv);
  finite("L_D_x", parts.L_D_x);
  finite("L_D_y", parts.L_D_y);

  LossReport report;
  report.parts = parts;
  if (cfg.mmd_enabled) {
    require(parts.L_cc.has_value(), "L_cc is required when mmd_enabled is true");
    finite("L_cc", *parts.L_cc);
  } else {
    report.parts.L_cc.reset();
  }
  const double* cc = report.parts.L_cc ? &*report.parts.L_cc : nullptr;
  report.total_generator =
      weighted_generator_total(parts.L_G_adv, parts.L_m, parts.L_r_xy, parts.L_r_cc, parts.L_r_ss, cc, cfg);
  report.total_discriminator = parts.L_D_x + parts.L_D_y;
  return report;
}

nlohmann::json to_json(const LossReport& r) {
  nlohmann::json j = {
      {"L_m", r.parts.L_m},
      {"L_r_xy", r.parts.L_r_xy},
      {"L_r_cc", r.parts.L_r_cc},
      {"L_r_ss", r.parts.L_r_ss},
      {"L_G_adv", r.parts.L_G_adv},
      {"L_D_x", r.parts.L_D_x},
      {"L_D_y", r.parts.L_D_y},
      {"total_generator", r.total_generator},
      {"total_discriminator", r.total_discriminator},
  };
  if (r.parts.L_cc) j["L_cc"] = *r.parts.L_cc;
  return j;
}

LossReport loss_report_from_json(const nlohmann::json& j) {
  LossReport r;
  r.parts.L_m = j.at("L_m").get<double>();
  r.parts.L_r_xy = j.at("L_r_xy").get<double>();
  r.parts.L_r_cc = j.at("L_r_cc").get<double>();
  r.parts.L_r_ss = j.at("L_r_ss").get<double>();
  r.parts.L_G_adv = j.at("L_G_adv").get<double>();
  r.parts.L_D_x = j.at("L_D_x").get<double>();
  r.parts.L_D_y = j.at("L_D_y").get<double>();
  if (j.contains("L_cc")) r.parts.L_cc = j.at("L_cc").get<double>();
  r.total_generator = j.at("total_generator").get<double>();
  r.total_discriminator = j.at("total_discriminator").get<double>();
  return r;
}

}  // namespace colorcode::losses
