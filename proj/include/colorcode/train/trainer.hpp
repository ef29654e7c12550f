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
#include <memory>

#include <torch/torch.h>

#include "colorcode/core/config.hpp"
#include "colorcode/io/dataset.hpp"
#include "colorcode/losses/report.hpp"
#include "colorcode/nn/bundle.hpp"

namespace colorcode::train {

// n i.i.d. draws from N(mean, std^2) per dimension, n×code_length.
torch::Tensor sample_prior(std::int64_t n, int code_length, double mean, double std, torch::Generator& rng,
                           torch::ScalarType dtype = torch::kFloat32);

torch::Generator make_generator(std::uint64_t seed);

struct TrainState {
  TrainConfig config;
  std::unique_ptr<nn::NetworkBundle> bundle;
  std::unique_ptr<torch::optim::Adam> generator_optimizer;      // encoders + decoders
  std::unique_ptr<torch::optim::Adam> discriminator_optimizer;  // discriminators
  std::int64_t iteration = 0;
  std::int64_t data_cursor = 0;  // next global batch index of the data stream
  torch::Generator rng;          // prior and style-code sampling

  // Fresh state: parameters initialized from cfg.seed, empty optimizer moments.
  static TrainState create(const TrainConfig& cfg);

  // Applies lr/betas from config_ to both optimizers.
  void sync_optimizer_options();
};

struct StepDiagnostics {
  // Sum of squared generator-set gradients right after the discriminator
  // backward pass. Zero when fakes are properly detached.
  double generator_grad_sq_in_discriminator_phase = 0.0;
};

// One synchronous min-max step: (a) discriminator update on detached cross
// reconstructions, (b) generator-set update on the full weighted objective.
// On a non-finite term the state is rolled back and Error(NumericalFailure)
// names the term.
losses::LossReport train_step(TrainState& state, const io::Batch& batch, StepDiagnostics* diagnostics = nullptr);

// Receives checkpoints from the loop.
class CheckpointSink {
 public:
  virtual ~CheckpointSink() = default;
  virtual void save(const TrainState& state) = 0;
};

// Receives one record per logged step.
class LossLogSink {
 public:
  virtual ~LossLogSink() = default;
  virtual void write(std::int64_t iteration, const losses::LossReport& report, double wall_ms) = 0;
  virtual void flush() {}
};

// Writes ckpt_<iteration>.ccz + latest.ccz and loss_log.jsonl into a run directory.
class RunDirectorySink : public CheckpointSink, public LossLogSink {
 public:
  explicit RunDirectorySink(std::filesystem::path dir);
  void save(const TrainState& state) override;
  void write(std::int64_t iteration, const losses::LossReport& report, double wall_ms) override;
  void flush() override;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::unique_ptr<std::ofstream> log_;
};

// JSON line for the loss log: {iteration, ...report fields, wall_ms}.
nlohmann::json loss_log_line(std::int64_t iteration, const losses::LossReport& report, double wall_ms);

// Runs train_step until cfg.total_iterations. Starts fresh unless `resume`
// holds a state (whose architecture must match cfg). A fresh run writes an
// initial checkpoint; afterwards one every checkpoint_interval steps and one
// at the end.
TrainState train_loop(const TrainConfig& cfg, const io::PairedDataset& dataset, CheckpointSink* checkpoints,
                      LossLogSink* loss_log, std::unique_ptr<TrainState> resume = nullptr);

}  // namespace colorcode::train
