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

#include "colorcode/train/trainer.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

#include "colorcode/core/error.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/io/checkpoint.hpp"
#include "colorcode/losses/losses.hpp"
#include "colorcode/losses/mmd.hpp"

namespace colorcode::train {

using nn::Domain;

torch::Generator make_generator(std::uint64_t seed) { return at::make_generator<at::CPUGeneratorImpl>(seed); }

torch::Tensor sample_prior(std::int64_t n, int code_length, double mean, double std, torch::Generator& rng,
                           torch::ScalarType dtype) {
  require(n >= 1, "sample_prior: n must be at least 1");
  require(code_length >= 1, "sample_prior: code length must be positive");
  require(std::isfinite(std) && std > 0.0, "sample_prior: sigma must be positive");
  auto draws = torch::randn({n, code_length}, rng, torch::TensorOptions().dtype(torch::kFloat64));
  return (draws * std + mean).to(dtype);
}

namespace {

std::unique_ptr<torch::optim::Adam> make_adam(std::vector<torch::Tensor> params, const TrainConfig& cfg) {
  return std::make_unique<torch::optim::Adam>(
      std::move(params),
      torch::optim::AdamOptions(cfg.learning_rate).betas({cfg.adam_beta1, cfg.adam_beta2}));
}

// Deep copy of the discriminator parameters and Adam moments so a failed
// generator phase can undo the discriminator update.
class DiscriminatorSnapshot {
 public:
  DiscriminatorSnapshot(const std::vector<torch::Tensor>& params, torch::optim::Adam& opt) {
    for (const auto& p : params) params_.push_back(p.detach().clone());
    for (auto& [key, st] : opt.state()) {
      auto& src = static_cast<torch::optim::AdamParamState&>(*st);
      auto copy = std::make_unique<torch::optim::AdamParamState>();
      copy->step(src.step());
      copy->exp_avg(src.exp_avg().clone());
      copy->exp_avg_sq(src.exp_avg_sq().clone());
      if (src.max_exp_avg_sq().defined()) copy->max_exp_avg_sq(src.max_exp_avg_sq().clone());
      states_.emplace_back(key, std::move(copy));
    }
  }

  void restore(const std::vector<torch::Tensor>& params, torch::optim::Adam& opt) {
    torch::NoGradGuard no_grad;
    for (std::size_t i = 0; i < params.size(); ++i) params[i].copy_(params_[i]);
    opt.state().clear();
    for (auto& [key, st] : states_) opt.state()[key] = std::move(st);
  }

 private:
  std::vector<torch::Tensor> params_;
  std::vector<std::pair<void*, std::unique_ptr<torch::optim::OptimizerParamState>>> states_;
};

double scalar(const torch::Tensor& t) { return t.detach().to(torch::kFloat64).item<double>(); }

void set_requires_grad(const std::vector<torch::Tensor>& params, bool flag) {
  for (auto p : params) p.requires_grad_(flag);
}

}  // namespace

TrainState TrainState::create(const TrainConfig& cfg) {
  TrainState s;
  s.config = validated(cfg);
  s.bundle = std::make_unique<nn::NetworkBundle>(s.config);
  s.generator_optimizer = make_adam(s.bundle->generator_parameters(), s.config);
  s.discriminator_optimizer = make_adam(s.bundle->discriminator_parameters(), s.config);
  s.rng = make_generator(s.config.seed ^ 0x9E3779B97F4A7C15ull);
  return s;
}

void TrainState::sync_optimizer_options() {
  for (auto* opt : {generator_optimizer.get(), discriminator_optimizer.get()}) {
    for (auto& group : opt->param_groups()) {
      auto& o = static_cast<torch::optim::AdamOptions&>(group.options());
      o.lr(config.learning_rate);
      o.betas({config.adam_beta1, config.adam_beta2});
    }
  }
}

losses::LossReport train_step(TrainState& state, const io::Batch& batch, StepDiagnostics* diagnostics) {
  const TrainConfig& cfg = state.config;
  auto& net = *state.bundle;
  require(batch.x.defined() && batch.y.defined() && batch.size() > 0, "train_step: empty batch");
  require(batch.x.sizes() == batch.y.sizes(), "train_step: x and y batches differ in shape");
  const auto n = batch.x.size(0);
  if (cfg.mmd_enabled) {
    require(n >= 2, "train_step: batch size must be at least 2 when mmd_enabled (got " + std::to_string(n) + ")");
  }
  const auto dtype = net.dtype();
  const auto x = batch.x.to(dtype);
  const auto y = batch.y.to(dtype);
  const auto rng_before = state.rng.get_state();
  const auto gen_params = net.generator_parameters();
  const auto disc_params = net.discriminator_parameters();

  auto abort = [&](const std::string& term) {
    state.rng.set_state(rng_before);
    fail(ErrorKind::NumericalFailure, "train_step aborted at iteration " + std::to_string(state.iteration) +
                                          ": loss term " + term + " is not finite");
  };

  // (a) Discriminators on detached cross reconstructions.
  torch::Tensor x_fake, y_fake;
  {
    torch::NoGradGuard no_grad;
    const auto c_x = net.content(x, Domain::X);
    const auto c_y = net.content(y, Domain::Y);
    const auto s_x = sample_prior(n, cfg.code_length, 0.0, 1.0, state.rng, dtype);
    const auto s_y = sample_prior(n, cfg.code_length, 0.0, 1.0, state.rng, dtype);
    x_fake = net.reconstruct_decode(c_y, s_x, Domain::X);
    y_fake = net.reconstruct_decode(c_x, s_y, Domain::Y);
  }
  state.generator_optimizer->zero_grad();
  state.discriminator_optimizer->zero_grad();
  const auto d_x = losses::adversarial_loss_discriminator(net.discriminate(x, Domain::X),
                                                          net.discriminate(x_fake, Domain::X));
  const auto d_y = losses::adversarial_loss_discriminator(net.discriminate(y, Domain::Y),
                                                          net.discriminate(y_fake, Domain::Y));
  const double d_x_value = scalar(d_x);
  const double d_y_value = scalar(d_y);
  if (!std::isfinite(d_x_value)) abort("L_D_x");
  if (!std::isfinite(d_y_value)) abort("L_D_y");
  (d_x + d_y).backward();
  if (diagnostics) {
    double sq = 0.0;
    for (const auto& p : gen_params) {
      if (p.grad().defined()) sq += p.grad().pow(2).sum().item<double>();
    }
    diagnostics->generator_grad_sq_in_discriminator_phase = sq;
  }
  DiscriminatorSnapshot snapshot(disc_params, *state.discriminator_optimizer);
  state.discriminator_optimizer->step();

  // (b) Generator set on the full objective.
  state.generator_optimizer->zero_grad();
  set_requires_grad(disc_params, false);
  struct RestoreGrad {
    const std::vector<torch::Tensor>& params;
    ~RestoreGrad() { set_requires_grad(params, true); }
  } restore_grad{disc_params};

  // P1: enhancement.
  const auto c_x = net.content(x, Domain::X);
  const auto m_x = net.color(x);
  const auto y_hat = net.enhance_decode(c_x, m_x);
  const auto l_m = losses::enhancement_loss(y_hat, y, cfg.structure_loss_enabled);

  // P2: self reconstruction.
  const auto s_x = net.style(x, Domain::X);
  const auto c_y = net.content(y, Domain::Y);
  const auto s_y = net.style(y, Domain::Y);
  const auto l_r_xy = losses::self_reconstruction_loss(net.reconstruct_decode(c_x, s_x, Domain::X), x,
                                                       net.reconstruct_decode(c_y, s_y, Domain::Y), y);

  // P2: cross reconstruction with sampled style codes.
  const auto s_dot_x = sample_prior(n, cfg.code_length, 0.0, 1.0, state.rng, dtype);
  const auto s_dot_y = sample_prior(n, cfg.code_length, 0.0, 1.0, state.rng, dtype);
  const auto x_cross = net.reconstruct_decode(c_y, s_dot_x, Domain::X);
  const auto y_cross = net.reconstruct_decode(c_x, s_dot_y, Domain::Y);
  const auto l_r_cc = losses::content_code_reconstruction_loss(c_x, net.content(y_cross, Domain::Y), c_y,
                                                               net.content(x_cross, Domain::X));
  const auto l_r_ss = losses::style_code_reconstruction_loss(s_dot_x, net.style(x_cross, Domain::X), s_dot_y,
                                                             net.style(y_cross, Domain::Y));
  const auto l_adv = losses::adversarial_loss_generator(net.discriminate(x_cross, Domain::X)) +
                     losses::adversarial_loss_generator(net.discriminate(y_cross, Domain::Y));

  torch::Tensor l_cc;
  if (cfg.mmd_enabled) {
    const auto z = sample_prior(n, cfg.code_length, cfg.prior_mean, cfg.prior_std, state.rng, dtype);
    l_cc = losses::mmd_loss(m_x, z, losses::Kernel::from_config(cfg));
  }

  losses::LossParts parts;
  parts.L_m = scalar(l_m);
  parts.L_r_xy = scalar(l_r_xy);
  parts.L_r_cc = scalar(l_r_cc);
  parts.L_r_ss = scalar(l_r_ss);
  parts.L_G_adv = scalar(l_adv);
  parts.L_D_x = d_x_value;
  parts.L_D_y = d_y_value;
  if (cfg.mmd_enabled) parts.L_cc = scalar(l_cc);

  const std::pair<const char*, double> checks[] = {{"L_m", parts.L_m},       {"L_r_xy", parts.L_r_xy},
                                                   {"L_r_cc", parts.L_r_cc}, {"L_r_ss", parts.L_r_ss},
                                                   {"L_G_adv", parts.L_G_adv}, {"L_cc", parts.L_cc.value_or(0.0)}};
  for (const auto& [name, value] : checks) {
    if (!std::isfinite(value)) {
      snapshot.restore(disc_params, *state.discriminator_optimizer);
      abort(name);
    }
  }

  const auto total = losses::weighted_generator_total(l_adv, l_m, l_r_xy, l_r_cc, l_r_ss,
                                                      cfg.mmd_enabled ? &l_cc : nullptr, cfg);
  total.backward();
  state.generator_optimizer->step();
  ++state.iteration;
  return losses::total_losses(parts, cfg);
}

nlohmann::json loss_log_line(std::int64_t iteration, const losses::LossReport& report, double wall_ms) {
  nlohmann::json line = {{"iteration", iteration}};
  const auto fields = losses::to_json(report);
  for (const auto& [k, v] : fields.items()) line[k] = v;
  line["wall_ms"] = wall_ms;
  return line;
}

RunDirectorySink::RunDirectorySink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::Io, "cannot create run directory " + dir_.string() + ": " + ec.message());
}

void RunDirectorySink::save(const TrainState& state) {
  std::ostringstream name;
  name << "ckpt_" << std::setw(8) << std::setfill('0') << state.iteration << ".ccz";
  const auto path = dir_ / name.str();
  io::save_checkpoint(state, path);
  std::error_code ec;
  std::filesystem::copy_file(path, dir_ / "latest.ccz", std::filesystem::copy_options::overwrite_existing, ec);
  if (ec) fail(ErrorKind::Io, "cannot update latest.ccz: " + ec.message());
  log::info("checkpoint_saved", {{"path", path.string()}, {"iteration", state.iteration}});
}

void RunDirectorySink::write(std::int64_t iteration, const losses::LossReport& report, double wall_ms) {
  if (!log_) {
    log_ = std::make_unique<std::ofstream>(dir_ / "loss_log.jsonl", std::ios::app);
    if (!*log_) fail(ErrorKind::Io, "cannot open loss log in " + dir_.string());
  }
  *log_ << loss_log_line(iteration, report, wall_ms).dump() << '\n';
}

void RunDirectorySink::flush() {
  if (log_) log_->flush();
}

TrainState train_loop(const TrainConfig& cfg, const io::PairedDataset& dataset, CheckpointSink* checkpoints,
                      LossLogSink* loss_log, std::unique_ptr<TrainState> resume) {
  validated(cfg);
  require(!dataset.pairs.empty(), "train_loop: dataset is empty");
  const std::int64_t min_batch = cfg.mmd_enabled ? 2 : 1;
  require(static_cast<std::int64_t>(dataset.size()) >= min_batch,
          "train_loop: mmd_enabled needs at least 2 training pairs");

  TrainState state;
  const bool fresh = !resume;
  if (resume) {
    const auto mismatches = architecture_mismatches(resume->config, cfg);
    if (!mismatches.empty()) {
      fail(ErrorKind::Conflict, "cannot resume: checkpoint architecture differs in " + mismatches.front() +
                                    "\ncheckpoint config: " + to_json(resume->config).dump() +
                                    "\nrequested config: " + to_json(cfg).dump());
    }
    state = std::move(*resume);
    state.config = cfg;
    state.sync_optimizer_options();
  } else {
    state = TrainState::create(cfg);
  }

  auto flush_log = [&] {
    if (loss_log) loss_log->flush();
  };
  auto save = [&] {
    if (!checkpoints) return;
    try {
      checkpoints->save(state);
    } catch (...) {
      flush_log();
      log::error("checkpoint_failed", {{"iteration", state.iteration}});
      throw;
    }
  };

  if (fresh) save();
  std::int64_t last_saved = fresh ? state.iteration : -1;

  io::BatchStream stream(dataset, cfg, io::Split::Train);
  const auto start = std::chrono::steady_clock::now();
  auto fetch = [&stream](std::int64_t index) {
    return std::async(std::launch::async, [&stream, index] { return stream.batch(index); });
  };
  auto next = fetch(state.data_cursor);
  std::int64_t consecutive_skips = 0;
  while (state.iteration < cfg.total_iterations) {
    auto batch = next.get();
    next = fetch(state.data_cursor + 1);
    if (batch.size() < min_batch) {
      log::warn("batch_skipped", {{"cursor", state.data_cursor}, {"size", batch.size()}});
      ++state.data_cursor;
      if (++consecutive_skips > stream.batches_per_epoch()) {
        flush_log();
        fail(ErrorKind::InvalidArgument, "train_loop: no usable batch in a full epoch");
      }
      continue;
    }
    consecutive_skips = 0;
    const auto report = train_step(state, batch);
    ++state.data_cursor;
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (loss_log && state.iteration % cfg.log_interval == 0) loss_log->write(state.iteration, report, wall_ms);
    if (state.iteration % cfg.checkpoint_interval == 0) {
      save();
      last_saved = state.iteration;
    }
  }
  next.wait();
  if (last_saved != state.iteration) save();
  flush_log();
  return state;
}

}  // namespace colorcode::train
