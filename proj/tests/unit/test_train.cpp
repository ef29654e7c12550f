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

#include "test_framework.hpp"

#include <fstream>
#include <limits>

#include "colorcode/core/error.hpp"
#include "colorcode/io/checkpoint.hpp"
#include "colorcode/io/dataset.hpp"
#include "colorcode/train/trainer.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

using namespace colorcode;
namespace fs = std::filesystem;

namespace {

io::Batch random_batch(std::uint64_t seed, int n = 2, int size = 32) {
  torch::manual_seed(seed);
  io::Batch b;
  b.x = torch::rand({n, 3, size, size}) * 2 - 1;
  b.y = torch::rand({n, 3, size, size}) * 2 - 1;
  for (int i = 0; i < n; ++i) b.ids.push_back(std::to_string(i));
  return b;
}

struct MemorySink : train::CheckpointSink, train::LossLogSink {
  std::vector<std::int64_t> saved;
  std::vector<std::pair<std::int64_t, losses::LossReport>> records;
  int flushes = 0;
  int fail_on_save = -1;

  void save(const train::TrainState& state) override {
    if (static_cast<int>(saved.size()) == fail_on_save) fail(ErrorKind::Io, "disk full");
    saved.push_back(state.iteration);
  }
  void write(std::int64_t iteration, const losses::LossReport& report, double) override {
    records.emplace_back(iteration, report);
  }
  void flush() override { ++flushes; }
};

bool all_finite(const std::vector<torch::Tensor>& tensors) {
  for (const auto& t : tensors) {
    if (!torch::isfinite(t).all().item<bool>()) return false;
  }
  return true;
}

std::vector<torch::Tensor> snapshot(const train::TrainState& s) {
  std::vector<torch::Tensor> out;
  for (const auto& p : s.bundle->generator_parameters()) out.push_back(p.detach().clone());
  for (const auto& p : s.bundle->discriminator_parameters()) out.push_back(p.detach().clone());
  return out;
}

bool same(const std::vector<torch::Tensor>& a, const std::vector<torch::Tensor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!torch::equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("prior samples have the requested moments") {
  auto rng = train::make_generator(3);
  const auto z = train::sample_prior(10000, 8, 0.0, 1.0, rng, torch::kFloat64);
  CHECK(z.sizes() == torch::IntArrayRef({10000, 8}));
  const auto mean = z.mean(0);
  const auto sd = z.std(0);
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(mean[k].item<double>()) <= 0.05);
    CHECK(sd[k].item<double>() >= 0.95);
    CHECK(sd[k].item<double>() <= 1.05);
  }
  const auto shifted = train::sample_prior(10000, 8, 1.0, 1.0, rng, torch::kFloat64).mean(0);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(shifted[k].item<double>() - 1.0) <= 0.05);
}

TEST_CASE("prior sampling is deterministic and validates its arguments") {
  auto a = train::make_generator(9);
  auto b = train::make_generator(9);
  CHECK(torch::equal(train::sample_prior(5, 3, 0, 1, a), train::sample_prior(5, 3, 0, 1, b)));
  CHECK((train::sample_prior(5, 3, 0, 1, a).scalar_type() == torch::kFloat32));
  CHECK_THROWS_AS(train::sample_prior(5, 3, 0, 0.0, a), Error);
  CHECK_THROWS_AS(train::sample_prior(5, 3, 0, -1.0, a), Error);
  CHECK_THROWS_AS(train::sample_prior(0, 3, 0, 1.0, a), Error);
}

TEST_CASE("optimizers carry the configured Adam hyperparameters") {
  const auto state = train::TrainState::create(testing::tiny_config());
  for (auto* opt : {state.generator_optimizer.get(), state.discriminator_optimizer.get()}) {
    const auto& o = static_cast<const torch::optim::AdamOptions&>(opt->param_groups()[0].options());
    CHECK(o.lr() == 1e-4);
    CHECK(std::get<0>(o.betas()) == 0.5);
    CHECK(std::get<1>(o.betas()) == 0.999);
  }
  CHECK(state.generator_optimizer->param_groups()[0].params().size() == state.bundle->generator_parameters().size());
  CHECK(state.discriminator_optimizer->param_groups()[0].params().size() ==
        state.bundle->discriminator_parameters().size());
}

TEST_CASE("a training step is deterministic and keeps everything finite") {
  const auto cfg = testing::tiny_config();
  auto a = train::TrainState::create(cfg);
  auto b = train::TrainState::create(cfg);
  for (int i = 0; i < 3; ++i) {
    const auto batch = random_batch(100 + i);
    train::StepDiagnostics diag;
    const auto ra = train::train_step(a, batch, &diag);
    const auto rb = train::train_step(b, batch);
    CHECK(losses::to_json(ra) == losses::to_json(rb));
    CHECK(diag.generator_grad_sq_in_discriminator_phase == 0.0);
    CHECK(a.iteration == i + 1);
    REQUIRE(ra.parts.L_cc.has_value());
    CHECK(ra.total_generator == doctest::Approx(losses::total_losses(ra.parts, cfg).total_generator).epsilon(1e-6));
    CHECK(ra.total_discriminator == doctest::Approx(ra.parts.L_D_x + ra.parts.L_D_y).epsilon(1e-6));
  }
  CHECK(same(snapshot(a), snapshot(b)));
  CHECK(all_finite(snapshot(a)));
  for (auto* opt : {a.generator_optimizer.get(), a.discriminator_optimizer.get()}) {
    for (const auto& [key, st] : opt->state()) {
      const auto& adam = static_cast<const torch::optim::AdamParamState&>(*st);
      CHECK(adam.step() == 3);
      CHECK(all_finite({adam.exp_avg(), adam.exp_avg_sq()}));
    }
  }
}

TEST_CASE("the constraint term is absent when disabled") {
  auto cfg = testing::tiny_config();
  cfg.mmd_enabled = false;
  auto state = train::TrainState::create(cfg);
  const auto report = train::train_step(state, random_batch(1, 1));
  CHECK_FALSE(report.parts.L_cc.has_value());
  CHECK_FALSE(losses::to_json(report).contains("L_cc"));
}

TEST_CASE("the constraint needs two samples per batch") {
  auto state = train::TrainState::create(testing::tiny_config());
  CHECK_THROWS_AS(train::train_step(state, random_batch(1, 1)), Error);
  CHECK(state.iteration == 0);
}

TEST_CASE("a non-finite loss rolls the step back and names the term") {
  auto state = train::TrainState::create(testing::tiny_config());
  train::train_step(state, random_batch(1));
  const auto before = snapshot(state);
  const auto rng_before = state.rng.get_state();
  auto bad = random_batch(2);
  bad.y[0][0][0][0] = std::numeric_limits<float>::quiet_NaN();
  try {
    train::train_step(state, bad);
    FAIL("expected a numerical failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericalFailure);
    CHECK(std::string(e.what()).find("L_") != std::string::npos);
  }
  CHECK(state.iteration == 1);
  CHECK(same(before, snapshot(state)));
  CHECK(torch::equal(rng_before, state.rng.get_state()));
  for (const auto& [key, st] : state.discriminator_optimizer->state()) {
    CHECK(static_cast<const torch::optim::AdamParamState&>(*st).step() == 1);
  }
  // Training continues normally afterwards.
  CHECK_NOTHROW(train::train_step(state, random_batch(3)));
}

TEST_CASE("train loop checkpoints and logs on schedule") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 4, 32, 32, 1);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  auto cfg = testing::tiny_config();
  cfg.total_iterations = 5;
  cfg.checkpoint_interval = 2;
  MemorySink sink;
  const auto state = train::train_loop(cfg, ds, &sink, &sink);
  CHECK(state.iteration == 5);
  CHECK((sink.saved == std::vector<std::int64_t>{0, 2, 4, 5}));
  REQUIRE(sink.records.size() == 5);
  for (std::size_t i = 0; i < sink.records.size(); ++i) CHECK(sink.records[i].first == static_cast<int>(i) + 1);
  CHECK(sink.flushes >= 1);
}

TEST_CASE("zero iterations returns the initial state with one checkpoint") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 2, 32, 32, 1);
  auto cfg = testing::tiny_config();
  cfg.total_iterations = 0;
  MemorySink sink;
  const auto state = train::train_loop(cfg, io::load_paired_dataset(dir / "ds", io::Split::Train), &sink, &sink);
  CHECK(state.iteration == 0);
  CHECK(sink.saved == std::vector<std::int64_t>{0});
  CHECK(sink.records.empty());
  const auto fresh = train::TrainState::create(cfg);
  CHECK(same(snapshot(fresh), snapshot(state)));
}

TEST_CASE("a checkpoint failure halts the loop after flushing") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 4, 32, 32, 1);
  auto cfg = testing::tiny_config();
  cfg.total_iterations = 6;
  MemorySink sink;
  sink.fail_on_save = 1;
  try {
    train::train_loop(cfg, io::load_paired_dataset(dir / "ds", io::Split::Train), &sink, &sink);
    FAIL("expected an I/O failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  CHECK(sink.records.size() == 2);
  CHECK(sink.flushes >= 1);
}

TEST_CASE("run directory sink writes checkpoints and a JSON-lines log") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 4, 32, 32, 1);
  auto cfg = testing::tiny_config();
  cfg.total_iterations = 3;
  train::RunDirectorySink sink(dir / "run");
  train::train_loop(cfg, io::load_paired_dataset(dir / "ds", io::Split::Train), &sink, &sink);
  CHECK(fs::exists(dir / "run" / "ckpt_00000000.ccz"));
  CHECK(fs::exists(dir / "run" / "ckpt_00000002.ccz"));
  CHECK(fs::exists(dir / "run" / "ckpt_00000003.ccz"));
  CHECK(io::read_manifest(dir / "run" / "latest.ccz").iteration == 3);
  std::ifstream log(dir / "run" / "loss_log.jsonl");
  std::string line;
  int count = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("iteration") == ++count);
    CHECK(j.contains("wall_ms"));
    CHECK(j.contains("L_cc"));
    CHECK(j.contains("total_generator"));
  }
  CHECK(count == 3);
}

TEST_CASE("resuming continues the iteration count and reproduces the losses") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 4, 32, 32, 1);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  auto cfg = testing::tiny_config();
  cfg.total_iterations = 4;
  cfg.checkpoint_interval = 2;
  train::RunDirectorySink run(dir / "run");
  MemorySink full;
  struct Tee : train::CheckpointSink, train::LossLogSink {
    train::RunDirectorySink* a;
    MemorySink* b;
    void save(const train::TrainState& s) override { a->save(s); }
    void write(std::int64_t i, const losses::LossReport& r, double w) override { b->write(i, r, w); }
  } tee;
  tee.a = &run;
  tee.b = &full;
  const auto uninterrupted = train::train_loop(cfg, ds, &tee, &tee);

  auto resumed_from = std::make_unique<train::TrainState>(io::load_checkpoint(dir / "run" / "ckpt_00000002.ccz", &cfg));
  CHECK(resumed_from->iteration == 2);
  MemorySink rest;
  const auto resumed = train::train_loop(cfg, ds, &rest, &rest, std::move(resumed_from));
  CHECK(resumed.iteration == 4);
  REQUIRE(rest.records.size() == 2);
  CHECK(rest.records[0].first == 3);
  CHECK(rest.saved == std::vector<std::int64_t>{4});
  for (int i = 0; i < 2; ++i) {
    const auto& a = full.records[2 + i].second;
    const auto& b = rest.records[i].second;
    CHECK(b.total_generator == doctest::Approx(a.total_generator).epsilon(1e-5));
    CHECK(b.parts.L_m == doctest::Approx(a.parts.L_m).epsilon(1e-5));
    CHECK(b.total_discriminator == doctest::Approx(a.total_discriminator).epsilon(1e-5));
  }
  CHECK(same(snapshot(uninterrupted), snapshot(resumed)));

  auto mismatched = cfg;
  mismatched.code_length = 2;
  auto state = std::make_unique<train::TrainState>(io::load_checkpoint(dir / "run" / "ckpt_00000002.ccz"));
  try {
    train::train_loop(mismatched, ds, nullptr, nullptr, std::move(state));
    FAIL("expected a conflict");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Conflict);
  }
}

TEST_CASE("the loop rejects datasets too small for the constraint") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 1, 32, 32, 1);
  CHECK_THROWS_AS(train::train_loop(testing::tiny_config(), io::load_paired_dataset(dir / "ds", io::Split::Train),
                                    nullptr, nullptr),
                  Error);
}

TEST_CASE("the constraint pulls code means toward a shifted prior") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 16, 32, 32, 4);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  auto gap_after = [&](double lambda3) {
    auto cfg = testing::tiny_config();
    cfg.batch_size = 8;
    cfg.prior_mean = 1.0;
    cfg.lambda3 = lambda3;
    cfg.init_scheme = InitScheme::Kaiming;
    io::BatchStream stream(ds, cfg, io::Split::Train);
    auto state = train::TrainState::create(cfg);
    for (int i = 0; i < 800; ++i) train::train_step(state, stream.batch(i));
    io::BatchStream all(ds, cfg, io::Split::Test);
    torch::NoGradGuard guard;
    std::vector<torch::Tensor> codes;
    for (std::int64_t b = 0; b < all.batches_per_epoch(); ++b) codes.push_back(state.bundle->color(all.batch(b).x));
    return (torch::cat(codes).mean(0) - cfg.prior_mean).abs().mean().item<double>();
  };
  const double constrained = gap_after(10.0);
  const double control = gap_after(0.0);
  CAPTURE(constrained);
  CAPTURE(control);
  CHECK(constrained < control);
  CHECK(constrained < 0.5);
}
