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

// Acceptance criteria A1-A9. Usage: colorcode_acceptance [A1 ... A9]; no
// argument runs all of them. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "colorcode/core/error.hpp"
#include "colorcode/core/image.hpp"
#include "colorcode/infer/inference.hpp"
#include "colorcode/io/checkpoint.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/losses/mmd.hpp"
#include "colorcode/metrics/diagnostics.hpp"
#include "colorcode/metrics/quality.hpp"
#include "colorcode/nn/bundle.hpp"
#include "colorcode/train/trainer.hpp"
#include "fixtures.hpp"
#include "gradient_suite.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace colorcode;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const auto kF64 = torch::TensorOptions().dtype(torch::kFloat64);

double max_abs(const ColorCode& a, const ColorCode& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm(const ColorCode& c) {
  double s = 0.0;
  for (double v : c.values()) s += v * v;
  return std::sqrt(s);
}

fs::path output_dir() {
  const char* env = std::getenv("COLORCODE_ACCEPTANCE_OUT");
  fs::path dir = env ? fs::path(env) : fs::current_path() / "acceptance_out";
  fs::create_directories(dir);
  return dir;
}

struct Recorder : train::CheckpointSink, train::LossLogSink {
  std::vector<nlohmann::json> lines;
  std::vector<std::pair<std::int64_t, losses::LossReport>> records;
  void save(const train::TrainState&) override {}
  void write(std::int64_t iteration, const losses::LossReport& report, double wall_ms) override {
    lines.push_back(train::loss_log_line(iteration, report, wall_ms));
    records.emplace_back(iteration, report);
  }
};

void a1(Outcome& out) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.5);
  double identity = 0.0, endpoint = 0.0, unit = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(8), g(8);
    for (auto& v : x) v = normal(rng);
    for (auto& v : g) v = normal(rng);
    const ColorCode m_x(x), m_g(g);
    identity = std::max(identity, max_abs(infer::fuse_codes(m_x, m_g, 0.0, 2.0), m_x));
    endpoint = std::max(endpoint, max_abs(infer::fuse_codes(m_x, m_g, 1.0, 2.0), infer::truncate(m_g, 2.0)));
  }
  const auto worked = infer::fuse_codes(ColorCode({1.0, 0.0}), ColorCode({0.0, 1.0}), 0.5, 2.0);
  const double expected = 1.0 / std::sqrt(2.0);
  const double example = std::max(std::abs(worked[0] - expected), std::abs(worked[1] - expected));
  for (int trial = 0; trial < 200; ++trial) {
    auto q = std::get<0>(torch::linalg_qr(torch::randn({8, 8}, kF64)));
    const auto col = [&](int j) {
      const auto t = q.select(1, j).contiguous();
      return ColorCode(std::vector<double>(t.data_ptr<double>(), t.data_ptr<double>() + 8));
    };
    const double alpha = static_cast<double>(trial) / 199.0;
    unit = std::max(unit, std::abs(norm(infer::fuse_codes(col(0), col(1), alpha, 2.0)) - 1.0));
  }
  out.detail << "identity=" << identity << " endpoint=" << endpoint << " example=" << example << " unit_norm=" << unit;
  out.check(identity <= 1e-12, "alpha=0 identity");
  out.check(endpoint <= 1e-12, "alpha=1 endpoint");
  out.check(example <= 1e-12, "worked example");
  out.check(unit <= 1e-12, "unit norm");
}

void a2(Outcome& out) {
  torch::manual_seed(2);
  double worst = 0.0;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int64_t n = 2 + static_cast<int64_t>(rng() % 63);
    const int k = 1 + static_cast<int>(rng() % 8);
    const auto m = torch::randn({n, k}, kF64) * 1.3 + 0.2;
    const auto z = torch::randn({n, k}, kF64);
    const double c = 2.0 * k;
    const std::vector<std::pair<losses::Kernel, testing::KernelFn>> kernels = {
        {losses::Kernel::imq(c), testing::imq_kernel(c)},
        {losses::Kernel::rbf_mixture(c), testing::rbf_mixture_kernel(c)},
        {losses::Kernel::gaussian(c), testing::gaussian_kernel(c)},
    };
    for (const auto& [kernel, oracle] : kernels) {
      const double fast = losses::mmd_loss(m, z, kernel).item<double>();
      worst = std::max(worst, std::abs(fast - testing::brute_force_mmd(testing::rows(m), testing::rows(z), oracle)));
    }
  }
  const auto unit = losses::Kernel::gaussian(1.0);
  const auto col = [](double a, double b) { return torch::tensor(std::vector<double>{a, b}, kF64).view({-1, 1}); };
  const double h1 = losses::mmd_loss(col(0, 1), col(0, 1), unit).item<double>();
  const double h2 = losses::mmd_loss(col(0, 2), col(0, 2), unit).item<double>();
  const double h3 = losses::mmd_loss(col(0, 0), col(10, 10), unit).item<double>();
  double sum = 0.0;
  for (int r = 0; r < 200; ++r) {
    sum += losses::mmd_loss(torch::randn({256, 8}, kF64), torch::randn({256, 8}, kF64), losses::Kernel::imq(16.0))
               .item<double>();
  }
  const double bias = std::abs(sum / 200.0);
  out.detail << "oracle_err=" << worst << " hand=[" << h1 << "," << h2 << "," << h3 << "] mean_same=" << bias;
  out.check(worst <= 1e-10, "brute-force agreement");
  out.check(std::abs(h1 + 0.6321) <= 1e-4 && std::abs(h2 + 0.9817) <= 1e-4 && std::abs(h3 - 2.0) <= 1e-4,
            "hand values");
  out.check(bias < 0.01, "unbiased on same distribution");
}

void a3(Outcome& out) {
  double worst = 0.0;
  std::string worst_name;
  for (std::uint64_t seed : {1u, 2u}) {
    for (const auto& [name, err] : testing::loss_gradient_errors(seed)) {
      if (err > worst) {
        worst = err;
        worst_name = name;
      }
    }
  }
  out.detail << "max_rel_err=" << worst << " (" << worst_name << ")";
  out.check(worst < 1e-3, "finite differences");
}

void a4(Outcome& out) {
  TrainConfig cfg;
  nn::NetworkBundle bundle(cfg);
  bundle.initialize(cfg.seed);
  torch::NoGradGuard guard;
  for (int size : {64, 128, 256}) {
    const auto x = testing::random_image(static_cast<std::uint64_t>(size), size, size);
    const auto c = nn::encode_content(bundle, x, nn::Domain::X);
    const auto m = nn::encode_color(bundle, x);
    const bool ok = c.channels() == cfg.content_channels() && c.height() == size / 4 && c.width() == size / 4 &&
                    m.size() == static_cast<std::size_t>(cfg.code_length);
    out.detail << size << ":" << c.channels() << "x" << c.height() << "x" << c.width() << "/" << m.size() << " ";
    out.check(ok, "shape at " + std::to_string(size));
  }
}

double train_psnr(const train::TrainState& state, const io::PairedDataset& ds) {
  io::BatchStream test(ds, state.config, io::Split::Test);
  torch::NoGradGuard guard;
  double sum = 0.0;
  int n = 0;
  for (std::int64_t b = 0; b < test.batches_per_epoch(); ++b) {
    const auto batch = test.batch(b);
    const auto y_hat = state.bundle->enhance_decode(state.bundle->content(batch.x, nn::Domain::X),
                                                    state.bundle->color(batch.x));
    for (int i = 0; i < batch.size(); ++i) {
      sum += metrics::psnr(tensor_to_rgb8(y_hat[i]), tensor_to_rgb8(batch.y[i]));
      ++n;
    }
  }
  return sum / n;
}

void a5(Outcome& out) {
  testing::TempDir dir("a5");
  testing::write_synthetic_dataset(dir / "ds", 4, 64, 64, 7);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  TrainConfig cfg;
  cfg.image_size = 64;
  cfg.batch_size = 4;
  cfg.total_iterations = 2000;
  cfg.base_channels = 8;
  cfg.residual_blocks = 2;
  cfg.mapping_channels = 64;
  cfg.style_downsamples = 2;
  cfg.disc_channels = 8;
  cfg.disc_layers = 3;
  cfg.disc_scales = 2;
  cfg.checkpoint_interval = 1000000;
  Recorder log;
  const auto state = train::train_loop(cfg, ds, nullptr, &log);
  std::vector<double> windows(4, 0.0);
  for (const auto& [iteration, report] : log.records) windows[(iteration - 1) / 500] += report.parts.L_m / 500.0;
  bool monotone = true;
  for (std::size_t w = 1; w < windows.size(); ++w) monotone = monotone && windows[w] < windows[w - 1];
  const double psnr = train_psnr(state, ds);
  out.detail << "psnr=" << psnr << " L_m_windows=[";
  for (std::size_t w = 0; w < windows.size(); ++w) out.detail << (w ? "," : "") << windows[w];
  out.detail << "]";
  out.check(psnr >= 25.0, "train-set PSNR >= 25 dB");
  out.check(monotone, "L_m decreasing over 500-step windows");
}

TrainConfig a6_config(double lambda3) {
  TrainConfig cfg;
  cfg.image_size = 32;
  cfg.batch_size = 8;
  cfg.total_iterations = 5000;
  cfg.lambda3 = lambda3;
  cfg.base_channels = 8;
  cfg.residual_blocks = 2;
  cfg.mapping_channels = 64;
  cfg.style_downsamples = 2;
  cfg.disc_channels = 8;
  cfg.disc_layers = 2;
  cfg.disc_scales = 2;
  cfg.init_scheme = InitScheme::Kaiming;
  cfg.checkpoint_interval = 1000000;
  return cfg;
}

std::vector<ColorCode> dataset_codes(const train::TrainState& state, const io::PairedDataset& ds) {
  io::BatchStream test(ds, state.config, io::Split::Test);
  torch::NoGradGuard guard;
  std::vector<ColorCode> codes;
  for (std::int64_t b = 0; b < test.batches_per_epoch(); ++b) {
    const auto m = state.bundle->color(test.batch(b).x).to(torch::kFloat64).contiguous();
    for (int64_t i = 0; i < m.size(0); ++i) {
      const double* p = m[i].data_ptr<double>();
      codes.emplace_back(std::vector<double>(p, p + m.size(1)));
    }
  }
  return codes;
}

void a6(Outcome& out) {
  testing::TempDir dir("a6");
  testing::write_synthetic_dataset(dir / "ds", 64, 32, 32, 11);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  const auto cfg = a6_config(10.0);
  const auto state = train::train_loop(cfg, ds, nullptr, nullptr);
  const auto codes = dataset_codes(state, ds);
  const auto hist = metrics::code_histograms(codes, 20);
  const auto dest = output_dir();
  metrics::write_histograms(hist, dest / "a6_constrained");
  bool means_ok = true, stds_ok = true;
  out.detail << "n=" << codes.size() << " mean/std:";
  for (const auto& d : hist.dimensions) {
    out.detail << " " << d.mean << "/" << d.std;
    means_ok = means_ok && std::abs(d.mean - cfg.prior_mean) <= 0.5;
    stds_ok = stds_ok && d.std >= 0.5 && d.std <= 2.0;
  }
  out.check(means_ok, "per-dimension mean within 0.5 of the prior mean");
  out.check(stds_ok, "per-dimension std in [0.5, 2.0]");

  const auto control = train::train_loop(a6_config(0.0), ds, nullptr, nullptr);
  metrics::write_histograms(metrics::code_histograms(dataset_codes(control, ds), 20), dest / "a6_control");
  out.detail << " histograms=" << dest.string();
}

void a7(Outcome& out) {
  auto cfg = testing::tiny_config(32, 8);
  cfg.init_scheme = InitScheme::Kaiming;
  auto state = train::TrainState::create(cfg);
  io::Batch batch;
  torch::manual_seed(7);
  batch.x = torch::rand({2, 3, 32, 32}) * 2 - 1;
  batch.y = torch::rand({2, 3, 32, 32}) * 2 - 1;
  batch.ids = {"a", "b"};
  train::train_step(state, batch);
  const infer::Enhancer enhancer(std::shared_ptr<const nn::NetworkBundle>(std::move(state.bundle)));
  int identical = 0;
  for (int i = 0; i < 20; ++i) {
    const int h = 32 + 4 * (i % 5);
    const int w = 32 + 4 * (i % 3);
    const auto x = testing::random_image(100 + i, h, w);
    if (torch::equal(enhancer.adapt({x, x, 0.0, std::nullopt}).tensor(), enhancer.enhance(x).tensor())) ++identical;
  }
  out.detail << identical << "/20 bit-identical";
  out.check(identical == 20, "adapt(x, x, 0) == enhance(x)");
}

void a8(Outcome& out) {
  Rgb8Image a(16, 16, 3, 100), b(16, 16, 3, 101), black(16, 16, 3, 0), white(16, 16, 3, 255);
  const double unit = metrics::psnr(a, b);
  const double worst = metrics::psnr(black, white);
  out.check(std::abs(unit - 48.1308) <= 1e-4, "PSNR unit error");
  out.check(std::abs(worst) <= 1e-12, "PSNR max error");
  const auto scene = testing::synthetic_scene(1, 48, 48);
  out.check(std::abs(metrics::ssim(scene, scene) - 1.0) <= 1e-12, "SSIM identical");
  double ssim_err = 0.0;
  for (const auto& entry : testing::golden().at("ssim")) {
    const auto x = io::read_image(testing::data_dir() / "ssim" / entry.at("a").get<std::string>());
    const auto y = io::read_image(testing::data_dir() / "ssim" / entry.at("b").get<std::string>());
    ssim_err = std::max(ssim_err, std::abs(metrics::ssim(x, y) - entry.at("value").get<double>()));
  }
  double uiqm_rel = 0.0;
  int corpus = 0;
  for (const auto& [name, expected] : testing::golden().at("uiqm").items()) {
    const auto img = io::read_image(testing::data_dir() / "corpus" / (name + ".png"));
    const double want = expected.at("uiqm").get<double>();
    uiqm_rel = std::max(uiqm_rel, std::abs(metrics::uiqm(img) - want) / std::max(std::abs(want), 1e-12));
    ++corpus;
  }
  out.detail << "psnr_unit=" << unit << " psnr_max=" << worst << " ssim_err=" << ssim_err << " uiqm_rel=" << uiqm_rel
             << " corpus=" << corpus;
  out.check(ssim_err <= 1e-6, "SSIM oracle");
  out.check(corpus == 10 && uiqm_rel <= 1e-4, "UIQM oracle");
}

std::vector<std::string> without_wall_time(const std::vector<nlohmann::json>& lines) {
  std::vector<std::string> out;
  for (auto line : lines) {
    line.erase("wall_ms");
    out.push_back(line.dump());
  }
  return out;
}

void a9(Outcome& out) {
  testing::TempDir dir("a9");
  testing::write_synthetic_dataset(dir / "ds", 8, 32, 32, 9);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Train);
  auto cfg = testing::tiny_config();
  cfg.batch_size = 4;
  cfg.total_iterations = 20;
  cfg.seed = 42;
  Recorder first, second;
  train::train_loop(cfg, ds, nullptr, &first);
  const auto final_state = train::train_loop(cfg, ds, nullptr, &second);
  const bool identical_logs = without_wall_time(first.lines) == without_wall_time(second.lines);
  out.check(identical_logs && first.lines.size() == 20, "identical loss logs");

  auto half = cfg;
  half.total_iterations = 10;
  const auto midway = train::train_loop(half, ds, nullptr, nullptr);
  io::save_checkpoint(midway, dir / "mid.ccz");
  auto restored = std::make_unique<train::TrainState>(io::load_checkpoint(dir / "mid.ccz", &cfg));
  auto pa = midway.bundle->generator_parameters();
  auto pb = restored->bundle->generator_parameters();
  for (const auto& p : midway.bundle->discriminator_parameters()) pa.push_back(p);
  for (const auto& p : restored->bundle->discriminator_parameters()) pb.push_back(p);
  bool bit_exact = pa.size() == pb.size();
  for (std::size_t i = 0; bit_exact && i < pa.size(); ++i) bit_exact = torch::equal(pa[i], pb[i]);
  out.check(bit_exact, "bit-exact parameter restore");

  Recorder rest;
  train::train_loop(cfg, ds, nullptr, &rest, std::move(restored));
  double worst = 0.0;
  bool aligned = rest.records.size() == 10;
  for (std::size_t i = 0; aligned && i < rest.records.size(); ++i) {
    const auto& a = first.records[10 + i];
    const auto& b = rest.records[i];
    aligned = a.first == b.first;
    worst = std::max(worst, std::abs(a.second.total_generator - b.second.total_generator) /
                                std::max(1.0, std::abs(a.second.total_generator)));
  }
  out.detail << "log_lines=" << first.lines.size() << " identical=" << identical_logs << " bit_exact=" << bit_exact
             << " resume_rel_err=" << worst;
  out.check(aligned && worst <= 1e-5, "resume continuity");
  (void)final_state;
}

}  // namespace

int main(int argc, char** argv) {
  torch::set_num_threads(1);
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << id << " " << (outcome.pass ? "PASS" : "FAIL") << " " << outcome.detail.str() << " (" << seconds
              << " s)" << std::endl;
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
