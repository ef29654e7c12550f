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

#include "colorcode/gateway/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "colorcode/core/error.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/gateway/api.hpp"
#include "colorcode/infer/diagnostics.hpp"
#include "colorcode/infer/inference.hpp"
#include "colorcode/io/checkpoint.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/metrics/diagnostics.hpp"
#include "colorcode/metrics/evaluate.hpp"
#include "colorcode/train/trainer.hpp"

namespace colorcode::gateway {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_root() {
  const char* home = std::getenv("COLORCODE_HOME");
  return home && *home ? fs::path(home) : fs::path("colorcode_out");
}

fs::path or_default(const std::string& out, const fs::path& fallback) {
  return out.empty() ? output_root() / fallback : fs::path(out);
}

// Crops to the largest multiple-of-4 frame anchored at the top-left corner.
ImageTensor load_input(const fs::path& path) {
  auto img = io::read_image(path);
  const int w = img.width - img.width % 4, h = img.height - img.height % 4;
  if (w != img.width || h != img.height) {
    log::warn("input_cropped", {{"path", path.string()}, {"width", w}, {"height", h}});
    img = io::crop(img, 0, 0, w, h);
  }
  return normalize_image(img);
}

infer::Enhancer load_enhancer(const fs::path& ckpt, std::optional<double> tau) {
  auto model = io::load_model(ckpt);
  log::info("model_loaded", {{"checkpoint", ckpt.string()}, {"iteration", model.iteration},
                             {"k_m", model.config.code_length}, {"digest", model.digest}});
  return infer::Enhancer(model.bundle, tau);
}

void save(const ImageTensor& img, const fs::path& path) {
  io::write_png(path, tensor_to_rgb8(img.tensor()));
  std::cout << json{{"output", path.string()}}.dump() << std::endl;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), "");
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "cannot parse '" + item + "' as a number in '" + text + "'");
    }
  }
  return out;
}

void emit_error(const ApiError& e) { std::cerr << e.to_json().dump() << std::endl; }

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Underwater image color enhancement with controllable color codes"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string ckpt, in, out, guide, mask, data, config_path, resume, z_text, split = "test", host = "127.0.0.1";
  std::string data_root = ".";
  double alpha = 0.3, interp_alpha = 0.5, lo = -5.0, hi = 5.0;
  std::optional<double> tau, range_lo, range_hi;
  int steps = 11, bins = 20, port = 8080, image_size = 0;
  long deadline_ms = 30000;

  auto add_tau = [&](CLI::App* sub) {
    sub->add_option("--tau", tau, "Truncation bound for guidance codes (default: checkpoint config)")
        ->check(CLI::PositiveNumber);
  };

  auto* train = app.add_subcommand("train", "Train a model on a paired dataset");
  train->add_option("--config", config_path, "JSON training config")->check(CLI::ExistingFile);
  train->add_option("--data", data, "Dataset root with input/ and gt/")->required();
  train->add_option("--out", out, "Run directory (default: $COLORCODE_HOME/runs/run)");
  train->add_option("--resume", resume, "Checkpoint to resume from")->check(CLI::ExistingFile);

  auto* enhance = app.add_subcommand("enhance", "Fixed color enhancement");
  enhance->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  enhance->add_option("--in", in)->required()->check(CLI::ExistingFile);
  enhance->add_option("--out", out);

  auto* adapt = app.add_subcommand("adapt", "Color adaptation toward a guidance image");
  adapt->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  adapt->add_option("--in", in)->required()->check(CLI::ExistingFile);
  adapt->add_option("--guide", guide)->required()->check(CLI::ExistingFile);
  adapt->add_option("--alpha", alpha, "Fusion weight; [0, 0.3] is the recommended range")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  adapt->add_option("--mask", mask, "Binary mask image; adaptation applies inside it")->check(CLI::ExistingFile);
  adapt->add_option("--out", out);
  add_tau(adapt);

  auto* interpolate = app.add_subcommand("interpolate", "Color interpolation toward a sampled code");
  interpolate->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  interpolate->add_option("--in", in)->required()->check(CLI::ExistingFile);
  interpolate->add_option("--z", z_text, "Comma-separated code of length K_m")->required();
  interpolate->add_option("--alpha", interp_alpha)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  interpolate->add_option("--out", out);
  add_tau(interpolate);

  auto* grid = app.add_subcommand("grid", "Interpolation montage over a 2-D code plane (K_m = 2 models)");
  grid->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  grid->add_option("--in", in)->required()->check(CLI::ExistingFile);
  grid->add_option("--steps", steps)->capture_default_str()->check(CLI::Range(1, 64));
  grid->add_option("--lo", lo)->capture_default_str();
  grid->add_option("--hi", hi)->capture_default_str();
  grid->add_option("--alpha", interp_alpha)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  grid->add_option("--out", out, "Montage PNG; a JSON sidecar lists the code of every cell");
  add_tau(grid);

  auto* evaluate = app.add_subcommand("evaluate", "PSNR / SSIM / UIQM over a paired dataset");
  evaluate->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--data", data)->required();
  evaluate->add_option("--split", split)->capture_default_str()->check(CLI::IsMember({"train", "test"}));
  evaluate->add_option("--size", image_size, "Evaluation size (default: checkpoint image_size)");
  evaluate->add_option("--out", out, "Directory for evaluation.csv and evaluation.json");

  auto* histograms = app.add_subcommand("histograms", "Per-dimension color code histograms of a dataset");
  histograms->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  histograms->add_option("--data", data)->required();
  histograms->add_option("--bins", bins)->capture_default_str()->check(CLI::Range(1, 1000));
  histograms->add_option("--lo", range_lo, "Fixed lower bin edge");
  histograms->add_option("--hi", range_hi, "Fixed upper bin edge");
  histograms->add_option("--size", image_size, "Encoding size (default: checkpoint image_size)");
  histograms->add_option("--out", out, "Output stem; writes <stem>.png and <stem>.json");

  auto* diagnose = app.add_subcommand("diagnose", "Guidance suitability: hue shift and alpha sweep");
  diagnose->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  diagnose->add_option("--guide", guide, "Guidance image")->check(CLI::ExistingFile);
  diagnose->add_option("--pool", data, "Directory of candidate guidance images")->check(CLI::ExistingDirectory);
  diagnose->add_option("--in", in, "Distorted image for the alpha sweep")->check(CLI::ExistingFile);
  diagnose->add_option("--out", out, "JSON report path");
  add_tau(diagnose);

  auto* serve = app.add_subcommand("serve", "HTTP service over one checkpoint");
  serve->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--deadline-ms", deadline_ms)->capture_default_str()->check(CLI::PositiveNumber);
  serve->add_option("--data-root", data_root, "Root for /v1/codes/histogram datasets")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error({"invalid_flags", e.what(), nullptr});
    return 2;
  }

  try {
    if (*train) {
      const auto cfg = config_path.empty() ? TrainConfig{} : load_config(config_path);
      const auto dataset = io::load_paired_dataset(data, io::Split::Train);
      train::RunDirectorySink sink(or_default(out, "runs/run"));
      std::unique_ptr<train::TrainState> state;
      if (!resume.empty()) state = std::make_unique<train::TrainState>(io::load_checkpoint(resume, &cfg));
      const auto final_state = train::train_loop(cfg, dataset, &sink, &sink, std::move(state));
      std::cout << json{{"run_dir", sink.dir().string()}, {"iteration", final_state.iteration}}.dump() << std::endl;
    } else if (*enhance) {
      const auto enhancer = load_enhancer(ckpt, {});
      save(enhancer.enhance(load_input(in)), or_default(out, "enhance/" + fs::path(in).stem().string() + ".png"));
    } else if (*adapt) {
      const auto enhancer = load_enhancer(ckpt, tau);
      infer::AdaptationRequest req{load_input(in), load_input(guide), alpha, std::nullopt};
      if (!mask.empty()) {
        auto gray = io::read_gray(mask);
        std::vector<std::uint8_t> bits(gray.pixels.size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = gray.pixels[i] > 127 ? 1 : 0;
        infer::BinaryMask m(gray.width, gray.height, std::move(bits));
        const int w = req.x.width(), h = req.x.height();
        if (m.width >= w && m.height >= h && (m.width != w || m.height != h)) {
          std::vector<std::uint8_t> cropped;
          for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) cropped.push_back(m.at(x, y));
          }
          m = infer::BinaryMask(w, h, std::move(cropped));
        }
        req.mask = std::move(m);
      }
      save(enhancer.adapt(req), or_default(out, "adapt/" + fs::path(in).stem().string() + ".png"));
    } else if (*interpolate) {
      const auto enhancer = load_enhancer(ckpt, tau);
      infer::InterpolationRequest req{load_input(in), parse_list(z_text), interp_alpha};
      save(enhancer.interpolate(req), or_default(out, "interpolate/" + fs::path(in).stem().string() + ".png"));
    } else if (*grid) {
      const auto enhancer = load_enhancer(ckpt, tau);
      const auto g = enhancer.interpolation_grid(load_input(in), steps, lo, hi, interp_alpha);
      const auto path = or_default(out, "grid/" + fs::path(in).stem().string() + ".png");
      std::vector<Rgb8Image> tiles;
      json cells = json::array();
      for (const auto& row : g.cells) {
        for (const auto& cell : row) {
          tiles.push_back(tensor_to_rgb8(cell.image.tensor()));
          cells.push_back({{"z", cell.z}, {"fixed_enhancement", cell.fixed_enhancement}});
        }
      }
      io::write_png(path, io::montage(tiles, g.steps));
      std::ofstream(fs::path(path).replace_extension(".json"))
          << json{{"steps", g.steps}, {"lo", g.lo}, {"hi", g.hi}, {"alpha", g.alpha}, {"cells", cells}}.dump(2);
      std::cout << json{{"output", path.string()}, {"cells", tiles.size()}}.dump() << std::endl;
    } else if (*evaluate) {
      auto model = io::load_model(ckpt);
      const infer::Enhancer enhancer(model.bundle);
      const auto dataset = io::load_paired_dataset(data, io::split_from_string(split));
      const auto table = metrics::evaluate_dataset(
          dataset, image_size > 0 ? image_size : model.config.image_size,
          [&](const Rgb8Image& x) { return tensor_to_rgb8(enhancer.enhance(normalize_image(x)).tensor()); });
      const auto dir = or_default(out, "evaluate");
      metrics::write_evaluation(table, dir);
      std::cout << json{{"output", dir.string()}, {"mean", metrics::to_json(table)["mean"]}}.dump() << std::endl;
    } else if (*histograms) {
      auto model = io::load_model(ckpt);
      const infer::Enhancer enhancer(model.bundle);
      const auto codes =
          infer::collect_color_codes(enhancer, data, image_size > 0 ? image_size : model.config.image_size);
      std::optional<std::pair<double, double>> range;
      if (range_lo || range_hi) {
        require(range_lo && range_hi, "--lo and --hi must be given together");
        range = std::make_pair(*range_lo, *range_hi);
      }
      const auto h = metrics::code_histograms(codes, bins, range);
      const auto stem = or_default(out, "histograms/codes");
      metrics::write_histograms(h, stem);
      std::cout << json{{"output", stem.string()}, {"samples", h.samples}}.dump() << std::endl;
    } else if (*diagnose) {
      require(!guide.empty() || !data.empty(), "diagnose needs --guide or --pool");
      const auto enhancer = load_enhancer(ckpt, tau);
      json report = json::object();
      if (!guide.empty()) {
        const auto g = io::read_image(guide);
        report["hue_shift"] = infer::to_json(infer::hue_shift(enhancer, g));
        if (!in.empty()) {
          report["alpha_sweep"] =
              infer::to_json(infer::alpha_sweep(enhancer, io::read_image(in), g, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}));
        }
      }
      if (!data.empty()) {
        report["pool"] =
            infer::pool_diagnostics(enhancer, infer::load_guidance_pool(data), enhancer.bundle().config().image_size);
      }
      const auto path = or_default(out, "diagnose/report.json");
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream(path) << report.dump(2) << '\n';
      std::cout << report.dump() << std::endl;
    } else if (*serve) {
      ServiceOptions options;
      options.deadline = std::chrono::milliseconds(deadline_ms);
      options.data_root = data_root;
      Service service(io::load_model(ckpt), options);
      const int bound = service.bind(host, port);
      log::info("serving", {{"host", host}, {"port", bound}});
      service.listen();
    }
  } catch (const std::exception& e) {
    emit_error(api_error_from(e));
    return 1;
  }
  return 0;
}

}  // namespace colorcode::gateway
