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

#include <cmath>
#include <fstream>
#include <random>

#include "colorcode/core/error.hpp"
#include "colorcode/io/dataset.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/metrics/diagnostics.hpp"
#include "colorcode/metrics/evaluate.hpp"
#include "colorcode/metrics/quality.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

using namespace colorcode;
namespace fs = std::filesystem;

namespace {

Rgb8Image shifted(const Rgb8Image& img, int delta) {
  Rgb8Image out = img;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>(std::clamp(static_cast<int>(p) + delta, 0, 255));
  return out;
}

Rgb8Image inverted(const Rgb8Image& img) {
  Rgb8Image out = img;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

bool relative_match(double actual, double expected, double rel) {
  return std::abs(actual - expected) <= rel * std::abs(expected) + 1e-12;
}

Rgb8Image solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Rgb8Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

}  // namespace

TEST_CASE("psnr closed-form cases") {
  Rgb8Image mid(8, 8, 3, 100);
  CHECK(metrics::psnr(mid, mid) == metrics::kPsnrCap);
  CHECK(metrics::psnr(mid, shifted(mid, 1)) == doctest::Approx(48.1308).epsilon(1e-6));
  CHECK(metrics::psnr(mid, shifted(mid, -1)) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-12));
  CHECK(metrics::psnr(Rgb8Image(8, 8, 3, 0), Rgb8Image(8, 8, 3, 255)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(metrics::psnr(mid, Rgb8Image(8, 9)), Error);
}

TEST_CASE("psnr and ssim are symmetric and flip invariant") {
  const auto a = testing::synthetic_scene(1, 40, 32);
  const auto b = testing::underwater_degrade(a, 2);
  CHECK(metrics::psnr(a, b) == metrics::psnr(b, a));
  CHECK(metrics::ssim(a, b) == doctest::Approx(metrics::ssim(b, a)).epsilon(1e-14));
  CHECK(metrics::psnr(io::flip_horizontal(a), io::flip_horizontal(b)) == doctest::Approx(metrics::psnr(a, b)));
  CHECK(metrics::ssim(io::flip_horizontal(a), io::flip_horizontal(b)) ==
        doctest::Approx(metrics::ssim(a, b)).epsilon(1e-12));
}

TEST_CASE("ssim basics") {
  const auto a = testing::synthetic_scene(3, 32, 32);
  CHECK(metrics::ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(metrics::ssim(a, inverted(a)) < 1.0);
  CHECK_THROWS_AS(metrics::ssim(Rgb8Image(10, 10), Rgb8Image(10, 10)), Error);
  CHECK_THROWS_AS(metrics::ssim(a, Rgb8Image(32, 28)), Error);
}

TEST_CASE("ssim matches the reference oracle") {
  for (const auto& entry : testing::golden().at("ssim")) {
    const auto a = io::read_image(testing::data_dir() / "ssim" / entry.at("a").get<std::string>());
    const auto b = io::read_image(testing::data_dir() / "ssim" / entry.at("b").get<std::string>());
    CAPTURE(entry.at("a").get<std::string>());
    CHECK(std::abs(metrics::ssim(a, b) - entry.at("value").get<double>()) <= 1e-6);
  }
}

TEST_CASE("uiqm matches the reference oracle on the regression corpus") {
  const auto& golden = testing::golden().at("uiqm");
  REQUIRE(golden.size() == 10);
  for (const auto& [name, expected] : golden.items()) {
    CAPTURE(name);
    const auto img = io::read_image(testing::data_dir() / "corpus" / (name + ".png"));
    const auto parts = metrics::uiqm_parts(img);
    CHECK(relative_match(parts.uicm, expected.at("uicm").get<double>(), 1e-4));
    CHECK(relative_match(parts.uism, expected.at("uism").get<double>(), 1e-4));
    CHECK(relative_match(parts.uiconm, expected.at("uiconm").get<double>(), 1e-4));
    CHECK(relative_match(parts.uiqm, expected.at("uiqm").get<double>(), 1e-4));
    CHECK(metrics::uiqm(img) == parts.uiqm);
    CHECK(parts.uiqm ==
          doctest::Approx(0.0282 * parts.uicm + 0.2953 * parts.uism + 3.5753 * parts.uiconm).epsilon(1e-12));
  }
}

TEST_CASE("uiqm is flip invariant on the corpus and rejects grayscale") {
  for (const auto& [name, expected] : testing::golden().at("uiqm").items()) {
    CAPTURE(name);
    const auto img = io::read_image(testing::data_dir() / "corpus" / (name + ".png"));
    CHECK(metrics::uiqm(io::flip_horizontal(img)) == doctest::Approx(metrics::uiqm(img)).epsilon(1e-9));
  }
  CHECK(metrics::uiqm(Rgb8Image(40, 40, 3, 128)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(metrics::uiqm(Rgb8Image(40, 40, 1, 128)), Error);
}

TEST_CASE("code histograms of normal draws") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<ColorCode> codes;
  for (int i = 0; i < 10000; ++i) codes.emplace_back(std::vector<double>{normal(rng), normal(rng) * 2 + 1, normal(rng)});
  const auto h = metrics::code_histograms(codes, 20);
  CHECK(h.samples == 10000);
  REQUIRE(h.dimensions.size() == 3);
  for (std::size_t d = 0; d < 3; ++d) {
    const auto& dim = h.dimensions[d];
    CHECK(dim.edges.size() == 21);
    CHECK(dim.counts.size() == 20);
    std::int64_t total = 0;
    for (auto c : dim.counts) total += c;
    CHECK(total == 10000);
    double mean = 0.0;
    for (const auto& c : codes) mean += c[d];
    mean /= codes.size();
    double var = 0.0;
    for (const auto& c : codes) var += (c[d] - mean) * (c[d] - mean);
    CHECK(std::abs(dim.mean - mean) <= 1e-12);
    CHECK(std::abs(dim.std - std::sqrt(var / codes.size())) <= 1e-12);
  }
  CHECK(std::abs(h.dimensions[0].mean) <= 0.05);
  CHECK(std::abs(h.dimensions[2].mean) <= 0.05);
}

TEST_CASE("code histograms of constant codes and argument checks") {
  const std::vector<ColorCode> codes(50, ColorCode({0.7, -2.0}));
  const auto h = metrics::code_histograms(codes, 10);
  for (const auto& dim : h.dimensions) {
    CHECK(dim.std < 1e-12);
    int occupied = 0;
    for (auto c : dim.counts) occupied += c > 0 ? 1 : 0;
    CHECK(occupied == 1);
  }
  CHECK(h.dimensions[0].mean == doctest::Approx(0.7).epsilon(1e-15));

  const auto ranged = metrics::code_histograms(codes, 4, std::pair{-5.0, 5.0});
  CHECK(ranged.dimensions[0].edges.front() == -5.0);
  CHECK(ranged.dimensions[0].edges.back() == 5.0);

  CHECK_THROWS_AS(metrics::code_histograms({}, 10), Error);
  CHECK_THROWS_AS(metrics::code_histograms({ColorCode({1.0})}, 10), Error);
  CHECK_THROWS_AS(metrics::code_histograms({ColorCode({1.0}), ColorCode({1.0, 2.0})}, 10), Error);
  CHECK_THROWS_AS(metrics::code_histograms(codes, 0), Error);
}

TEST_CASE("histogram figure and sidecar") {
  testing::TempDir dir;
  std::vector<ColorCode> codes;
  for (int i = 0; i < 30; ++i) codes.emplace_back(std::vector<double>(5, i * 0.1));
  const auto h = metrics::code_histograms(codes, 8);
  metrics::write_histograms(h, dir / "hist");
  const auto png = io::read_image(dir / "hist.png");
  CHECK(png.width > 0);
  std::ifstream in(dir / "hist.json");
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc == metrics::to_json(h));
  CHECK(doc.at("dimensions").size() == 5);
}

TEST_CASE("dominant color") {
  const auto red = solid(20, 20, 255, 0, 0);
  metrics::Region center{std::nullopt, std::pair{10, 10}, 5};
  CHECK((metrics::dominant_color(red, center) == std::array<std::uint8_t, 3>{255, 0, 0}));

  // 70% teal, 30% orange inside the mask.
  Rgb8Image two(20, 10);
  std::vector<std::uint8_t> mask(200, 1);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x) {
      const bool major = x < 14;
      two.at(x, y, 0) = major ? 0 : 250;
      two.at(x, y, 1) = major ? 128 : 120;
      two.at(x, y, 2) = major ? 128 : 10;
    }
  metrics::Region masked{mask, std::nullopt, 0};
  CHECK((metrics::dominant_color(two, masked, 7) == std::array<std::uint8_t, 3>{0, 128, 128}));
  CHECK(metrics::dominant_color(two, masked, 7) == metrics::dominant_color(two, masked, 7));

  const auto scene = testing::synthetic_scene(4, 32, 32);
  const metrics::Region region{std::nullopt, std::pair{16, 16}, 10};
  CHECK(metrics::dominant_color(scene, region, 3) == metrics::dominant_color(scene, region, 3));

  CHECK_THROWS_AS(metrics::dominant_color(red, metrics::Region{std::vector<std::uint8_t>(400, 0), std::nullopt, 0}),
                  Error);
  CHECK_THROWS_AS(metrics::dominant_color(red, metrics::Region{}), Error);
}

TEST_CASE("evaluation over a paired set") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 3, 36, 32, 8);
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Test);
  // An oracle enhancer that returns the reference for each input.
  std::map<std::vector<std::uint8_t>, Rgb8Image> lookup;
  for (const auto& p : ds.pairs) {
    lookup[io::center_square(io::read_image(p.input), 32).pixels] = io::center_square(io::read_image(p.reference), 32);
  }
  const auto table =
      metrics::evaluate_dataset(ds, 32, [&](const Rgb8Image& x) { return lookup.at(x.pixels); });
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].sample_id == "0000.png");
  CHECK(table.mean.psnr == 100.0);
  CHECK(table.mean.ssim == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.skipped.empty());

  const auto identity = metrics::evaluate_dataset(ds, 32, [](const Rgb8Image& x) { return x; });
  CHECK(identity.mean.psnr < 100.0);
  double sum = 0.0;
  for (const auto& r : identity.rows) sum += r.psnr;
  CHECK(identity.mean.psnr == doctest::Approx(sum / 3));

  metrics::write_evaluation(identity, dir / "out");
  std::ifstream csv(dir / "out" / "evaluation.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "sample_id,psnr,ssim,uiqm");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines >= 3);
  std::ifstream js(dir / "out" / "evaluation.json");
  CHECK(nlohmann::json::parse(js) == metrics::to_json(identity));
}

TEST_CASE("evaluation skips unreadable pairs and rejects empty sets") {
  testing::TempDir dir;
  testing::write_synthetic_dataset(dir / "ds", 3, 32, 32, 8);
  {
    std::ofstream f(dir / "ds" / "gt" / "0001.png", std::ios::trunc);
    f << "broken";
  }
  const auto ds = io::load_paired_dataset(dir / "ds", io::Split::Test);
  const auto table = metrics::evaluate_dataset(ds, 32, [](const Rgb8Image& x) { return x; });
  CHECK(table.rows.size() == 2);
  CHECK(table.skipped == std::vector<std::string>{"0001.png"});
  CHECK_THROWS_AS(metrics::evaluate_dataset(io::PairedDataset{}, 32, [](const Rgb8Image& x) { return x; }), Error);
}
