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

#include "colorcode/io/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "colorcode/core/error.hpp"

namespace colorcode::io {

namespace {

Rgb8Image from_mat(const cv::Mat& decoded, const std::string& source) {
  if (decoded.empty()) fail(ErrorKind::Corrupt, "cannot decode image " + source);
  if (decoded.depth() != CV_8U) fail(ErrorKind::InvalidArgument, source + ": only 8-bit images are supported");
  cv::Mat rgb;
  switch (decoded.channels()) {
    case 3:
      cv::cvtColor(decoded, rgb, cv::COLOR_BGR2RGB);
      break;
    case 4:
      cv::cvtColor(decoded, rgb, cv::COLOR_BGRA2RGB);
      break;
    default:
      fail(ErrorKind::InvalidArgument,
           source + ": expected a color image, got " + std::to_string(decoded.channels()) + " channel(s)");
  }
  Rgb8Image out(rgb.cols, rgb.rows);
  for (int y = 0; y < rgb.rows; ++y) {
    std::memcpy(&out.pixels[static_cast<std::size_t>(y) * rgb.cols * 3], rgb.ptr(y), static_cast<std::size_t>(rgb.cols) * 3);
  }
  return out;
}

cv::Mat to_bgr_mat(const Rgb8Image& img) {
  require(img.channels == 3 || img.channels == 1, "expected a 1- or 3-channel image");
  require(img.pixels.size() == static_cast<std::size_t>(img.width) * img.height * img.channels,
          "pixel buffer does not match the image dimensions");
  if (img.channels == 1) {
    return cv::Mat(img.height, img.width, CV_8UC1, const_cast<std::uint8_t*>(img.pixels.data())).clone();
  }
  cv::Mat rgb(img.height, img.width, CV_8UC3, const_cast<std::uint8_t*>(img.pixels.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

Rgb8Image from_rgb_mat(const cv::Mat& rgb) {
  Rgb8Image out(rgb.cols, rgb.rows);
  for (int y = 0; y < rgb.rows; ++y) {
    std::memcpy(&out.pixels[static_cast<std::size_t>(y) * rgb.cols * 3], rgb.ptr(y), static_cast<std::size_t>(rgb.cols) * 3);
  }
  return out;
}

}  // namespace

Rgb8Image read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorKind::NotFound, "image not found: " + path.string());
  return from_mat(cv::imread(path.string(), cv::IMREAD_UNCHANGED), path.string());
}

Rgb8Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) fail(ErrorKind::InvalidArgument, "empty image payload");
  cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  return from_mat(cv::imdecode(buf, cv::IMREAD_UNCHANGED), "<memory>");
}

namespace {

Rgb8Image from_gray_mat(const cv::Mat& gray, const std::string& source) {
  if (gray.empty()) fail(ErrorKind::Corrupt, "cannot decode image " + source);
  if (gray.depth() != CV_8U) fail(ErrorKind::InvalidArgument, source + ": only 8-bit images are supported");
  Rgb8Image out(gray.cols, gray.rows, 1);
  for (int y = 0; y < gray.rows; ++y) {
    std::memcpy(&out.pixels[static_cast<std::size_t>(y) * gray.cols], gray.ptr(y), static_cast<std::size_t>(gray.cols));
  }
  return out;
}

}  // namespace

Rgb8Image decode_gray(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) fail(ErrorKind::InvalidArgument, "empty image payload");
  cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  return from_gray_mat(cv::imdecode(buf, cv::IMREAD_GRAYSCALE), "<memory>");
}

Rgb8Image read_gray(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorKind::NotFound, "image not found: " + path.string());
  return from_gray_mat(cv::imread(path.string(), cv::IMREAD_GRAYSCALE), path.string());
}

void write_png(const std::filesystem::path& path, const Rgb8Image& img) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), to_bgr_mat(img))) fail(ErrorKind::Io, "cannot write image " + path.string());
}

std::vector<std::uint8_t> encode_png(const Rgb8Image& img) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", to_bgr_mat(img), out)) fail(ErrorKind::Io, "PNG encoding failed");
  return out;
}

Rgb8Image resize(const Rgb8Image& img, int width, int height) {
  require(width > 0 && height > 0, "resize: target size must be positive");
  if (width == img.width && height == img.height) return img;
  cv::Mat src(img.height, img.width, CV_8UC3, const_cast<std::uint8_t*>(img.pixels.data()));
  cv::Mat dst;
  const bool shrinking = width < img.width || height < img.height;
  cv::resize(src, dst, cv::Size(width, height), 0, 0, shrinking ? cv::INTER_AREA : cv::INTER_LINEAR);
  return from_rgb_mat(dst);
}

Rgb8Image crop(const Rgb8Image& img, int x0, int y0, int width, int height) {
  require(x0 >= 0 && y0 >= 0 && x0 + width <= img.width && y0 + height <= img.height, "crop window out of bounds");
  Rgb8Image out(width, height, img.channels);
  const std::size_t row = static_cast<std::size_t>(width) * img.channels;
  for (int y = 0; y < height; ++y) {
    std::memcpy(&out.pixels[y * row], &img.pixels[(static_cast<std::size_t>(y0 + y) * img.width + x0) * img.channels],
                row);
  }
  return out;
}

Rgb8Image flip_horizontal(const Rgb8Image& img) {
  Rgb8Image out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) out.at(img.width - 1 - x, y, c) = img.at(x, y, c);
    }
  }
  return out;
}

Rgb8Image montage(const std::vector<Rgb8Image>& tiles, int cols) {
  require(!tiles.empty() && cols > 0, "montage: need at least one tile and one column");
  const int tw = tiles.front().width;
  const int th = tiles.front().height;
  const int rows = static_cast<int>((tiles.size() + cols - 1) / cols);
  Rgb8Image sheet(tw * cols, th * rows);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    require(tiles[i].width == tw && tiles[i].height == th, "montage: tiles must share one size");
    const int ox = static_cast<int>(i % cols) * tw;
    const int oy = static_cast<int>(i / cols) * th;
    for (int y = 0; y < th; ++y) {
      for (int x = 0; x < tw; ++x) {
        for (int c = 0; c < 3; ++c) sheet.at(ox + x, oy + y, c) = tiles[i].at(x, y, c);
      }
    }
  }
  return sheet;
}

Rgb8Image center_square(const Rgb8Image& img, int size) {
  require(size > 0, "center_square: size must be positive");
  int w = size, h = size;
  if (img.width <= img.height) {
    h = std::max(size, static_cast<int>(std::lround(static_cast<double>(img.height) * size / img.width)));
  } else {
    w = std::max(size, static_cast<int>(std::lround(static_cast<double>(img.width) * size / img.height)));
  }
  return crop(resize(img, w, h), (w - size) / 2, (h - size) / 2, size, size);
}

}  // namespace colorcode::io
