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

#include "colorcode/metrics/quality.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "colorcode/core/error.hpp"

namespace colorcode::metrics {

namespace {

void require_same_shape(const Rgb8Image& a, const Rgb8Image& b, const char* what) {
  require(a.width == b.width && a.height == b.height && a.channels == b.channels,
          std::string(what) + ": images differ in shape (" + std::to_string(a.width) + "x" +
              std::to_string(a.height) + "x" + std::to_string(a.channels) + " vs " + std::to_string(b.width) +
              "x" + std::to_string(b.height) + "x" + std::to_string(b.channels) + ")");
}

cv::Mat luminance(const Rgb8Image& img) {
  cv::Mat y(img.height, img.width, CV_64F);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      y.at<double>(r, c) = 0.299 * img.at(c, r, 0) + 0.587 * img.at(c, r, 1) + 0.114 * img.at(c, r, 2);
    }
  }
  return y;
}

// Same-size Gaussian blur cropped to positions where the full window fits.
cv::Mat blur_valid(const cv::Mat& m, const cv::Mat& kernel) {
  cv::Mat out;
  cv::sepFilter2D(m, out, CV_64F, kernel, kernel, cv::Point(-1, -1), 0.0, cv::BORDER_REFLECT);
  const int r = kernel.rows / 2;
  return out(cv::Rect(r, r, m.cols - 2 * r, m.rows - 2 * r)).clone();
}

cv::Mat channel(const Rgb8Image& img, int c) {
  cv::Mat m(img.height, img.width, CV_64F);
  for (int r = 0; r < img.height; ++r) {
    for (int x = 0; x < img.width; ++x) m.at<double>(r, x) = img.at(x, r, c);
  }
  return m;
}

double trimmed_mean(std::vector<double> v, double trim_low, double trim_high) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<double>(v.size());
  const auto lo = static_cast<std::size_t>(std::ceil(trim_low * k));
  const auto hi = v.size() - static_cast<std::size_t>(std::floor(trim_high * k));
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += v[i];
  return sum / static_cast<double>(hi - lo);
}

double uicm(const Rgb8Image& img) {
  const auto n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<double> rg(n), yb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.pixels[3 * i], g = img.pixels[3 * i + 1], b = img.pixels[3 * i + 2];
    rg[i] = r - g;
    yb[i] = (r + g) / 2.0 - b;
  }
  auto variance = [](const std::vector<double>& v, double mu) {
    double s = 0.0;
    for (double e : v) s += (e - mu) * (e - mu);
    return s / static_cast<double>(v.size());
  };
  const double mu_rg = trimmed_mean(rg, 0.1, 0.1);
  const double mu_yb = trimmed_mean(yb, 0.1, 0.1);
  return -0.0268 * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb) +
         0.1586 * std::sqrt(variance(rg, mu_rg) + variance(yb, mu_yb));
}

constexpr int kBlock = 10;

double eme(const cv::Mat& m) {
  const int k1 = m.cols / kBlock;
  const int k2 = m.rows / kBlock;
  if (k1 == 0 || k2 == 0) return 0.0;
  double sum = 0.0;
  for (int bx = 0; bx < k1; ++bx) {
    for (int by = 0; by < k2; ++by) {
      double lo = 0.0, hi = 0.0;
      cv::minMaxLoc(m(cv::Rect(bx * kBlock, by * kBlock, kBlock, kBlock)), &lo, &hi);
      if (lo > 0.0 && hi > 0.0) sum += std::log(hi / lo);
    }
  }
  return 2.0 / (static_cast<double>(k1) * k2) * sum;
}

double uism(const Rgb8Image& img) {
  constexpr double weights[3] = {0.299, 0.587, 0.114};
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto ch = channel(img, c);
    cv::Mat d0, d1, mag;
    cv::Sobel(ch, d0, CV_64F, 0, 1, 3, 1.0, 0.0, cv::BORDER_REFLECT);
    cv::Sobel(ch, d1, CV_64F, 1, 0, 3, 1.0, 0.0, cv::BORDER_REFLECT);
    cv::magnitude(d0, d1, mag);
    double peak = 0.0;
    cv::minMaxLoc(mag, nullptr, &peak);
    if (peak > 0.0) mag *= 255.0 / peak;
    total += weights[c] * eme(mag.mul(ch));
  }
  return total;
}

double uiconm(const Rgb8Image& img) {
  const int k1 = img.width / kBlock;
  const int k2 = img.height / kBlock;
  if (k1 == 0 || k2 == 0) return 0.0;
  double sum = 0.0;
  for (int bx = 0; bx < k1; ++bx) {
    for (int by = 0; by < k2; ++by) {
      int lo = 255, hi = 0;
      for (int y = by * kBlock; y < (by + 1) * kBlock; ++y) {
        for (int x = bx * kBlock; x < (bx + 1) * kBlock; ++x) {
          for (int c = 0; c < 3; ++c) {
            lo = std::min<int>(lo, img.at(x, y, c));
            hi = std::max<int>(hi, img.at(x, y, c));
          }
        }
      }
      const double top = hi - lo;
      const double bot = hi + lo;
      if (top > 0.0 && bot > 0.0) sum += (top / bot) * std::log(top / bot);
    }
  }
  return -1.0 / (static_cast<double>(k1) * k2) * sum;
}

}  // namespace

double psnr(const Rgb8Image& a, const Rgb8Image& b) {
  require_same_shape(a, b, "psnr");
  require(!a.pixels.empty(), "psnr: empty image");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    sq += d * d;
  }
  const double mse = sq / static_cast<double>(a.pixels.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const Rgb8Image& a, const Rgb8Image& b) {
  require_same_shape(a, b, "ssim");
  require(a.channels == 3, "ssim: expected RGB images");
  constexpr int kWindow = 11;
  require(a.width >= kWindow && a.height >= kWindow, "ssim: images must be at least 11x11");
  const auto kernel = cv::getGaussianKernel(kWindow, 1.5, CV_64F);
  const auto x = luminance(a);
  const auto y = luminance(b);
  const auto mx = blur_valid(x, kernel);
  const auto my = blur_valid(y, kernel);
  const cv::Mat vx = blur_valid(x.mul(x), kernel) - mx.mul(mx);
  const cv::Mat vy = blur_valid(y.mul(y), kernel) - my.mul(my);
  const cv::Mat cxy = blur_valid(x.mul(y), kernel) - mx.mul(my);
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  cv::Mat num = (2 * mx.mul(my) + c1).mul(2 * cxy + c2);
  cv::Mat den = (mx.mul(mx) + my.mul(my) + c1).mul(vx + vy + c2);
  cv::Mat map;
  cv::divide(num, den, map);
  return cv::mean(map)[0];
}

UiqmParts uiqm_parts(const Rgb8Image& img) {
  require(img.channels == 3, "uiqm: expected a color image, got " + std::to_string(img.channels) + " channel(s)");
  require(img.width > 0 && img.height > 0, "uiqm: empty image");
  UiqmParts p;
  p.uicm = uicm(img);
  p.uism = uism(img);
  p.uiconm = uiconm(img);
  p.uiqm = 0.0282 * p.uicm + 0.2953 * p.uism + 3.5753 * p.uiconm;
  return p;
}

double uiqm(const Rgb8Image& img) { return uiqm_parts(img).uiqm; }

}  // namespace colorcode::metrics
