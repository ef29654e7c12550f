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
#include <span>
#include <vector>

#include "colorcode/core/rgb8.hpp"

namespace colorcode::io {

// PNG/JPEG to 8-bit RGB. Grayscale files are rejected; alpha is dropped.
Rgb8Image read_image(const std::filesystem::path& path);
Rgb8Image decode_image(std::span<const std::uint8_t> bytes);

// Single-channel image (color inputs are converted to gray), channels == 1.
Rgb8Image decode_gray(std::span<const std::uint8_t> bytes);
Rgb8Image read_gray(const std::filesystem::path& path);

// RGB or single-channel gray.
void write_png(const std::filesystem::path& path, const Rgb8Image& img);
std::vector<std::uint8_t> encode_png(const Rgb8Image& img);

// Area interpolation when shrinking, bilinear when enlarging.
Rgb8Image resize(const Rgb8Image& img, int width, int height);
Rgb8Image crop(const Rgb8Image& img, int x0, int y0, int width, int height);
Rgb8Image flip_horizontal(const Rgb8Image& img);

// Short side resized to `size`, then a centered size×size crop.
Rgb8Image center_square(const Rgb8Image& img, int size);

// Tiles equally sized images row-major into a rows×cols sheet.
Rgb8Image montage(const std::vector<Rgb8Image>& tiles, int cols);

}  // namespace colorcode::io
