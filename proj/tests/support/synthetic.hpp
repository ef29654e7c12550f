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
#include <utility>

#include "colorcode/core/rgb8.hpp"

namespace colorcode::testing {

// Smooth, colorful reference scene with soft blobs and a few stripes.
Rgb8Image synthetic_scene(std::uint64_t seed, int width, int height);

// Underwater-looking version of a scene: depth-dependent attenuation that is
// strongest in red, plus blue-green veiling light.
Rgb8Image underwater_degrade(const Rgb8Image& scene, std::uint64_t seed);

// Writes n pairs as root/input/<id>.png and root/gt/<id>.png.
void write_synthetic_dataset(const std::filesystem::path& root, int n, int width, int height, std::uint64_t seed);

}  // namespace colorcode::testing
