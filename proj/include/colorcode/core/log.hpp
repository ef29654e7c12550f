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

#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace colorcode::log {

enum class Level { Debug, Info, Warn, Error };

// Emits one JSON object per line: {"level":..., "event":..., ...fields}.
// Default sink is stderr; Info and above are written.
void write(Level level, std::string_view event, nlohmann::json fields = nlohmann::json::object());

inline void info(std::string_view event, nlohmann::json fields = nlohmann::json::object()) {
  write(Level::Info, event, std::move(fields));
}
inline void warn(std::string_view event, nlohmann::json fields = nlohmann::json::object()) {
  write(Level::Warn, event, std::move(fields));
}
inline void error(std::string_view event, nlohmann::json fields = nlohmann::json::object()) {
  write(Level::Error, event, std::move(fields));
}

using Sink = std::function<void(const std::string& line)>;

// Replaces the sink (nullptr restores stderr). Returns the previous one.
Sink set_sink(Sink sink);
void set_min_level(Level level);

}  // namespace colorcode::log
