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

#include "colorcode/core/log.hpp"

#include <iostream>
#include <mutex>

namespace colorcode::log {

namespace {

std::mutex g_mutex;
Sink g_sink;
Level g_min_level = Level::Info;

const char* level_name(Level level) {
  switch (level) {
    case Level::Debug:
      return "debug";
    case Level::Info:
      return "info";
    case Level::Warn:
      return "warn";
    case Level::Error:
      return "error";
  }
  return "info";
}

}  // namespace

void write(Level level, std::string_view event, nlohmann::json fields) {
  std::lock_guard lock(g_mutex);
  if (level < g_min_level) return;
  nlohmann::json line = {{"level", level_name(level)}, {"event", std::string(event)}};
  if (fields.is_object()) {
    for (auto& [k, v] : fields.items()) line[k] = v;
  }
  const auto text = line.dump();
  if (g_sink) {
    g_sink(text);
  } else {
    std::cerr << text << '\n';
  }
}

Sink set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  auto previous = std::move(g_sink);
  g_sink = std::move(sink);
  return previous;
}

void set_min_level(Level level) {
  std::lock_guard lock(g_mutex);
  g_min_level = level;
}

}  // namespace colorcode::log
