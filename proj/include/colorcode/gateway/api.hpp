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

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "colorcode/core/rgb8.hpp"
#include "colorcode/io/checkpoint.hpp"

namespace httplib {
class Server;
}

namespace colorcode::gateway {

// The single error shape of the CLI and the HTTP service.
struct ApiError {
  std::string code;
  std::string message;
  nlohmann::json detail;  // null when absent

  nlohmann::json to_json() const;
};

ApiError api_error_from(const std::exception& e);
int http_status(const ApiError& e);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
// Accepts an optional "data:...;base64," prefix and ignores whitespace.
std::vector<std::uint8_t> base64_decode(const std::string& text);

struct ServiceOptions {
  std::chrono::milliseconds deadline{30000};
  std::size_t max_image_bytes = 8u << 20;
  std::filesystem::path data_root = ".";  // datasets for /v1/codes/histogram resolve under here
  int histogram_bins = 20;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

// One checkpoint per process, shared read-only by every request.
class Service {
 public:
  Service(io::LoadedModel model, ServiceOptions options);
  ~Service();

  // Routes one request under the configured deadline.
  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body) const;

  // Binds an HTTP listener (port 0 picks a free port) and returns the port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

  struct State;

 private:
  std::shared_ptr<const State> state_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace colorcode::gateway
