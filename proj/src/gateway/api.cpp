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

#include "colorcode/gateway/api.hpp"

#include <openssl/evp.h>

#include <future>
#include <thread>

#include <httplib.h>

#include "colorcode/core/error.hpp"
#include "colorcode/core/log.hpp"
#include "colorcode/infer/diagnostics.hpp"
#include "colorcode/infer/inference.hpp"
#include "colorcode/io/image_io.hpp"
#include "colorcode/metrics/diagnostics.hpp"

namespace colorcode::gateway {

using nlohmann::json;

nlohmann::json ApiError::to_json() const {
  json out = {{"code", code}, {"message", message}};
  out["detail"] = detail;
  return out;
}

namespace {

struct HttpError {
  int status;
  ApiError error;
};

[[noreturn]] void http_fail(int status, std::string code, std::string message, json detail = nullptr) {
  throw HttpError{status, {std::move(code), std::move(message), std::move(detail)}};
}

}  // namespace

ApiError api_error_from(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    std::string code;
    switch (err->kind()) {
      case ErrorKind::InvalidArgument:
        code = "invalid_argument";
        break;
      case ErrorKind::Conflict:
        code = "conflict";
        break;
      case ErrorKind::NotFound:
        code = "not_found";
        break;
      case ErrorKind::Corrupt:
        code = "corrupt";
        break;
      case ErrorKind::NumericalFailure:
        code = "numerical_failure";
        break;
      case ErrorKind::Io:
        code = "io_error";
        break;
    }
    return {code, err->what(), nullptr};
  }
  return {"internal", e.what(), nullptr};
}

int http_status(const ApiError& e) {
  if (e.code == "invalid_argument" || e.code == "not_found" || e.code == "invalid_json") return 400;
  if (e.code == "conflict") return 409;
  if (e.code == "timeout") return 504;
  return 500;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::string clean;
  auto start = text.find("base64,");
  start = (text.rfind("data:", 0) == 0 && start != std::string::npos) ? start + 7 : 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) clean.push_back(text[i]);
  }
  require(clean.size() % 4 == 0, "base64 payload has invalid length");
  std::vector<std::uint8_t> out(clean.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  require(n >= 0, "payload is not valid base64");
  std::size_t pad = 0;
  if (!clean.empty() && clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

struct Service::State {
  io::LoadedModel model;
  infer::Enhancer enhancer;
  ServiceOptions options;

  State(io::LoadedModel m, ServiceOptions o) : model(std::move(m)), enhancer(model.bundle), options(std::move(o)) {}

  Response dispatch(const std::string& method, const std::string& path,
                    const std::map<std::string, std::string>& query, const std::string& body) const;

  json parse_body(const std::string& body) const {
    try {
      auto doc = json::parse(body);
      if (!doc.is_object()) http_fail(400, "invalid_json", "request body must be a JSON object");
      return doc;
    } catch (const json::parse_error& e) {
      http_fail(400, "invalid_json", std::string("request body is not valid JSON: ") + e.what());
    }
  }

  const json& field(const json& doc, const char* name) const {
    if (!doc.contains(name)) http_fail(400, "invalid_argument", std::string("missing field '") + name + "'");
    return doc.at(name);
  }

  double number(const json& doc, const char* name, std::optional<double> fallback = {}) const {
    if (!doc.contains(name) && fallback) return *fallback;
    const auto& v = field(doc, name);
    if (!v.is_number()) http_fail(400, "invalid_argument", std::string("field '") + name + "' must be a number");
    return v.get<double>();
  }

  std::vector<std::uint8_t> payload(const json& doc, const char* name) const {
    const auto& v = field(doc, name);
    if (!v.is_string()) http_fail(400, "invalid_argument", std::string("field '") + name + "' must be a base64 string");
    const auto& text = v.get_ref<const std::string&>();
    if (text.size() / 4 * 3 > options.max_image_bytes + 3) {
      http_fail(400, "image_too_large", std::string("field '") + name + "' exceeds the image size limit",
                {{"limit_bytes", options.max_image_bytes}});
    }
    auto bytes = base64_decode(text);
    if (bytes.size() > options.max_image_bytes) {
      http_fail(400, "image_too_large", std::string("field '") + name + "' exceeds the image size limit",
                {{"limit_bytes", options.max_image_bytes}});
    }
    return bytes;
  }

  // An undecodable upload is the client's fault, not a server-side corruption.
  template <typename Decode>
  static Rgb8Image decoded(const char* name, Decode&& decode) {
    try {
      return decode();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Corrupt) throw;
      http_fail(400, "invalid_argument", std::string("field '") + name + "' is not a decodable image");
    }
  }

  ImageTensor image(const json& doc, const char* name) const {
    const auto bytes = payload(doc, name);
    return normalize_image(decoded(name, [&] { return io::decode_image(bytes); }));
  }

  static std::string encode(const ImageTensor& img) {
    return base64_encode(io::encode_png(tensor_to_rgb8(img.tensor())));
  }
};

Response Service::State::dispatch(const std::string& method, const std::string& path,
                                  const std::map<std::string, std::string>& query, const std::string& body) const {
  const auto& cfg = model.config;
  if (path == "/v1/health") {
    if (method != "GET") http_fail(405, "method_not_allowed", "use GET for " + path);
    return {200, {{"status", "ok"}, {"k_m", cfg.code_length}, {"checkpoint_digest", model.digest}}};
  }
  if (path == "/v1/codes/histogram") {
    if (method != "GET") http_fail(405, "method_not_allowed", "use GET for " + path);
    auto it = query.find("dataset");
    if (it == query.end() || it->second.empty()) http_fail(400, "invalid_argument", "missing query parameter 'dataset'");
    const auto root = std::filesystem::weakly_canonical(options.data_root);
    const auto target = std::filesystem::weakly_canonical(root / it->second);
    const auto rel = target.lexically_relative(root);
    if (rel.empty() || *rel.begin() == "..") {
      http_fail(400, "invalid_argument", "dataset must lie under the service data root");
    }
    int bins = options.histogram_bins;
    if (auto b = query.find("bins"); b != query.end()) {
      try {
        bins = std::stoi(b->second);
      } catch (const std::exception&) {
        http_fail(400, "invalid_argument", "bins must be an integer");
      }
    }
    const auto codes = infer::collect_color_codes(enhancer, target, cfg.image_size);
    return {200, metrics::to_json(metrics::code_histograms(codes, bins))};
  }
  if (method != "POST") {
    if (path == "/v1/enhance" || path == "/v1/adapt" || path == "/v1/interpolate" || path == "/v1/grid") {
      http_fail(405, "method_not_allowed", "use POST for " + path);
    }
    http_fail(404, "not_found", "no endpoint " + method + " " + path);
  }
  const auto doc = parse_body(body);
  if (path == "/v1/enhance") {
    return {200, {{"image", encode(enhancer.enhance(image(doc, "image")))}}};
  }
  if (path == "/v1/adapt") {
    infer::AdaptationRequest req{image(doc, "image"), image(doc, "guidance"), number(doc, "alpha"), std::nullopt};
    if (doc.contains("mask") && !doc.at("mask").is_null()) {
      const auto bytes = payload(doc, "mask");
      const auto gray = decoded("mask", [&] { return io::decode_gray(bytes); });
      std::vector<std::uint8_t> bits(gray.pixels.size());
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = gray.pixels[i] > 127 ? 1 : 0;
      req.mask = infer::BinaryMask(gray.width, gray.height, std::move(bits));
    }
    return {200, {{"image", encode(enhancer.adapt(req))}}};
  }
  if (path == "/v1/interpolate") {
    const auto& z = field(doc, "z");
    if (!z.is_array()) http_fail(400, "invalid_argument", "field 'z' must be an array of numbers");
    std::vector<double> values;
    for (const auto& v : z) {
      if (!v.is_number()) http_fail(400, "invalid_argument", "field 'z' must be an array of numbers");
      values.push_back(v.get<double>());
    }
    infer::InterpolationRequest req{image(doc, "image"), std::move(values), number(doc, "alpha", 0.5)};
    return {200, {{"image", encode(enhancer.interpolate(req))}}};
  }
  if (path == "/v1/grid") {
    const auto x = image(doc, "image");
    const double steps = number(doc, "steps");
    if (steps != std::floor(steps) || steps < 1 || steps > 64) {
      http_fail(400, "invalid_argument", "steps must be an integer in [1, 64]");
    }
    const auto grid = enhancer.interpolation_grid(x, static_cast<int>(steps), number(doc, "lo", -5.0),
                                                  number(doc, "hi", 5.0), number(doc, "alpha", 0.5));
    json images = json::array(), zs = json::array();
    json center = nullptr;
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
      json row = json::array(), zrow = json::array();
      for (std::size_t j = 0; j < grid.cells[i].size(); ++j) {
        const auto& cell = grid.cells[i][j];
        row.push_back(encode(cell.image));
        zrow.push_back(cell.z);
        if (cell.fixed_enhancement) center = {i, j};
      }
      images.push_back(std::move(row));
      zs.push_back(std::move(zrow));
    }
    return {200, {{"images", images}, {"z", zs}, {"center", center}}};
  }
  http_fail(404, "not_found", "no endpoint " + method + " " + path);
}

Service::Service(io::LoadedModel model, ServiceOptions options)
    : state_(std::make_shared<const State>(std::move(model), std::move(options))) {}

Service::~Service() { stop(); }

Response Service::handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body) const {
  auto run = [state = state_, method, path, query, body]() -> Response {
    try {
      return state->dispatch(method, path, query, body);
    } catch (const HttpError& e) {
      return {e.status, e.error.to_json()};
    } catch (const std::exception& e) {
      const auto err = api_error_from(e);
      return {http_status(err), err.to_json()};
    }
  };
  // The worker owns copies of everything it touches, so a request that
  // overruns the deadline can finish in the background after we answer.
  auto task = std::make_shared<std::packaged_task<Response()>>(std::move(run));
  auto result = task->get_future();
  std::thread([task] { (*task)(); }).detach();
  if (result.wait_for(state_->options.deadline) != std::future_status::ready) {
    log::warn("request_timeout", {{"path", path}, {"deadline_ms", state_->options.deadline.count()}});
    ApiError err{"timeout", "request exceeded the " + std::to_string(state_->options.deadline.count()) + " ms deadline",
                 {{"deadline_ms", state_->options.deadline.count()}}};
    return {504, err.to_json()};
  }
  return result.get();
}

int Service::bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  server_->set_payload_max_length(4 * state_->options.max_image_bytes + (1u << 20) * 4);
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const auto out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
    log::info("request", {{"method", req.method}, {"path", req.path}, {"status", out.status}});
  };
  server_->Get(R"(/v1/.*)", route);
  server_->Post(R"(/v1/.*)", route);
  server_->Put(R"(/v1/.*)", route);
  server_->Delete(R"(/v1/.*)", route);
  server_->Patch(R"(/v1/.*)", route);
  server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const ApiError err{res.status == 404 ? "not_found" : "http_error", "request to " + req.path + " failed", nullptr};
    res.set_content(err.to_json().dump(), "application/json");
  });
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Service::listen() {
  require(server_ != nullptr, "listen called before bind");
  server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace colorcode::gateway
