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

#include "colorcode/io/checkpoint.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "colorcode/core/error.hpp"

namespace colorcode::io {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'C', 'C', 'K', 'P', 'T', '0', '0', '1'};
constexpr const char* kManifest = "manifest.json";

using Entries = std::vector<std::pair<std::string, std::string>>;

template <typename T>
void put(std::string& out, T v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& data, std::string what) : data_(data), what_(std::move(what)) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  std::string bytes(std::size_t n) { return std::string(take(n), n); }
  bool done() const { return pos_ == data_.size(); }

 private:
  const char* take(std::size_t n) {
    if (n > data_.size() - pos_) fail(ErrorKind::Corrupt, what_ + " is truncated");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }

  const std::string& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string serialize_tensors(const torch::nn::Module& module) {
  std::vector<std::pair<std::string, torch::Tensor>> items;
  for (const auto& p : module.named_parameters(true)) items.emplace_back(p.key(), p.value());
  for (const auto& b : module.named_buffers(true)) items.emplace_back(b.key(), b.value());
  std::string out;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(items.size()));
  for (const auto& [name, tensor] : items) {
    const auto t = tensor.detach().cpu().contiguous();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::int32_t>(out, static_cast<std::int32_t>(t.scalar_type()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dim()));
    for (auto d : t.sizes()) put<std::int64_t>(out, d);
    const auto nbytes = t.numel() * t.element_size();
    put<std::uint64_t>(out, static_cast<std::uint64_t>(nbytes));
    out.append(static_cast<const char*>(t.data_ptr()), nbytes);
  }
  return out;
}

void deserialize_tensors(torch::nn::Module& module, const std::string& data, const std::string& what) {
  std::map<std::string, torch::Tensor> targets;
  for (const auto& p : module.named_parameters(true)) targets[p.key()] = p.value();
  for (const auto& b : module.named_buffers(true)) targets[b.key()] = b.value();
  Reader r(data, what);
  const auto count = r.get<std::uint32_t>();
  if (count != targets.size()) {
    fail(ErrorKind::Corrupt, what + ": expected " + std::to_string(targets.size()) + " tensors, found " +
                                 std::to_string(count));
  }
  torch::NoGradGuard no_grad;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name = r.bytes(r.get<std::uint32_t>());
    const auto dtype = static_cast<torch::ScalarType>(r.get<std::int32_t>());
    const auto ndim = r.get<std::uint32_t>();
    if (ndim > 8) fail(ErrorKind::Corrupt, what + ": implausible tensor rank for " + name);
    std::vector<std::int64_t> dims(ndim);
    for (auto& d : dims) d = r.get<std::int64_t>();
    const auto nbytes = r.get<std::uint64_t>();
    const auto raw = r.bytes(nbytes);
    auto it = targets.find(name);
    if (it == targets.end()) fail(ErrorKind::Corrupt, what + ": unexpected tensor " + name);
    auto& target = it->second;
    if (target.sizes() != torch::IntArrayRef(dims) || target.scalar_type() != dtype) {
      fail(ErrorKind::Corrupt, what + ": tensor " + name + " has mismatched shape or dtype");
    }
    if (nbytes != static_cast<std::uint64_t>(target.numel() * target.element_size())) {
      fail(ErrorKind::Corrupt, what + ": tensor " + name + " has wrong byte count");
    }
    auto src = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    std::memcpy(src.data_ptr(), raw.data(), nbytes);
    target.copy_(src);
  }
  if (!r.done()) fail(ErrorKind::Corrupt, what + " has trailing bytes");
}

std::string serialize_optimizer(const torch::optim::Adam& opt) {
  torch::serialize::OutputArchive archive;
  opt.save(archive);
  std::ostringstream out;
  archive.save_to(out);
  return out.str();
}

void deserialize_optimizer(torch::optim::Adam& opt, const std::string& data, const std::string& what) {
  try {
    std::istringstream in(data);
    torch::serialize::InputArchive archive;
    archive.load_from(in);
    opt.load(archive);
  } catch (const c10::Error& e) {
    fail(ErrorKind::Corrupt, what + " cannot be restored: " + e.what_without_backtrace());
  }
}

std::string read_file(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorKind::NotFound, "checkpoint not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Entries read_archive(const fs::path& path) {
  const auto data = read_file(path);
  const std::string what = "checkpoint " + path.string();
  if (data.size() < sizeof(kMagic) || std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorKind::Corrupt, what + " is not a checkpoint archive");
  }
  Reader r(data, what);
  r.bytes(sizeof(kMagic));
  const auto count = r.get<std::uint32_t>();
  Entries entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto name = r.bytes(r.get<std::uint32_t>());
    auto payload = r.bytes(r.get<std::uint64_t>());
    entries.emplace_back(std::move(name), std::move(payload));
  }
  if (!r.done()) fail(ErrorKind::Corrupt, what + " has trailing bytes");
  return entries;
}

void write_archive(const fs::path& path, const Entries& entries) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& [name, payload] : entries) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint64_t>(out, payload.size());
    out += payload;
  }
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::Io, "cannot write checkpoint " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) fail(ErrorKind::Io, "short write on checkpoint " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot move checkpoint into place: " + ec.message());
}

struct Parsed {
  CheckpointManifest manifest;
  std::string manifest_bytes;
  std::map<std::string, std::string> payloads;
};

Parsed parse(const fs::path& path) {
  Parsed p;
  for (auto& [name, payload] : read_archive(path)) p.payloads[name] = std::move(payload);
  auto it = p.payloads.find(kManifest);
  if (it == p.payloads.end()) fail(ErrorKind::Corrupt, "checkpoint " + path.string() + " has no manifest");
  p.manifest_bytes = it->second;
  try {
    const auto doc = nlohmann::json::parse(p.manifest_bytes);
    p.manifest.format_version = doc.at("format_version").get<int>();
    if (p.manifest.format_version != kCheckpointFormatVersion) {
      fail(ErrorKind::Corrupt, "unsupported checkpoint format version " + std::to_string(p.manifest.format_version));
    }
    p.manifest.config = config_from_json(doc.at("config"));
    p.manifest.iteration = doc.at("iteration").get<std::int64_t>();
    p.manifest.data_cursor = doc.at("data_cursor").get<std::int64_t>();
    p.manifest.digests = doc.at("digests").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Corrupt, "checkpoint manifest is malformed: " + std::string(e.what()));
  }
  for (const auto& [name, digest] : p.manifest.digests) {
    auto entry = p.payloads.find(name);
    if (entry == p.payloads.end()) fail(ErrorKind::Corrupt, "checkpoint is missing entry " + name);
    if (sha256_hex(entry->second) != digest) {
      fail(ErrorKind::Corrupt, "checkpoint entry " + name + " does not match its digest");
    }
  }
  return p;
}

const std::string& payload(const Parsed& p, const std::string& name) {
  auto it = p.payloads.find(name);
  if (it == p.payloads.end() || !p.manifest.digests.count(name)) {
    fail(ErrorKind::Corrupt, "checkpoint is missing entry " + name);
  }
  return it->second;
}

void load_networks(nn::NetworkBundle& bundle, const Parsed& p) {
  for (const auto& [name, module] : bundle.named_networks()) {
    const auto entry = "net/" + name;
    deserialize_tensors(*module, payload(p, entry), entry);
  }
}

void check_expected(const TrainConfig& found, const TrainConfig* expected) {
  if (!expected) return;
  const auto mismatches = architecture_mismatches(found, *expected);
  if (mismatches.empty()) return;
  std::string fields;
  for (const auto& m : mismatches) fields += (fields.empty() ? "" : ", ") + m;
  fail(ErrorKind::Conflict, "checkpoint architecture differs in " + fields +
                                "\ncheckpoint config: " + to_json(found).dump() +
                                "\nrequested config: " + to_json(*expected).dump());
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

void save_checkpoint(const train::TrainState& state, const fs::path& path) {
  require(state.bundle && state.generator_optimizer && state.discriminator_optimizer,
          "save_checkpoint: incomplete training state");
  Entries entries;
  for (const auto& [name, module] : state.bundle->named_networks()) {
    entries.emplace_back("net/" + name, serialize_tensors(*module));
  }
  entries.emplace_back("optim/generator", serialize_optimizer(*state.generator_optimizer));
  entries.emplace_back("optim/discriminator", serialize_optimizer(*state.discriminator_optimizer));
  const auto rng = state.rng.get_state().contiguous();
  entries.emplace_back("rng", std::string(static_cast<const char*>(rng.data_ptr()), rng.numel()));

  nlohmann::json digests = nlohmann::json::object();
  for (const auto& [name, bytes] : entries) digests[name] = sha256_hex(bytes);
  const nlohmann::json manifest = {{"format_version", kCheckpointFormatVersion},
                                   {"config", to_json(state.config)},
                                   {"iteration", state.iteration},
                                   {"data_cursor", state.data_cursor},
                                   {"digests", digests}};
  entries.insert(entries.begin(), {kManifest, manifest.dump(2)});
  write_archive(path, entries);
}

CheckpointManifest read_manifest(const fs::path& path) { return parse(path).manifest; }

train::TrainState load_checkpoint(const fs::path& path, const TrainConfig* expected) {
  const auto p = parse(path);
  check_expected(p.manifest.config, expected);
  auto state = train::TrainState::create(p.manifest.config);
  load_networks(*state.bundle, p);
  deserialize_optimizer(*state.generator_optimizer, payload(p, "optim/generator"), "optim/generator");
  deserialize_optimizer(*state.discriminator_optimizer, payload(p, "optim/discriminator"), "optim/discriminator");
  const auto& rng = payload(p, "rng");
  auto rng_state = torch::empty({static_cast<std::int64_t>(rng.size())}, torch::kUInt8);
  std::memcpy(rng_state.data_ptr(), rng.data(), rng.size());
  try {
    state.rng.set_state(rng_state);
  } catch (const c10::Error& e) {
    fail(ErrorKind::Corrupt, std::string("checkpoint rng state is invalid: ") + e.what_without_backtrace());
  }
  state.iteration = p.manifest.iteration;
  state.data_cursor = p.manifest.data_cursor;
  return state;
}

LoadedModel load_model(const fs::path& path) {
  const auto p = parse(path);
  auto bundle = std::make_shared<nn::NetworkBundle>(p.manifest.config);
  load_networks(*bundle, p);
  LoadedModel m;
  m.bundle = std::move(bundle);
  m.config = p.manifest.config;
  m.iteration = p.manifest.iteration;
  m.digest = sha256_hex(p.manifest_bytes);
  return m;
}

}  // namespace colorcode::io
