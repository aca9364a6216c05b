/* Copyright 2026 The RStar Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "rstar/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "binio.hpp"
#include "config_json.hpp"
#include "rstar/error.hpp"

namespace rstar {

namespace {

constexpr char kCheckpointMagic[] = "RSTARCKPT";  // 9 bytes, no terminator
constexpr std::uint32_t kCheckpointVersion = 1;

using nlohmann::json;

}  // namespace

ModelParams allocate_params(const ModelConfig& cfg) {
  cfg.validate();
  ModelParams p;
  int cin = cfg.input_channels;
  for (const ConvLayerSpec& l : cfg.trunk) {
    p.conv_w.push_back(ad::make_tensor({l.channels, cin, l.kernel, l.kernel}));
    p.conv_b.push_back(ad::make_tensor({l.channels}));
    cin = l.channels;
  }
  const int d = cfg.fc_input_width();
  p.fc1_w = ad::make_tensor({cfg.fc1_width, d});
  p.fc1_b = ad::make_tensor({cfg.fc1_width});
  p.fc2_w = ad::make_tensor({cfg.fc2_width, cfg.fc1_width});
  p.fc2_b = ad::make_tensor({cfg.fc2_width});
  const int a = cfg.num_actions();
  p.head_primary_w = ad::make_tensor({a, cfg.fc2_width});
  p.head_primary_b = ad::make_tensor({a});
  p.head_secondary_w = ad::make_tensor({a, cfg.fc2_width});
  p.head_secondary_b = ad::make_tensor({a});
  return p;
}

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const ModelConfig& mcfg, const TrainConfig& tcfg) {
  const auto named = params.named();

  json header;
  header["model"] = mcfg;
  header["train"] = tcfg;
  json tensors = json::array();
  std::size_t offset = 0;  // in doubles
  for (const auto& [name, t] : named) {
    tensors.push_back(json{{"name", name}, {"shape", t->shape}, {"offset", offset},
                           {"count", t->values.size()}});
    offset += t->values.size();
  }
  header["tensors"] = std::move(tensors);
  header["blob_doubles"] = offset;

  std::ostringstream blob_stream;
  for (const auto& [name, t] : named) {
    detail::write_doubles_le(blob_stream, t->values.data(), t->values.size());
  }
  const std::string blob = blob_stream.str();
  header["blob_crc32"] = detail::crc32_bytes(blob.data(), blob.size());

  const std::string htext = header.dump();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint file: " + tmp);
    detail::write_bytes(out, kCheckpointMagic, sizeof(kCheckpointMagic) - 1);
    detail::write_u32le(out, kCheckpointVersion);
    detail::write_u32le(out, detail::crc32_bytes(htext.data(), htext.size()));
    detail::write_u64le(out, htext.size());
    detail::write_bytes(out, htext.data(), htext.size());
    detail::write_bytes(out, blob.data(), blob.size());
    if (!out.good()) throw IoError("short write to checkpoint file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint file: " + path);

  char magic[sizeof(kCheckpointMagic) - 1];
  detail::read_bytes(in, magic, sizeof(magic), "checkpoint magic");
  if (std::string_view(magic, sizeof(magic)) != kCheckpointMagic) {
    throw FormatError(path + ": not a checkpoint (bad magic)");
  }
  const std::uint32_t version = detail::read_u32le(in, "checkpoint version");
  if (version != kCheckpointVersion) {
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t header_crc = detail::read_u32le(in, "checkpoint header crc");
  const std::uint64_t header_len = detail::read_u64le(in, "checkpoint header length");
  std::string htext(header_len, '\0');
  detail::read_bytes(in, htext.data(), header_len, "checkpoint header");
  if (detail::crc32_bytes(htext.data(), htext.size()) != header_crc) {
    throw ChecksumError(path + ": checkpoint header checksum mismatch");
  }

  json header;
  try {
    header = json::parse(htext);
  } catch (const json::exception& e) {
    throw FormatError(path + ": checkpoint header is not valid JSON: " + e.what());
  }

  Checkpoint ckpt;
  std::uint64_t blob_doubles = 0;
  std::uint32_t blob_crc = 0;
  struct TensorEntry {
    std::string name;
    std::vector<int> shape;
    std::uint64_t offset;
    std::uint64_t count;
  };
  std::vector<TensorEntry> entries;
  try {
    ckpt.model = header.at("model").get<ModelConfig>();
    ckpt.train = header.at("train").get<TrainConfig>();
    blob_doubles = header.at("blob_doubles").get<std::uint64_t>();
    blob_crc = header.at("blob_crc32").get<std::uint32_t>();
    for (const json& jt : header.at("tensors")) {
      entries.push_back(TensorEntry{jt.at("name").get<std::string>(),
                                    jt.at("shape").get<std::vector<int>>(),
                                    jt.at("offset").get<std::uint64_t>(),
                                    jt.at("count").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(path + ": malformed checkpoint header: " + e.what());
  }

  std::string blob(blob_doubles * sizeof(double), '\0');
  detail::read_bytes(in, blob.data(), blob.size(), "checkpoint tensor data");
  if (detail::crc32_bytes(blob.data(), blob.size()) != blob_crc) {
    throw ChecksumError(path + ": checkpoint tensor checksum mismatch");
  }

  ckpt.params = allocate_params(ckpt.model);
  const auto named = ckpt.params.named();
  if (named.size() != entries.size()) {
    throw FormatError(path + ": checkpoint stores " + std::to_string(entries.size()) +
                      " tensors, model config implies " + std::to_string(named.size()));
  }
  std::istringstream blob_in(blob);
  for (std::size_t i = 0; i < named.size(); ++i) {
    const auto& [name, t] = named[i];
    const TensorEntry& e = entries[i];
    if (e.name != name || e.shape != t->shape) {
      throw FormatError(path + ": tensor " + e.name + " has shape " +
                        ad::shape_str(e.shape) + ", model config implies " + name + " " +
                        ad::shape_str(t->shape));
    }
    if (e.count != t->values.size() ||
        e.offset + e.count > blob_doubles) {
      throw FormatError(path + ": truncated tensor block for " + e.name);
    }
    blob_in.seekg(static_cast<std::streamoff>(e.offset * sizeof(double)));
    detail::read_doubles_le(blob_in, t->values.data(), t->values.size(),
                            "tensor " + e.name);
  }
  return ckpt;
}

}  // namespace rstar
