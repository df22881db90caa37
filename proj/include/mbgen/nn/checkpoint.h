// Copyright 2026 The mbgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBGEN_NN_CHECKPOINT_H_
#define MBGEN_NN_CHECKPOINT_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace nn {

// A checkpoint is a pair of files sharing a stem: <stem>.bin holds every
// parameter as a little-endian float32 in storage order, <stem>.json the
// shape manifest plus free-form metadata.
struct Checkpoint {
  MlpParams<float> params;
  nlohmann::json metadata;
};

inline std::string CheckpointStem(std::string path) {
  for (const char* ext : {".bin", ".json"}) {
    const std::size_t n = std::strlen(ext);
    if (path.size() > n && path.compare(path.size() - n, n, ext) == 0) {
      return path.substr(0, path.size() - n);
    }
  }
  return path;
}

inline nlohmann::json ArchitectureToJson(const Architecture& arch) {
  return {{"input", arch.input}, {"hidden", arch.hidden}, {"heads", arch.heads}};
}

inline Architecture ArchitectureFromJson(const nlohmann::json& j) {
  Architecture arch;
  arch.input = j.at("input").get<int>();
  arch.hidden = j.at("hidden").get<std::vector<int>>();
  arch.heads = j.at("heads").get<std::vector<int>>();
  arch.Validate();
  return arch;
}

inline void SaveCheckpoint(const std::string& path, const MlpParams<float>& params,
                           const nlohmann::json& metadata = nlohmann::json::object()) {
  const std::string stem = CheckpointStem(path);
  const Architecture& arch = params.arch();
  nlohmann::json manifest;
  manifest["format"] = "float32-le";
  manifest["architecture"] = ArchitectureToJson(arch);
  manifest["num_params"] = params.size();
  nlohmann::json tensors = nlohmann::json::array();
  std::size_t offset = 0;
  for (int l = 0; l < arch.num_layers(); ++l) {
    const std::size_t w = static_cast<std::size_t>(arch.fan_in(l)) * arch.fan_out(l);
    tensors.push_back({{"name", "layer" + std::to_string(l) + ".weight"},
                       {"shape", {arch.fan_in(l), arch.fan_out(l)}},
                       {"offset", offset}});
    offset += w;
    tensors.push_back({{"name", "layer" + std::to_string(l) + ".bias"},
                       {"shape", {arch.fan_out(l)}},
                       {"offset", offset}});
    offset += arch.fan_out(l);
  }
  manifest["tensors"] = tensors;
  manifest["metadata"] = metadata;

  std::ofstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + stem + ".bin");
  for (float v : params.values()) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    unsigned char bytes[4] = {static_cast<unsigned char>(bits),
                              static_cast<unsigned char>(bits >> 8),
                              static_cast<unsigned char>(bits >> 16),
                              static_cast<unsigned char>(bits >> 24)};
    bin.write(reinterpret_cast<const char*>(bytes), 4);
  }
  std::ofstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot write " + stem + ".json");
  js << manifest.dump(2) << '\n';
  if (!bin || !js) throw std::runtime_error("checkpoint write failed for " + stem);
}

inline Checkpoint LoadCheckpoint(const std::string& path) {
  const std::string stem = CheckpointStem(path);
  std::ifstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot open " + stem + ".json");
  nlohmann::json manifest = nlohmann::json::parse(js);
  if (manifest.value("format", "") != "float32-le") {
    throw std::runtime_error(stem + ".json: unsupported format");
  }
  Checkpoint ckpt{MlpParams<float>(ArchitectureFromJson(manifest.at("architecture"))),
                  manifest.value("metadata", nlohmann::json::object())};
  if (manifest.at("num_params").get<std::size_t>() != ckpt.params.size()) {
    throw std::runtime_error(stem + ".json: num_params disagrees with architecture");
  }
  std::ifstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + stem + ".bin");
  for (float& v : ckpt.params.values()) {
    unsigned char bytes[4];
    if (!bin.read(reinterpret_cast<char*>(bytes), 4)) {
      throw std::runtime_error(stem + ".bin: truncated");
    }
    std::uint32_t bits = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                         (static_cast<std::uint32_t>(bytes[3]) << 24);
    v = std::bit_cast<float>(bits);
  }
  if (bin.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(stem + ".bin: trailing bytes");
  }
  return ckpt;
}

}  // namespace nn
}  // namespace mbgen

#endif  // MBGEN_NN_CHECKPOINT_H_
