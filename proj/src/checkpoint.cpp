/* Copyright 2026 The aigid Authors.

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

#include "aigid/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

#include "aigid/error.hpp"
#include "aigid/image_io.hpp"

namespace aigid {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are little-endian; add byte swapping for this target");

constexpr const char* kMetadataKey = "__metadata__";

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  nlohmann::json header = nlohmann::json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : checkpoint.tensors) {
    const std::uint64_t bytes = tensor.numel() * sizeof(float);
    header[name] = {{"dtype", "F32"},
                    {"shape", tensor.shape()},
                    {"data_offsets", {offset, offset + bytes}}};
    offset += bytes;
  }
  if (!checkpoint.metadata.empty()) header[kMetadataKey] = checkpoint.metadata;

  std::string text = header.dump();
  while (text.size() % 8 != 0) text.push_back(' ');

  std::vector<std::uint8_t> out(8 + text.size() + offset);
  const std::uint64_t n = text.size();
  std::memcpy(out.data(), &n, 8);
  std::memcpy(out.data() + 8, text.data(), text.size());
  std::uint8_t* payload = out.data() + 8 + text.size();
  for (const auto& [name, tensor] : checkpoint.tensors) {
    const auto begin = header[name]["data_offsets"][0].get<std::uint64_t>();
    std::memcpy(payload + begin, tensor.ptr(), tensor.numel() * sizeof(float));
  }
  write_bytes(path, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() < 8) throw CheckpointMismatch("<header>", "file too short");
  std::uint64_t n = 0;
  std::memcpy(&n, bytes.data(), 8);
  if (n > bytes.size() - 8) throw CheckpointMismatch("<header>", "header length out of range");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(n));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointMismatch("<header>", std::string("invalid JSON: ") + e.what());
  }
  if (!header.is_object()) throw CheckpointMismatch("<header>", "header is not an object");

  const std::uint8_t* payload = bytes.data() + 8 + n;
  const std::uint64_t payload_size = bytes.size() - 8 - n;
  Checkpoint ckpt;
  for (const auto& [name, entry] : header.items()) {
    if (name == kMetadataKey) {
      for (const auto& [k, v] : entry.items()) {
        ckpt.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      continue;
    }
    try {
      if (entry.at("dtype").get<std::string>() != "F32") {
        throw CheckpointMismatch(name, "unsupported dtype " + entry.at("dtype").dump());
      }
      const auto shape = entry.at("shape").get<nn::Shape>();
      const auto begin = entry.at("data_offsets").at(0).get<std::uint64_t>();
      const auto end = entry.at("data_offsets").at(1).get<std::uint64_t>();
      if (end < begin || end > payload_size ||
          end - begin != nn::shape_numel(shape) * sizeof(float)) {
        throw CheckpointMismatch(name, "data offsets inconsistent with shape");
      }
      std::vector<float> data(nn::shape_numel(shape));
      std::memcpy(data.data(), payload + begin, end - begin);
      ckpt.tensors.emplace(name, nn::Tensor(shape, std::move(data)));
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointMismatch(name, std::string("bad header entry: ") + e.what());
    }
  }
  return ckpt;
}

}  // namespace aigid
