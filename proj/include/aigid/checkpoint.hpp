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

#ifndef AIGID_CHECKPOINT_HPP_
#define AIGID_CHECKPOINT_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "aigid/tensor.hpp"

namespace aigid {

// Named float32 tensors plus string metadata.
//
// On-disk layout (the safetensors container):
//   bytes [0, 8)      header length N, unsigned little-endian
//   bytes [8, 8+N)    UTF-8 JSON object, space padded to a multiple of 8:
//                       "<name>": {"dtype": "F32", "shape": [...],
//                                  "data_offsets": [begin, end]}
//                       "__metadata__": {"<key>": "<string value>", ...}
//   bytes [8+N, ...)  payload; offsets are relative to its start, tensors
//                     stored contiguously in name order, little-endian
struct Checkpoint {
  std::map<std::string, nn::Tensor> tensors;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
// Throws MissingFile, or CheckpointMismatch naming the offending entry when
// the container is malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aigid

#endif  // AIGID_CHECKPOINT_HPP_
