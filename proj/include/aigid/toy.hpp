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

#ifndef AIGID_TOY_HPP_
#define AIGID_TOY_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "aigid/data.hpp"

namespace aigid {

// Synthetic six-class corpus for desk-scale runs. Each class has its own
// colour and texture; per-image phase, tint and sensor noise vary with the
// seed. Pixels are quantised to 8 bits so in-memory and PNG copies agree.
std::vector<LabeledImage> make_toy_corpus(int per_class, int side, std::uint64_t seed);

// Writes PNGs plus `manifest.tsv` under `dir`; returns the manifest path.
std::filesystem::path write_toy_corpus(const std::filesystem::path& dir, int per_class, int side,
                                       std::uint64_t seed);

}  // namespace aigid

#endif  // AIGID_TOY_HPP_
