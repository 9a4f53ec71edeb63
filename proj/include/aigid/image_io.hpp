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

#ifndef AIGID_IMAGE_IO_HPP_
#define AIGID_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aigid/raster.hpp"

namespace aigid {

// Image codecs backed by OpenCV. Rasters are RGB in [0,1]; files carry 8 bits
// per channel. Grayscale sources are replicated to three channels and alpha
// is dropped.

// Throws MissingFile or DecodeError.
Raster read_image(const std::filesystem::path& path);
// `label` only names the source in error messages.
Raster decode_image(std::span<const std::uint8_t> bytes, const std::string& label);

std::vector<std::uint8_t> encode_png(const Raster& raster);
// Baseline JPEG at `quality` in [1, 100].
std::vector<std::uint8_t> encode_jpeg(const Raster& raster, int quality);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

// Round-to-nearest 8-bit quantisation, the same mapping the encoders apply.
inline std::uint8_t to_u8(float v) {
  const float s = v * 255.0f + 0.5f;
  return s <= 0.0f ? 0 : s >= 255.0f ? 255 : static_cast<std::uint8_t>(s);
}

}  // namespace aigid

#endif  // AIGID_IMAGE_IO_HPP_
