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

#ifndef AIGID_DATA_HPP_
#define AIGID_DATA_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aigid/raster.hpp"

namespace aigid {

inline constexpr int kNumClasses = 6;

// Dataset classes. Ids are fixed: REAL is 0, generators follow in this order.
enum class ClassLabel : int {
  kReal = 0,
  kSd21 = 1,
  kSd3 = 2,
  kSdxl = 3,
  kDalle3 = 4,
  kMidjourney6 = 5,
};

enum class BinaryLabel : int { kNotAi = 0, kAi = 1 };

enum class Split : int { kTrain = 0, kVal = 1, kTest = 2 };

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "REAL", "SD21", "SD3", "SDXL", "DALLE3", "MIDJOURNEY6"};

constexpr int class_id(ClassLabel label) { return static_cast<int>(label); }
ClassLabel class_from_id(int id);
std::string_view class_name(ClassLabel label);
// Throws UnknownClass.
ClassLabel class_from_name(std::string_view name);

constexpr BinaryLabel binary_label(ClassLabel label) {
  return label == ClassLabel::kReal ? BinaryLabel::kNotAi : BinaryLabel::kAi;
}

std::string_view split_name(Split split);

struct ManifestEntry {
  std::string relative_path;
  ClassLabel label = ClassLabel::kReal;
  // Optional third column, written by the perturbed-set builder.
  std::string mode;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Line-oriented corpus listing: `relative/path<TAB>CLASS[<TAB>MODE]`.
// Lines starting with '#' are comments. The comment `# root: DIR` sets the
// directory entries resolve against (default: the manifest's own directory).
struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& entry) const {
    return root / entry.relative_path;
  }
};

// Throws MissingFile, MalformedRecord, UnknownClass.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view text, const std::filesystem::path& root,
                        const std::string& source_name = "<manifest>");
// `root_directive` is written as a `# root:` comment when non-empty.
std::string format_manifest(const Manifest& manifest, const std::string& root_directive = {},
                            const std::vector<std::string>& header_comments = {});
void save_manifest(const std::filesystem::path& path, const Manifest& manifest,
                   const std::string& root_directive = {},
                   const std::vector<std::string>& header_comments = {});

struct LabeledImage {
  Raster pixels;
  ClassLabel label = ClassLabel::kReal;
  std::string source_path;
  Split split = Split::kTrain;
  std::string mode;
};

struct Normalisation {
  std::array<float, 3> mean = {0.5f, 0.5f, 0.5f};
  std::array<float, 3> stddev = {0.5f, 0.5f, 0.5f};
};

inline constexpr int kDefaultImageSide = 224;

// Decodes and bilinearly resizes to side x side, values in [0,1].
Raster decode_and_resize(const std::filesystem::path& path, int side);

// Per-channel (x - mean_c) / std_c.
Raster normalise(const Raster& raster, const Normalisation& norm = {});

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitEntries {
  std::vector<ManifestEntry> train;
  std::vector<ManifestEntry> val;
  std::vector<ManifestEntry> test;
};

// Stratified per class: each class gets floor(n * f) per split and the
// remainder goes to the splits with the largest fractional parts (ties go
// train, val, test). Entries keep manifest order within each split.
// Throws BadFractions.
SplitEntries split_entries(const Manifest& manifest, const SplitFractions& fractions,
                           std::uint64_t seed);

struct DatasetSplits {
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> val;
  std::vector<LabeledImage> test;
};

std::vector<LabeledImage> load_images(const Manifest& manifest,
                                      const std::vector<ManifestEntry>& entries, Split split,
                                      int side);

DatasetSplits split_dataset(const Manifest& manifest, const SplitFractions& fractions,
                            std::uint64_t seed, int side = kDefaultImageSide);

}  // namespace aigid

#endif  // AIGID_DATA_HPP_
