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

#include "aigid/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aigid/error.hpp"
#include "aigid/image_io.hpp"
#include "aigid/rng.hpp"

namespace aigid {
namespace {

constexpr std::string_view kRootDirective = "# root:";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

ClassLabel class_from_id(int id) {
  if (id < 0 || id >= kNumClasses) throw UnknownClass("id " + std::to_string(id));
  return static_cast<ClassLabel>(id);
}

std::string_view class_name(ClassLabel label) { return kClassNames[class_id(label)]; }

ClassLabel class_from_name(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == name) return static_cast<ClassLabel>(i);
  }
  throw UnknownClass(std::string(name));
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& root,
                        const std::string& source_name) {
  Manifest manifest;
  manifest.root = root;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kRootDirective)) {
        const std::filesystem::path dir{std::string(trim(line.substr(kRootDirective.size())))};
        manifest.root = dir.is_absolute() ? dir : root / dir;
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw MalformedRecord(source_name, line_no, "expected 2 or 3 tab-separated fields");
    }
    if (fields[0].empty()) throw MalformedRecord(source_name, line_no, "empty path");
    ManifestEntry entry;
    entry.relative_path = std::string(fields[0]);
    entry.label = class_from_name(trim(fields[1]));
    if (fields.size() == 3) {
      entry.mode = std::string(trim(fields[2]));
      if (entry.mode.empty()) throw MalformedRecord(source_name, line_no, "empty mode");
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw MissingFile(path.string());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path(), path.string());
}

std::string format_manifest(const Manifest& manifest, const std::string& root_directive,
                            const std::vector<std::string>& header_comments) {
  std::ostringstream out;
  for (const auto& comment : header_comments) out << "# " << comment << '\n';
  if (!root_directive.empty()) out << kRootDirective << ' ' << root_directive << '\n';
  for (const auto& e : manifest.entries) {
    out << e.relative_path << '\t' << class_name(e.label);
    if (!e.mode.empty()) out << '\t' << e.mode;
    out << '\n';
  }
  return out.str();
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest,
                   const std::string& root_directive,
                   const std::vector<std::string>& header_comments) {
  const std::string text = format_manifest(manifest, root_directive, header_comments);
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

Raster decode_and_resize(const std::filesystem::path& path, int side) {
  const Raster full = read_image(path);
  if (full.height() == side && full.width() == side) return full;
  Raster out = resize_bilinear(full, side, side);
  for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

Raster normalise(const Raster& raster, const Normalisation& norm) {
  Raster out = raster;
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t c = i % Raster::kChannels;
    values[i] = (values[i] - norm.mean[c]) / norm.stddev[c];
  }
  return out;
}

SplitEntries split_entries(const Manifest& manifest, const SplitFractions& fractions,
                           std::uint64_t seed) {
  const std::array<double, 3> f = {fractions.train, fractions.val, fractions.test};
  for (double v : f) {
    if (!(v > 0.0)) throw BadFractions("split fractions must be positive");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) {
    throw BadFractions("split fractions must sum to 1");
  }

  std::vector<Split> assignment(manifest.entries.size(), Split::kTrain);
  for (int cls = 0; cls < kNumClasses; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      if (class_id(manifest.entries[i].label) == cls) members.push_back(i);
    }
    const auto n = static_cast<long>(members.size());
    if (n == 0) continue;

    RngStream rng(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
    for (long i = n - 1; i > 0; --i) {
      std::swap(members[i], members[rng.uniform_int(0, i)]);
    }

    std::array<long, 3> counts{};
    std::array<double, 3> remainders{};
    for (int s = 0; s < 3; ++s) {
      const double exact = static_cast<double>(n) * f[s];
      counts[s] = static_cast<long>(std::floor(exact + 1e-9));
      remainders[s] = exact - counts[s];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return remainders[a] > remainders[b] + 1e-12; });
    long left = n - (counts[0] + counts[1] + counts[2]);
    for (int k = 0; left > 0; k = (k + 1) % 3, --left) ++counts[order[k]];

    long cursor = 0;
    for (int s = 0; s < 3; ++s) {
      for (long j = 0; j < counts[s]; ++j) assignment[members[cursor++]] = static_cast<Split>(s);
    }
  }

  SplitEntries out;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    switch (assignment[i]) {
      case Split::kTrain: out.train.push_back(manifest.entries[i]); break;
      case Split::kVal: out.val.push_back(manifest.entries[i]); break;
      case Split::kTest: out.test.push_back(manifest.entries[i]); break;
    }
  }
  return out;
}

std::vector<LabeledImage> load_images(const Manifest& manifest,
                                      const std::vector<ManifestEntry>& entries, Split split,
                                      int side) {
  std::vector<LabeledImage> images;
  images.reserve(entries.size());
  for (const auto& entry : entries) {
    const auto path = manifest.resolve(entry);
    images.push_back({decode_and_resize(path, side), entry.label, path.string(), split,
                      entry.mode});
  }
  return images;
}

DatasetSplits split_dataset(const Manifest& manifest, const SplitFractions& fractions,
                            std::uint64_t seed, int side) {
  const SplitEntries entries = split_entries(manifest, fractions, seed);
  return {load_images(manifest, entries.train, Split::kTrain, side),
          load_images(manifest, entries.val, Split::kVal, side),
          load_images(manifest, entries.test, Split::kTest, side)};
}

}  // namespace aigid
