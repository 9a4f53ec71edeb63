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

#include "aigid/toy.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "aigid/image_io.hpp"
#include "aigid/rng.hpp"

namespace aigid {
namespace {

struct ClassStyle {
  std::array<float, 3> color;
  int texture;
};

// Three bright classes and three dark ones. Halving a bright colour lands
// close to a dark class in RGB, but with a different hue, so brightness is a
// shortcut on clean data and hue is the cue that survives a brightness change.
constexpr std::array<ClassStyle, kNumClasses> kStyles = {{
    {{0.90f, 0.50f, 0.50f}, 0},  // bright red, horizontal stripes
    {{0.45f, 0.35f, 0.15f}, 1},  // dark orange, vertical stripes
    {{0.50f, 0.90f, 0.50f}, 2},  // bright green, checkerboard
    {{0.15f, 0.45f, 0.35f}, 3},  // dark teal, radial blob
    {{0.50f, 0.50f, 0.90f}, 4},  // bright blue, diagonal stripes
    {{0.35f, 0.15f, 0.45f}, 5},  // dark violet, dot grid
}};

float texture_value(int texture, int x, int y, double phase, int side) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kPeriod = 4.0;
  switch (texture) {
    case 0: return static_cast<float>(std::sin(kTwoPi * y / kPeriod + phase));
    case 1: return static_cast<float>(std::sin(kTwoPi * x / kPeriod + phase));
    case 2: return ((x / 4 + y / 4) % 2 == 0) ? 1.0f : -1.0f;
    case 3: {
      const double c = (side - 1) / 2.0;
      const double r = std::hypot(x - c, y - c) / (side / 2.0);
      return static_cast<float>(std::cos(std::min(r, 1.0) * std::numbers::pi));
    }
    case 4: return static_cast<float>(std::sin(kTwoPi * (x + y) / (kPeriod * 1.5) + phase));
    case 5: return ((x % 4 < 2) && (y % 4 < 2)) ? 1.0f : -1.0f;
  }
  return 0.0f;
}

}  // namespace

std::vector<LabeledImage> make_toy_corpus(int per_class, int side, std::uint64_t seed) {
  std::vector<LabeledImage> out;
  out.reserve(static_cast<std::size_t>(per_class) * kNumClasses);
  for (int cls = 0; cls < kNumClasses; ++cls) {
    const ClassStyle& style = kStyles[cls];
    for (int i = 0; i < per_class; ++i) {
      RngStream rng(derive_seed(seed, {static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(i)}));
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double gain = rng.uniform(0.9, 1.1);
      const double amplitude = rng.uniform(0.2, 0.3);
      Raster r(side, side);
      for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
          const float t = texture_value(style.texture, x, y, phase, side);
          for (int c = 0; c < 3; ++c) {
            const double v = style.color[c] * gain * (1.0 + amplitude * t) + rng.normal(0.0, 0.02);
            r.at(y, x, c) = to_u8(static_cast<float>(v)) / 255.0f;
          }
        }
      }
      char name[48];
      std::snprintf(name, sizeof name, "%s/%04d.png", kClassNames[cls].data(), i);
      out.push_back({std::move(r), class_from_id(cls), name, Split::kTrain, {}});
    }
  }
  return out;
}

std::filesystem::path write_toy_corpus(const std::filesystem::path& dir, int per_class, int side,
                                       std::uint64_t seed) {
  const auto images = make_toy_corpus(per_class, side, seed);
  Manifest manifest;
  manifest.root = dir;
  for (const auto& img : images) {
    write_bytes(dir / img.source_path, encode_png(img.pixels));
    manifest.entries.push_back({img.source_path, img.label, {}});
  }
  const auto path = dir / "manifest.tsv";
  save_manifest(path, manifest, {}, {"synthetic six-class corpus, seed " + std::to_string(seed)});
  return path;
}

}  // namespace aigid
