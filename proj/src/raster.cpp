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

#include "aigid/raster.hpp"

#include <algorithm>
#include <cmath>

namespace aigid {
namespace {

struct Tap {
  int lo;
  int hi;
  float weight_hi;
};

// Source taps for each output coordinate along one axis.
std::vector<Tap> axis_taps(int offset, int extent, int out_extent) {
  std::vector<Tap> taps(out_extent);
  const double scale = static_cast<double>(extent) / out_extent;
  for (int i = 0; i < out_extent; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(extent - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, extent - 1);
    taps[i] = {offset + lo, offset + hi, static_cast<float>(s - lo)};
  }
  return taps;
}

}  // namespace

Raster resize_window(const Raster& src, int x0, int y0, int w, int h, int out_height,
                     int out_width) {
  Raster out(out_height, out_width);
  const auto xs = axis_taps(x0, w, out_width);
  const auto ys = axis_taps(y0, h, out_height);
  for (int y = 0; y < out_height; ++y) {
    const Tap& ty = ys[y];
    for (int x = 0; x < out_width; ++x) {
      const Tap& tx = xs[x];
      for (int c = 0; c < Raster::kChannels; ++c) {
        const float top = src.at(ty.lo, tx.lo, c) * (1.0f - tx.weight_hi) +
                          src.at(ty.lo, tx.hi, c) * tx.weight_hi;
        const float bottom = src.at(ty.hi, tx.lo, c) * (1.0f - tx.weight_hi) +
                             src.at(ty.hi, tx.hi, c) * tx.weight_hi;
        out.at(y, x, c) = top * (1.0f - ty.weight_hi) + bottom * ty.weight_hi;
      }
    }
  }
  return out;
}

}  // namespace aigid
