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

#ifndef AIGID_RASTER_HPP_
#define AIGID_RASTER_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace aigid {

// Three-channel float image, interleaved (height, width, channel) layout.
class Raster {
 public:
  static constexpr int kChannels = 3;

  Raster() = default;
  Raster(int height, int width, float fill = 0.0f)
      : height_(height),
        width_(width),
        data_(static_cast<std::size_t>(height) * width * kChannels, fill) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return kChannels; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int y, int x, int c) { return data_[index(y, x, c)]; }
  float at(int y, int x, int c) const { return data_[index(y, x, c)]; }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  bool same_shape(const Raster& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Samples `src` at fractional position (x, y) with bilinear weights.
// Taps outside the frame read as `fill`.
inline float sample_bilinear(const Raster& src, double x, double y, int c, float fill) {
  const int x0 = static_cast<int>(x >= 0 ? x : x - 1.0);
  const int y0 = static_cast<int>(y >= 0 ? y : y - 1.0);
  const double fx = x - x0;
  const double fy = y - y0;
  auto tap = [&](int yy, int xx) -> double {
    if (xx < 0 || yy < 0 || xx >= src.width() || yy >= src.height()) return fill;
    return src.at(yy, xx, c);
  };
  const double top = tap(y0, x0) * (1.0 - fx) + tap(y0, x0 + 1) * fx;
  const double bottom = tap(y0 + 1, x0) * (1.0 - fx) + tap(y0 + 1, x0 + 1) * fx;
  return static_cast<float>(top * (1.0 - fy) + bottom * fy);
}

// Bilinear resize of the window [x0, x0+w) x [y0, y0+h) of `src` to
// out_height x out_width, half-pixel centred, edge-clamped. A same-size
// full-frame call is an exact copy.
Raster resize_window(const Raster& src, int x0, int y0, int w, int h, int out_height,
                     int out_width);

inline Raster resize_bilinear(const Raster& src, int out_height, int out_width) {
  return resize_window(src, 0, 0, src.width(), src.height(), out_height, out_width);
}

}  // namespace aigid

#endif  // AIGID_RASTER_HPP_
