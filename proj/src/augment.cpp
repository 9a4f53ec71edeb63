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

#include "aigid/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aigid/error.hpp"
#include "aigid/image_io.hpp"

namespace aigid {
namespace {

constexpr std::array<std::string_view, 7> kOpNames = {
    "hflip", "vflip", "color_jitter", "rotate", "random_crop", "gaussian_noise", "jpeg_compress"};

void clamp_unit(Raster& r) {
  for (float& v : r.values()) v = std::clamp(v, 0.0f, 1.0f);
}

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.lo <= iv.hi)) throw InvalidConfig(std::string(name) + ": lo > hi");
}

}  // namespace

std::string_view augment_op_name(AugmentOp op) { return kOpNames[static_cast<int>(op)]; }

AugmentOp augment_op_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpNames.size(); ++i) {
    if (kOpNames[i] == name) return static_cast<AugmentOp>(i);
  }
  throw InvalidConfig("unknown augmentation operator: " + std::string(name));
}

void AugmentationSpec::validate() const {
  check_interval(brightness_range, "brightness_range");
  check_interval(jpeg_quality_range, "jpeg_quality_range");
  check_interval(rotation_range_deg, "rotation_range_deg");
  check_interval(crop_scale_range, "crop_scale_range");
  if (jpeg_quality_range.lo < 1 || jpeg_quality_range.hi > 100) {
    throw InvalidConfig("jpeg_quality_range must lie in [1,100]");
  }
  if (!(brightness_range.lo >= 0.0)) throw InvalidConfig("brightness_range must be >= 0");
  if (!(noise_sigma_max >= 0.0)) throw InvalidConfig("noise_sigma_max must be >= 0");
  if (!(crop_scale_range.lo > 0.0 && crop_scale_range.hi <= 1.0)) {
    throw InvalidConfig("crop_scale_range must lie in (0,1]");
  }
  if (!(apply_prob >= 0.0 && apply_prob <= 1.0)) throw InvalidConfig("apply_prob outside [0,1]");
  for (const auto& [op, p] : apply_prob_overrides) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidConfig("apply_prob override for " + std::string(augment_op_name(op)) +
                          " outside [0,1]");
    }
  }
}

Raster color_jitter(const Raster& raster, double factor) {
  Raster out = raster;
  const auto f = static_cast<float>(factor);
  for (float& v : out.values()) v = std::clamp(v * f, 0.0f, 1.0f);
  return out;
}

Raster hflip(const Raster& raster) {
  Raster out(raster.height(), raster.width());
  const int w = raster.width();
  for (int y = 0; y < raster.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < Raster::kChannels; ++c) out.at(y, x, c) = raster.at(y, w - 1 - x, c);
    }
  }
  return out;
}

Raster vflip(const Raster& raster) {
  Raster out(raster.height(), raster.width());
  const int h = raster.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < raster.width(); ++x) {
      for (int c = 0; c < Raster::kChannels; ++c) out.at(y, x, c) = raster.at(h - 1 - y, x, c);
    }
  }
  return out;
}

Raster jpeg_compress(const Raster& raster, int quality) {
  const auto bytes = encode_jpeg(raster, quality);
  return decode_image(bytes, "<jpeg round trip>");
}

Raster rotate(const Raster& raster, double angle_deg) {
  if (angle_deg == 0.0) return raster;
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cx = (raster.width() - 1) / 2.0;
  const double cy = (raster.height() - 1) / 2.0;
  Raster out(raster.height(), raster.width());
  for (int y = 0; y < raster.height(); ++y) {
    for (int x = 0; x < raster.width(); ++x) {
      // Inverse map: y grows downward, so a counter-clockwise turn on screen
      // pulls from (dx cos - dy sin, dx sin + dy cos).
      const double dx = x - cx;
      const double dy = y - cy;
      const double sx = cx + dx * cos_t - dy * sin_t;
      const double sy = cy + dx * sin_t + dy * cos_t;
      for (int c = 0; c < Raster::kChannels; ++c) {
        out.at(y, x, c) = sample_bilinear(raster, sx, sy, c, 0.0f);
      }
    }
  }
  clamp_unit(out);
  return out;
}

Raster gaussian_noise(const Raster& raster, double sigma, RngStream& rng) {
  if (sigma == 0.0) return raster;
  Raster out = raster;
  for (float& v : out.values()) {
    v = std::clamp(static_cast<float>(v + rng.normal(0.0, sigma)), 0.0f, 1.0f);
  }
  return out;
}

Raster random_crop(const Raster& raster, double scale, RngStream& rng) {
  const double aspect = std::exp(rng.uniform(std::log(3.0 / 4.0), std::log(4.0 / 3.0)));
  return random_crop(raster, scale, aspect, rng);
}

Raster random_crop(const Raster& raster, double scale, double aspect, RngStream& rng) {
  const int height = raster.height();
  const int width = raster.width();
  const double area = scale * height * width;
  const int w = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))), 1, width);
  const int h = std::clamp(static_cast<int>(std::lround(std::sqrt(area / aspect))), 1, height);
  const auto x0 = static_cast<int>(rng.uniform_int(0, width - w));
  const auto y0 = static_cast<int>(rng.uniform_int(0, height - h));
  Raster out = resize_window(raster, x0, y0, w, h, height, width);
  clamp_unit(out);
  return out;
}

Raster compose(const Raster& raster, const AugmentationSpec& spec, RngStream& rng,
               std::vector<AugmentDraw>* trace) {
  Raster out = raster;
  for (AugmentOp op : kComposeOrder) {
    if (!spec.enabled.contains(op)) continue;
    AugmentDraw draw{op, rng.bernoulli(spec.probability(op)), std::nullopt};
    if (draw.applied) {
      switch (op) {
        case AugmentOp::kHflip:
          out = hflip(out);
          break;
        case AugmentOp::kVflip:
          out = vflip(out);
          break;
        case AugmentOp::kColorJitter: {
          const double factor = rng.uniform(spec.brightness_range.lo, spec.brightness_range.hi);
          draw.parameter = factor;
          out = color_jitter(out, factor);
          break;
        }
        case AugmentOp::kRotate: {
          const double angle =
              rng.uniform(spec.rotation_range_deg.lo, spec.rotation_range_deg.hi);
          draw.parameter = angle;
          out = rotate(out, angle);
          break;
        }
        case AugmentOp::kRandomCrop: {
          const double scale = rng.uniform(spec.crop_scale_range.lo, spec.crop_scale_range.hi);
          draw.parameter = scale;
          out = random_crop(out, scale, rng);
          break;
        }
        case AugmentOp::kGaussianNoise: {
          const double sigma = rng.uniform(0.0, spec.noise_sigma_max);
          draw.parameter = sigma;
          out = gaussian_noise(out, sigma, rng);
          break;
        }
        case AugmentOp::kJpegCompress: {
          const auto quality = rng.uniform_int(std::lround(spec.jpeg_quality_range.lo),
                                               std::lround(spec.jpeg_quality_range.hi));
          draw.parameter = static_cast<double>(quality);
          out = jpeg_compress(out, static_cast<int>(quality));
          break;
        }
      }
    }
    if (trace != nullptr) trace->push_back(draw);
  }
  return out;
}

}  // namespace aigid
