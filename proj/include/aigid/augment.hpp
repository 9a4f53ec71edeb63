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

#ifndef AIGID_AUGMENT_HPP_
#define AIGID_AUGMENT_HPP_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "aigid/raster.hpp"
#include "aigid/rng.hpp"

namespace aigid {

// Training-time perturbations. Every operator maps a [0,1] raster to a
// [0,1] raster of the same shape.
enum class AugmentOp : int {
  kHflip = 0,
  kVflip,
  kColorJitter,
  kRotate,
  kRandomCrop,
  kGaussianNoise,
  kJpegCompress,
};

// Application order used by compose(): geometry first, then noise and
// compression so noise statistics are never resampled.
inline constexpr std::array<AugmentOp, 7> kComposeOrder = {
    AugmentOp::kHflip,      AugmentOp::kVflip,         AugmentOp::kColorJitter,
    AugmentOp::kRotate,     AugmentOp::kRandomCrop,    AugmentOp::kGaussianNoise,
    AugmentOp::kJpegCompress};

std::string_view augment_op_name(AugmentOp op);
// Throws InvalidConfig on an unknown name.
AugmentOp augment_op_from_name(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct AugmentationSpec {
  Interval brightness_range{0.45, 0.55};
  Interval jpeg_quality_range{30, 70};
  Interval rotation_range_deg{0.0, 90.0};
  double noise_sigma_max = 0.3;
  Interval crop_scale_range{0.8, 1.0};
  double apply_prob = 0.35;
  std::map<AugmentOp, double> apply_prob_overrides;
  std::set<AugmentOp> enabled{kComposeOrder.begin(), kComposeOrder.end()};

  double probability(AugmentOp op) const {
    const auto it = apply_prob_overrides.find(op);
    return it == apply_prob_overrides.end() ? apply_prob : it->second;
  }
  // Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const AugmentationSpec&, const AugmentationSpec&) = default;
};

Raster color_jitter(const Raster& raster, double factor);
Raster hflip(const Raster& raster);
Raster vflip(const Raster& raster);
// Baseline JPEG encode/decode round trip.
Raster jpeg_compress(const Raster& raster, int quality);
// Counter-clockwise rotation about the frame centre, bilinear, zero fill.
Raster rotate(const Raster& raster, double angle_deg);
Raster gaussian_noise(const Raster& raster, double sigma, RngStream& rng);
// Random window of area scale*H*W with log-uniform aspect in [3/4, 4/3],
// resized back to H x W.
Raster random_crop(const Raster& raster, double scale, RngStream& rng);
Raster random_crop(const Raster& raster, double scale, double aspect, RngStream& rng);

// What compose() drew for one operator.
struct AugmentDraw {
  AugmentOp op;
  bool applied = false;
  std::optional<double> parameter;
};

// Runs every enabled operator in kComposeOrder: draws apply/skip with the
// operator's probability, then its parameter uniformly from its range.
// Draws are appended to `trace` when given.
Raster compose(const Raster& raster, const AugmentationSpec& spec, RngStream& rng,
               std::vector<AugmentDraw>* trace = nullptr);

}  // namespace aigid

#endif  // AIGID_AUGMENT_HPP_
