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

#ifndef AIGID_PERTURB_HPP_
#define AIGID_PERTURB_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aigid/augment.hpp"
#include "aigid/data.hpp"
#include "aigid/eval.hpp"

namespace aigid {

// Test-time distortions of the perturbed evaluation set.
enum class PerturbMode : int { kClean = 0, kHflip, kBrightness, kNoise, kJpeg };

inline constexpr std::array<PerturbMode, 5> kAllPerturbModes = {
    PerturbMode::kClean, PerturbMode::kHflip, PerturbMode::kBrightness, PerturbMode::kNoise,
    PerturbMode::kJpeg};

std::string_view perturb_mode_name(PerturbMode mode);
// Throws InvalidConfig.
PerturbMode perturb_mode_from_name(std::string_view name);

enum class PerImagePolicy : int {
  // Each image appears once, under one mode drawn from the seed.
  kOneRandom = 0,
  // Each image appears once per mode.
  kAllModes,
};

std::string_view policy_name(PerImagePolicy policy);
PerImagePolicy policy_from_name(std::string_view name);

struct PerturbationPlan {
  std::vector<PerturbMode> modes{kAllPerturbModes.begin(), kAllPerturbModes.end()};
  double brightness_factor = 0.5;
  double noise_sigma = 0.1;
  int jpeg_quality = 50;
  PerImagePolicy per_image_policy = PerImagePolicy::kAllModes;
  std::uint64_t seed = 0;

  // Severities must lie inside the training ranges of `bounds`.
  // Throws InvalidConfig.
  void validate(const AugmentationSpec& bounds = {}) const;
};

// Applies one mode using the training-time operator kernels. NOISE draws
// from a stream derived from (plan.seed, image_index).
Raster apply_perturbation(const Raster& pixels, PerturbMode mode, const PerturbationPlan& plan,
                          std::size_t image_index);

// Mode chosen for image `image_index` under kOneRandom.
PerturbMode draw_mode(const PerturbationPlan& plan, std::size_t image_index);

// Outputs keep labels and source paths and carry the mode name in `mode`.
// Image-major order: all modes of image 0, then image 1, ...
std::vector<LabeledImage> build_perturbed_set(std::span<const LabeledImage> images,
                                              const PerturbationPlan& plan);

// One report per mode present in the set, plus "ALL" over everything.
// Throws EmptyDataset.
std::map<std::string, EvalReport> per_mode_report(const Classifier& model,
                                                  std::span<const LabeledImage> perturbed,
                                                  const EvalOptions& options = {});

struct PerturbedFiles {
  Manifest manifest;
  std::map<std::string, long> counts_per_mode;
};

// Builds the set and writes it under `out_dir`: PNG for every mode except
// JPEG, which stores the JPEG stream itself. The manifest entries are
// relative to `out_dir` and carry the mode as a third column.
PerturbedFiles write_perturbed_set(std::span<const LabeledImage> images,
                                   const PerturbationPlan& plan,
                                   const std::filesystem::path& out_dir);

}  // namespace aigid

#endif  // AIGID_PERTURB_HPP_
