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

#include "aigid/perturb.hpp"

#include <cstdio>

#include "aigid/error.hpp"
#include "aigid/image_io.hpp"

namespace aigid {
namespace {

constexpr std::array<std::string_view, 5> kModeNames = {"CLEAN", "HFLIP", "BRIGHTNESS", "NOISE",
                                                        "JPEG"};
constexpr std::array<std::string_view, 2> kPolicyNames = {"ONE_RANDOM", "ALL_MODES"};

constexpr std::uint64_t kModeDrawTag = 0x6d6f6465;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;

}  // namespace

std::string_view perturb_mode_name(PerturbMode mode) { return kModeNames[static_cast<int>(mode)]; }

PerturbMode perturb_mode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<PerturbMode>(i);
  }
  throw InvalidConfig("unknown perturbation mode: " + std::string(name));
}

std::string_view policy_name(PerImagePolicy policy) {
  return kPolicyNames[static_cast<int>(policy)];
}

PerImagePolicy policy_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == name) return static_cast<PerImagePolicy>(i);
  }
  throw InvalidConfig("unknown per-image policy: " + std::string(name));
}

void PerturbationPlan::validate(const AugmentationSpec& bounds) const {
  if (modes.empty()) throw InvalidConfig("perturbation plan has no modes");
  if (!bounds.brightness_range.contains(brightness_factor)) {
    throw InvalidConfig("brightness_factor outside the training brightness range");
  }
  if (!(noise_sigma >= 0.0 && noise_sigma <= bounds.noise_sigma_max)) {
    throw InvalidConfig("noise_sigma outside [0, noise_sigma_max]");
  }
  if (!bounds.jpeg_quality_range.contains(jpeg_quality)) {
    throw InvalidConfig("jpeg_quality outside the training quality range");
  }
}

Raster apply_perturbation(const Raster& pixels, PerturbMode mode, const PerturbationPlan& plan,
                          std::size_t image_index) {
  switch (mode) {
    case PerturbMode::kClean:
      return pixels;
    case PerturbMode::kHflip:
      return hflip(pixels);
    case PerturbMode::kBrightness:
      return color_jitter(pixels, plan.brightness_factor);
    case PerturbMode::kNoise: {
      RngStream rng(derive_seed(plan.seed, {kNoiseTag, static_cast<std::uint64_t>(image_index)}));
      return gaussian_noise(pixels, plan.noise_sigma, rng);
    }
    case PerturbMode::kJpeg:
      return jpeg_compress(pixels, plan.jpeg_quality);
  }
  return pixels;
}

PerturbMode draw_mode(const PerturbationPlan& plan, std::size_t image_index) {
  RngStream rng(derive_seed(plan.seed, {kModeDrawTag, static_cast<std::uint64_t>(image_index)}));
  return plan.modes[rng.uniform_int(0, static_cast<long>(plan.modes.size()) - 1)];
}

std::vector<LabeledImage> build_perturbed_set(std::span<const LabeledImage> images,
                                              const PerturbationPlan& plan) {
  plan.validate();
  std::vector<LabeledImage> out;
  const bool all = plan.per_image_policy == PerImagePolicy::kAllModes;
  out.reserve(all ? images.size() * plan.modes.size() : images.size());
  auto emit = [&](const LabeledImage& src, PerturbMode mode, std::size_t index) {
    LabeledImage item = src;
    item.pixels = apply_perturbation(src.pixels, mode, plan, index);
    item.mode = std::string(perturb_mode_name(mode));
    out.push_back(std::move(item));
  };
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (all) {
      for (PerturbMode mode : plan.modes) emit(images[i], mode, i);
    } else {
      emit(images[i], draw_mode(plan, i), i);
    }
  }
  return out;
}

std::map<std::string, EvalReport> per_mode_report(const Classifier& model,
                                                  std::span<const LabeledImage> perturbed,
                                                  const EvalOptions& options) {
  if (perturbed.empty()) throw EmptyDataset("per_mode_report: perturbed set is empty");
  std::vector<Raster> rasters;
  std::vector<ClassLabel> golds;
  for (const auto& item : perturbed) {
    rasters.push_back(item.pixels);
    golds.push_back(item.label);
  }
  const auto preds = predict(model, rasters, options);

  std::map<std::string, std::pair<std::vector<ClassLabel>, std::vector<ClassLabel>>> groups;
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    const std::string key = perturbed[i].mode.empty() ? "CLEAN" : perturbed[i].mode;
    groups[key].first.push_back(preds[i]);
    groups[key].second.push_back(golds[i]);
  }
  std::map<std::string, EvalReport> reports;
  for (const auto& [mode, pg] : groups) {
    reports[mode] = report_from_predictions(pg.first, pg.second, options.averaging);
  }
  reports["ALL"] = report_from_predictions(preds, golds, options.averaging);
  return reports;
}

PerturbedFiles write_perturbed_set(std::span<const LabeledImage> images,
                                   const PerturbationPlan& plan,
                                   const std::filesystem::path& out_dir) {
  plan.validate();
  PerturbedFiles files;
  files.manifest.root = out_dir;
  const bool all = plan.per_image_policy == PerImagePolicy::kAllModes;
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<PerturbMode> modes;
    if (all) {
      modes = plan.modes;
    } else {
      modes.push_back(draw_mode(plan, i));
    }
    for (PerturbMode mode : modes) {
      const std::string mode_name(perturb_mode_name(mode));
      char stem[32];
      std::snprintf(stem, sizeof stem, "%06zu", i);
      std::string rel = mode_name + "/" + stem;
      std::vector<std::uint8_t> bytes;
      if (mode == PerturbMode::kJpeg) {
        // Decodes to exactly jpeg_compress(pixels, quality).
        bytes = encode_jpeg(images[i].pixels, plan.jpeg_quality);
        rel += ".jpg";
      } else {
        bytes = encode_png(apply_perturbation(images[i].pixels, mode, plan, i));
        rel += ".png";
      }
      write_bytes(out_dir / rel, bytes);
      files.manifest.entries.push_back({rel, images[i].label, mode_name});
      ++files.counts_per_mode[mode_name];
    }
  }
  return files;
}

}  // namespace aigid
