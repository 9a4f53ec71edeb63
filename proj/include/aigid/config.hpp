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

#ifndef AIGID_CONFIG_HPP_
#define AIGID_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "aigid/augment.hpp"
#include "aigid/data.hpp"
#include "aigid/eval.hpp"
#include "aigid/model.hpp"
#include "aigid/perturb.hpp"
#include "aigid/train.hpp"

namespace aigid {

// Whole-run configuration, stored as one JSON document. Missing keys keep
// their defaults; unknown keys are rejected so typos surface early.
struct RunConfig {
  // Root of all randomness; the per-stage seeds below are derived from it.
  std::uint64_t seed = 0;
  struct Data {
    std::filesystem::path manifest;
    SplitFractions fractions;
  } data;
  ModelConfig model;
  TrainConfig train;
  PerturbationPlan perturb;
  Averaging averaging = Averaging::kMacro;
  std::filesystem::path output_dir = "runs/default";

  std::uint64_t split_seed() const { return derive_seed(seed, {1}); }
  std::uint64_t init_seed() const { return derive_seed(seed, {2}); }
  std::uint64_t train_seed() const { return derive_seed(seed, {3}); }
  std::uint64_t perturb_seed() const { return derive_seed(seed, {4}); }

  // Copies the derived seeds into train/perturb.
  void apply_seeds();
  // Throws InvalidConfig (or BadFractions).
  void validate() const;
};

nlohmann::ordered_json augmentation_to_json(const AugmentationSpec& spec);
AugmentationSpec augmentation_from_json(const nlohmann::json& j, AugmentationSpec base = {});

nlohmann::ordered_json model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig base = {});

nlohmann::ordered_json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

nlohmann::ordered_json perturbation_plan_to_json(const PerturbationPlan& plan);
PerturbationPlan perturbation_plan_from_json(const nlohmann::json& j, PerturbationPlan base = {});

nlohmann::ordered_json run_config_to_json(const RunConfig& config);
// Relative paths resolve against `base_dir`.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
// Throws MissingFile, InvalidConfig.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace aigid

#endif  // AIGID_CONFIG_HPP_
