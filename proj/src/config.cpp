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

#include "aigid/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "aigid/error.hpp"

namespace aigid {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                std::string_view section) {
  if (!j.is_object()) throw InvalidConfig(std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw InvalidConfig("unknown key '" + key + "' in " + std::string(section));
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("bad value for '") + key + "': " + e.what());
  }
}

void read_interval(const json& j, const char* key, Interval& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw InvalidConfig(std::string(key) + " must be [lo, hi]");
  out = {v[0].get<double>(), v[1].get<double>()};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

}  // namespace

void RunConfig::apply_seeds() {
  train.seed = train_seed();
  perturb.seed = perturb_seed();
}

void RunConfig::validate() const {
  model.validate();
  train.validate();
  perturb.validate(train.augmentation);
  const double sum = data.fractions.train + data.fractions.val + data.fractions.test;
  if (!(data.fractions.train > 0 && data.fractions.val > 0 && data.fractions.test > 0) ||
      std::abs(sum - 1.0) > 1e-9) {
    throw BadFractions("data.fractions must be positive and sum to 1");
  }
}

ordered_json augmentation_to_json(const AugmentationSpec& spec) {
  ordered_json j;
  j["brightness_range"] = {spec.brightness_range.lo, spec.brightness_range.hi};
  j["jpeg_quality_range"] = {std::lround(spec.jpeg_quality_range.lo),
                             std::lround(spec.jpeg_quality_range.hi)};
  j["rotation_range_deg"] = {spec.rotation_range_deg.lo, spec.rotation_range_deg.hi};
  j["noise_sigma_max"] = spec.noise_sigma_max;
  j["crop_scale_range"] = {spec.crop_scale_range.lo, spec.crop_scale_range.hi};
  j["apply_prob"] = spec.apply_prob;
  ordered_json overrides = ordered_json::object();
  for (const auto& [op, p] : spec.apply_prob_overrides) {
    overrides[std::string(augment_op_name(op))] = p;
  }
  j["apply_prob_overrides"] = overrides;
  ordered_json enabled = ordered_json::array();
  for (AugmentOp op : kComposeOrder) {
    if (spec.enabled.contains(op)) enabled.push_back(augment_op_name(op));
  }
  j["enabled"] = enabled;
  return j;
}

AugmentationSpec augmentation_from_json(const json& j, AugmentationSpec spec) {
  check_keys(j,
             {"brightness_range", "jpeg_quality_range", "rotation_range_deg", "noise_sigma_max",
              "crop_scale_range", "apply_prob", "apply_prob_overrides", "enabled"},
             "augmentation");
  read_interval(j, "brightness_range", spec.brightness_range);
  read_interval(j, "jpeg_quality_range", spec.jpeg_quality_range);
  read_interval(j, "rotation_range_deg", spec.rotation_range_deg);
  read(j, "noise_sigma_max", spec.noise_sigma_max);
  read_interval(j, "crop_scale_range", spec.crop_scale_range);
  read(j, "apply_prob", spec.apply_prob);
  if (j.contains("apply_prob_overrides")) {
    spec.apply_prob_overrides.clear();
    for (const auto& [name, p] : j.at("apply_prob_overrides").items()) {
      spec.apply_prob_overrides[augment_op_from_name(name)] = p.get<double>();
    }
  }
  if (j.contains("enabled")) {
    spec.enabled.clear();
    for (const auto& name : j.at("enabled")) {
      spec.enabled.insert(augment_op_from_name(name.get<std::string>()));
    }
  }
  spec.validate();
  return spec;
}

ordered_json model_config_to_json(const ModelConfig& c) {
  ordered_json j;
  j["variant"] = variant_name(c.variant);
  j["image_side"] = c.image_side;
  j["patch_size"] = c.patch_size;
  j["embed_dim"] = c.embed_dim;
  j["depth"] = c.depth;
  j["heads"] = c.heads;
  j["mlp_ratio"] = c.mlp_ratio;
  j["num_classes"] = c.num_classes;
  j["cnn_feature_dim"] = c.cnn_feature_dim;
  j["pretrained_checkpoint"] = c.pretrained_checkpoint;
  j["pretrained_cnn"] = c.pretrained_cnn;
  j["tiny_mode"] = c.tiny_mode;
  return j;
}

ModelConfig model_config_from_json(const json& j, ModelConfig c) {
  check_keys(j,
             {"variant", "image_side", "patch_size", "embed_dim", "depth", "heads", "mlp_ratio",
              "num_classes", "cnn_feature_dim", "pretrained_checkpoint", "pretrained_cnn",
              "tiny_mode"},
             "model");
  if (j.contains("variant")) c.variant = variant_from_name(j.at("variant").get<std::string>());
  if (j.value("tiny_mode", false)) c = ModelConfig::tiny(c.variant);
  read(j, "image_side", c.image_side);
  read(j, "patch_size", c.patch_size);
  read(j, "embed_dim", c.embed_dim);
  read(j, "depth", c.depth);
  read(j, "heads", c.heads);
  read(j, "mlp_ratio", c.mlp_ratio);
  read(j, "num_classes", c.num_classes);
  read(j, "cnn_feature_dim", c.cnn_feature_dim);
  read(j, "pretrained_checkpoint", c.pretrained_checkpoint);
  read(j, "pretrained_cnn", c.pretrained_cnn);
  read(j, "tiny_mode", c.tiny_mode);
  c.validate();
  return c;
}

ordered_json train_config_to_json(const TrainConfig& c) {
  ordered_json j;
  j["learning_rate"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["augment_enabled"] = c.augment_enabled;
  j["augment_validation"] = c.augment_validation;
  j["eval_every"] = c.eval_every;
  j["augmentation"] = augmentation_to_json(c.augmentation);
  return j;
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  check_keys(j,
             {"learning_rate", "weight_decay", "batch_size", "epochs", "augment_enabled",
              "augment_validation", "eval_every", "augmentation"},
             "train");
  read(j, "learning_rate", c.learning_rate);
  read(j, "weight_decay", c.weight_decay);
  read(j, "batch_size", c.batch_size);
  read(j, "epochs", c.epochs);
  read(j, "augment_enabled", c.augment_enabled);
  read(j, "augment_validation", c.augment_validation);
  read(j, "eval_every", c.eval_every);
  if (j.contains("augmentation")) {
    c.augmentation = augmentation_from_json(j.at("augmentation"), c.augmentation);
  }
  c.validate();
  return c;
}

ordered_json perturbation_plan_to_json(const PerturbationPlan& p) {
  ordered_json j;
  ordered_json modes = ordered_json::array();
  for (PerturbMode m : p.modes) modes.push_back(perturb_mode_name(m));
  j["modes"] = modes;
  j["brightness_factor"] = p.brightness_factor;
  j["noise_sigma"] = p.noise_sigma;
  j["jpeg_quality"] = p.jpeg_quality;
  j["per_image_policy"] = policy_name(p.per_image_policy);
  return j;
}

PerturbationPlan perturbation_plan_from_json(const json& j, PerturbationPlan p) {
  check_keys(j, {"modes", "brightness_factor", "noise_sigma", "jpeg_quality", "per_image_policy"},
             "perturb");
  if (j.contains("modes")) {
    p.modes.clear();
    for (const auto& m : j.at("modes")) p.modes.push_back(perturb_mode_from_name(m.get<std::string>()));
  }
  read(j, "brightness_factor", p.brightness_factor);
  read(j, "noise_sigma", p.noise_sigma);
  read(j, "jpeg_quality", p.jpeg_quality);
  if (j.contains("per_image_policy")) {
    p.per_image_policy = policy_from_name(j.at("per_image_policy").get<std::string>());
  }
  return p;
}

ordered_json run_config_to_json(const RunConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["data"] = {{"manifest", c.data.manifest.string()},
               {"fractions", {c.data.fractions.train, c.data.fractions.val, c.data.fractions.test}}};
  j["model"] = model_config_to_json(c.model);
  j["train"] = train_config_to_json(c.train);
  j["perturb"] = perturbation_plan_to_json(c.perturb);
  j["normalisation"] = {{"mean", c.train.normalisation.mean}, {"std", c.train.normalisation.stddev}};
  j["averaging"] = averaging_name(c.averaging);
  j["output_dir"] = c.output_dir.string();
  return j;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, {"seed", "data", "model", "train", "perturb", "normalisation", "averaging",
                 "output_dir"},
             "config");
  RunConfig c;
  read(j, "seed", c.seed);
  if (j.contains("data")) {
    const auto& d = j.at("data");
    check_keys(d, {"manifest", "fractions"}, "data");
    if (d.contains("manifest")) c.data.manifest = resolve(base_dir, d.at("manifest").get<std::string>());
    if (d.contains("fractions")) {
      const auto& f = d.at("fractions");
      if (!f.is_array() || f.size() != 3) throw InvalidConfig("data.fractions must be [train, val, test]");
      c.data.fractions = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>()};
    }
  }
  if (j.contains("model")) c.model = model_config_from_json(j.at("model"));
  if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
  if (j.contains("perturb")) c.perturb = perturbation_plan_from_json(j.at("perturb"));
  if (j.contains("normalisation")) {
    const auto& n = j.at("normalisation");
    check_keys(n, {"mean", "std"}, "normalisation");
    read(n, "mean", c.train.normalisation.mean);
    read(n, "std", c.train.normalisation.stddev);
  }
  if (j.contains("averaging")) c.averaging = averaging_from_name(j.at("averaging").get<std::string>());
  if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  c.apply_seeds();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidConfig(path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

}  // namespace aigid
