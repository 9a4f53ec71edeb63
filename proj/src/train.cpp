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

#include "aigid/train.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "aigid/config.hpp"
#include "aigid/error.hpp"

namespace aigid {
namespace {

constexpr std::uint64_t kOrderTag = 0x6f72646572;    // batch order stream
constexpr std::uint64_t kAugmentTag = 0x61756720;    // per-sample augmentation
constexpr std::uint64_t kValidationTag = 0x76616c;   // augmented validation copy

constexpr const char* kHistoryFile = "history.jsonl";
constexpr const char* kBestFile = "best.safetensors";

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidConfig("learning_rate must be > 0");
  if (!(weight_decay >= 0.0)) throw InvalidConfig("weight_decay must be >= 0");
  if (batch_size < 1) throw InvalidConfig("batch_size must be >= 1");
  if (epochs < 1) throw InvalidConfig("epochs must be >= 1");
  if (eval_every < 0) throw InvalidConfig("eval_every must be >= 0");
  augmentation.validate();
}

double train_step(const Classifier& model, const nn::Tensor& images, std::span<const int> labels,
                  AdamW& optimizer, long step, long last_good_step) {
  optimizer.zero_grad();
  const nn::Var loss = nn::cross_entropy(model.forward(nn::Var(images)), labels);
  const double value = loss.value()[0];
  if (!std::isfinite(value)) throw NonFiniteLoss(step, last_good_step, value);
  nn::backward(loss);
  optimizer.step();
  return value;
}

Raster preprocess_train_sample(const Raster& pixels, const TrainConfig& config, int epoch,
                               std::size_t sample_index) {
  if (!config.augment_enabled) return normalise(pixels, config.normalisation);
  RngStream rng(derive_seed(config.seed, {kAugmentTag, static_cast<std::uint64_t>(epoch),
                                          static_cast<std::uint64_t>(sample_index)}));
  return normalise(compose(pixels, config.augmentation, rng), config.normalisation);
}

std::vector<LabeledImage> validation_set(std::span<const LabeledImage> val,
                                         const TrainConfig& config) {
  std::vector<LabeledImage> out(val.begin(), val.end());
  if (!(config.augment_enabled && config.augment_validation)) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    RngStream rng(derive_seed(config.seed, {kValidationTag, static_cast<std::uint64_t>(i)}));
    out[i].pixels = compose(out[i].pixels, config.augmentation, rng);
  }
  return out;
}

nlohmann::ordered_json history_header_json(const TrainConfig& config) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  h["seed"] = config.seed;
  h["augment_enabled"] = config.augment_enabled;
  h["augment_validation"] = config.augment_validation;
  h["learning_rate"] = config.learning_rate;
  h["weight_decay"] = config.weight_decay;
  h["batch_size"] = config.batch_size;
  h["epochs"] = config.epochs;
  h["eval_every"] = config.eval_every;
  h["augmentation"] = augmentation_to_json(config.augmentation);
  return h;
}

nlohmann::ordered_json history_record_json(const HistoryRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "eval";
  j["step"] = r.step;
  j["epoch"] = r.epoch;
  j["train_loss"] = r.train_loss;
  j["val_f1_task_a"] = r.val_f1_task_a;
  j["val_f1_task_b"] = r.val_f1_task_b;
  return j;
}

FitResult fit(Classifier& model, std::span<const LabeledImage> train,
              std::span<const LabeledImage> val, const TrainConfig& config,
              const EvalCallback& on_eval,
              const std::optional<nlohmann::ordered_json>& history_header) {
  config.validate();
  if (train.empty()) throw EmptyDataset("fit: training set is empty");
  if (val.empty()) throw EmptyDataset("fit: validation set is empty");

  const bool persist = !config.checkpoint_dir.empty();
  std::ofstream history;
  if (persist) {
    std::filesystem::create_directories(config.checkpoint_dir);
    history.open(config.checkpoint_dir / kHistoryFile, std::ios::trunc);
    nlohmann::ordered_json header = history_header_json(config);
    if (history_header) {
      for (const auto& [k, v] : history_header->items()) header[k] = v;
    }
    history << header.dump() << '\n';
  }

  AdamW optimizer(model.parameters(), {.learning_rate = config.learning_rate,
                                       .weight_decay = config.weight_decay});
  const std::vector<LabeledImage> val_set = validation_set(val, config);
  EvalOptions eval_options;
  eval_options.normalisation = config.normalisation;

  FitResult result;
  TrainState& state = result.state;
  double loss_sum = 0.0;
  long loss_count = 0;
  long last_eval_step = -1;

  auto run_eval = [&](int epoch) {
    if (state.step == last_eval_step) return;
    last_eval_step = state.step;
    const EvalReport report = evaluate(model, val_set, eval_options);
    HistoryRecord rec{state.step, epoch, loss_count ? loss_sum / loss_count : 0.0,
                      report.f1_task_a, report.f1_task_b};
    loss_sum = 0.0;
    loss_count = 0;
    state.history.push_back(rec);
    const bool improved = rec.val_f1_task_b > state.best_val_f1;
    if (improved) {
      state.best_val_f1 = rec.val_f1_task_b;
      state.best_step = rec.step;
      result.best_weights = model.to_checkpoint();
      result.best_weights.metadata["step"] = std::to_string(rec.step);
      result.best_weights.metadata["seed"] = std::to_string(config.seed);
      result.best_weights.metadata["model_config"] = model_config_to_json(model.config()).dump();
      if (persist) {
        result.best_checkpoint = config.checkpoint_dir / kBestFile;
        save_checkpoint(result.best_checkpoint, result.best_weights);
      }
    }
    if (persist) history << history_record_json(rec).dump() << '\n' << std::flush;
    if (on_eval) on_eval(rec, improved);
  };

  const int side = model.config().image_side;
  const auto n = train.size();
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    state.epoch = epoch;
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream shuffle(derive_seed(config.seed, {kOrderTag, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle.uniform_int(0, static_cast<long>(i) - 1)]);
    }
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::vector<Raster> rasters;
      std::vector<int> labels;
      rasters.reserve(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const LabeledImage& item = train[order[k]];
        rasters.push_back(preprocess_train_sample(item.pixels, config, epoch, order[k]));
        labels.push_back(class_id(item.label));
      }
      const double loss = train_step(model, to_batch(rasters, side), labels, optimizer,
                                     state.step + 1, state.step);
      ++state.step;
      loss_sum += loss;
      ++loss_count;
      if (config.eval_every > 0 && state.step % config.eval_every == 0) run_eval(epoch);
    }
    run_eval(epoch);
  }
  return result;
}

}  // namespace aigid
