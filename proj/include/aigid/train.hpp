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

#ifndef AIGID_TRAIN_HPP_
#define AIGID_TRAIN_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aigid/augment.hpp"
#include "aigid/checkpoint.hpp"
#include "aigid/data.hpp"
#include "aigid/eval.hpp"
#include "aigid/model.hpp"
#include "aigid/optim.hpp"

namespace aigid {

struct TrainConfig {
  double learning_rate = 2e-5;
  double weight_decay = 0.01;
  int batch_size = 128;
  int epochs = 15;
  std::uint64_t seed = 0;
  AugmentationSpec augmentation;
  bool augment_enabled = true;
  // With augmentation on, validate on a fixed augmented copy of the
  // validation set (one draw per image, made once from the seed).
  bool augment_validation = true;
  // Extra validation every N steps; 0 evaluates at epoch ends only.
  long eval_every = 0;
  // Where history.jsonl and best.safetensors go; empty keeps everything in memory.
  std::filesystem::path checkpoint_dir;
  Normalisation normalisation;

  // Throws InvalidConfig.
  void validate() const;
};

struct HistoryRecord {
  long step = 0;
  int epoch = 0;
  // Mean training loss over the steps since the previous record.
  double train_loss = 0.0;
  double val_f1_task_a = 0.0;
  double val_f1_task_b = 0.0;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

struct TrainState {
  long step = 0;
  int epoch = 0;
  double best_val_f1 = -1.0;
  long best_step = -1;
  std::vector<HistoryRecord> history;
};

struct FitResult {
  // Empty when TrainConfig::checkpoint_dir is empty.
  std::filesystem::path best_checkpoint;
  Checkpoint best_weights;
  TrainState state;
};

// One optimisation step on an already preprocessed batch [b, 3, s, s]:
// mean cross-entropy over the 6-way logits, then an AdamW update.
// Throws NonFiniteLoss (the update is not applied).
double train_step(const Classifier& model, const nn::Tensor& images, std::span<const int> labels,
                  AdamW& optimizer, long step = 0, long last_good_step = -1);

// Augments (when enabled) and normalises a training sample. The augmentation
// stream is derived from (seed, epoch, sample index).
Raster preprocess_train_sample(const Raster& pixels, const TrainConfig& config, int epoch,
                               std::size_t sample_index);

// The set fit() validates on: `val` itself, or its augmented copy when
// augment_enabled and augment_validation are both set.
std::vector<LabeledImage> validation_set(std::span<const LabeledImage> val,
                                         const TrainConfig& config);

using EvalCallback = std::function<void(const HistoryRecord&, bool improved)>;

// Runs epochs x ceil(N / batch_size) steps with a seeded batch order,
// validating at eval_every and at each epoch end. The checkpoint is saved
// whenever validation Task-B F1 improves. `model` holds the final weights on
// return. Throws EmptyDataset, NonFiniteLoss.
FitResult fit(Classifier& model, std::span<const LabeledImage> train,
              std::span<const LabeledImage> val, const TrainConfig& config,
              const EvalCallback& on_eval = {},
              const std::optional<nlohmann::ordered_json>& history_header = std::nullopt);

// Header record written as the first history.jsonl line.
nlohmann::ordered_json history_header_json(const TrainConfig& config);
nlohmann::ordered_json history_record_json(const HistoryRecord& record);

}  // namespace aigid

#endif  // AIGID_TRAIN_HPP_
