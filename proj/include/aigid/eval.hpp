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

#ifndef AIGID_EVAL_HPP_
#define AIGID_EVAL_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aigid/data.hpp"
#include "aigid/model.hpp"

namespace aigid {

// Averaging used for the 6-way score. Acceptance targets kMacro.
enum class Averaging : int { kMacro = 0, kMicro, kWeighted };

std::string_view averaging_name(Averaging averaging);
Averaging averaging_from_name(std::string_view name);

using ConfusionMatrix = std::array<std::array<long, kNumClasses>, kNumClasses>;

struct EvalReport {
  double f1_task_a = 0.0;
  double f1_task_b = 0.0;
  // Rows are gold classes, columns predicted classes.
  ConfusionMatrix confusion{};
  std::array<double, kNumClasses> per_class_f1{};
  long n_samples = 0;
  std::string config_digest;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOptions {
  Normalisation normalisation;
  Averaging averaging = Averaging::kMacro;
  int batch_size = 64;
};

// Row-wise argmax; ties go to the lowest class id.
std::vector<int> argmax_rows(const nn::Tensor& logits);

// Normalises (the only test-time preprocessing) and predicts a class per
// raster. Rasters must already be decoded and resized to the model side.
std::vector<ClassLabel> predict(const Classifier& model, std::span<const Raster> rasters,
                                const EvalOptions& options = {});

// F1 of the positive class AI; 0 when precision + recall is 0.
// Throws LengthMismatch, EmptyInput.
double f1_binary(std::span<const BinaryLabel> preds, std::span<const BinaryLabel> golds);

struct MulticlassF1 {
  double score = 0.0;
  std::array<double, kNumClasses> per_class{};
};

// Per-class one-vs-rest F1 (0 on zero division). The macro score averages all
// six classes, including classes absent from `golds`.
MulticlassF1 f1_multiclass(std::span<const ClassLabel> preds, std::span<const ClassLabel> golds,
                           Averaging averaging);
inline MulticlassF1 f1_macro(std::span<const ClassLabel> preds,
                             std::span<const ClassLabel> golds) {
  return f1_multiclass(preds, golds, Averaging::kMacro);
}

// Task-B metrics from 6-way predictions; Task A derives from them through
// binary_label.
EvalReport report_from_predictions(std::span<const ClassLabel> preds,
                                   std::span<const ClassLabel> golds,
                                   Averaging averaging = Averaging::kMacro);

// Throws EmptyDataset.
EvalReport evaluate(const Classifier& model, std::span<const LabeledImage> dataset,
                    const EvalOptions& options = {});

std::string metric_digest(Averaging averaging);

nlohmann::ordered_json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Aligned text table: Task-A/Task-B F1 per set, then per-class F1.
std::string render_table(const std::map<std::string, EvalReport>& reports);
// Bar chart of per-class F1 (one group per report), written as PNG.
void render_bar_chart(const std::map<std::string, EvalReport>& reports,
                      const std::filesystem::path& path);

}  // namespace aigid

#endif  // AIGID_EVAL_HPP_
