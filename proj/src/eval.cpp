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

#include "aigid/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "aigid/error.hpp"

namespace aigid {
namespace {

constexpr std::array<std::string_view, 3> kAveragingNames = {"macro", "micro", "weighted"};

double f1_from_counts(long tp, long fp, long fn) {
  const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

template <typename A, typename B>
void check_lengths(std::span<const A> preds, std::span<const B> golds) {
  if (preds.size() != golds.size()) {
    throw LengthMismatch("prediction count " + std::to_string(preds.size()) +
                         " != gold count " + std::to_string(golds.size()));
  }
  if (preds.empty()) throw EmptyInput("no predictions to score");
}

}  // namespace

std::string_view averaging_name(Averaging averaging) {
  return kAveragingNames[static_cast<int>(averaging)];
}

Averaging averaging_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAveragingNames.size(); ++i) {
    if (kAveragingNames[i] == name) return static_cast<Averaging>(i);
  }
  throw InvalidConfig("unknown averaging: " + std::string(name));
}

std::vector<int> argmax_rows(const nn::Tensor& logits) {
  if (logits.rank() != 2) throw ShapeMismatch("argmax_rows: logits must be [b, k]");
  const int b = logits.dim(0);
  const int k = logits.dim(1);
  std::vector<int> out(b);
  for (int i = 0; i < b; ++i) {
    const float* row = logits.ptr() + static_cast<std::size_t>(i) * k;
    int best = 0;
    for (int j = 1; j < k; ++j) {
      if (row[j] > row[best]) best = j;
    }
    out[i] = best;
  }
  return out;
}

std::vector<ClassLabel> predict(const Classifier& model, std::span<const Raster> rasters,
                                const EvalOptions& options) {
  std::vector<ClassLabel> out;
  out.reserve(rasters.size());
  const int side = model.config().image_side;
  const auto batch = static_cast<std::size_t>(std::max(1, options.batch_size));
  for (std::size_t start = 0; start < rasters.size(); start += batch) {
    const std::size_t end = std::min(rasters.size(), start + batch);
    std::vector<Raster> normed;
    normed.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) {
      normed.push_back(normalise(rasters[i], options.normalisation));
    }
    const nn::Tensor logits = model.infer(to_batch(normed, side));
    if (logits.dim(1) != kNumClasses) throw ShapeMismatch("model does not emit 6 logits");
    for (int id : argmax_rows(logits)) out.push_back(class_from_id(id));
  }
  return out;
}

double f1_binary(std::span<const BinaryLabel> preds, std::span<const BinaryLabel> golds) {
  check_lengths(preds, golds);
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == BinaryLabel::kAi;
    const bool g = golds[i] == BinaryLabel::kAi;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  return f1_from_counts(tp, fp, fn);
}

MulticlassF1 f1_multiclass(std::span<const ClassLabel> preds, std::span<const ClassLabel> golds,
                           Averaging averaging) {
  check_lengths(preds, golds);
  ConfusionMatrix cm{};
  for (std::size_t i = 0; i < preds.size(); ++i) ++cm[class_id(golds[i])][class_id(preds[i])];

  MulticlassF1 out;
  std::array<long, kNumClasses> support{};
  long correct = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    long fp = 0, fn = 0;
    for (int o = 0; o < kNumClasses; ++o) {
      support[c] += cm[c][o];
      if (o == c) continue;
      fn += cm[c][o];
      fp += cm[o][c];
    }
    correct += cm[c][c];
    out.per_class[c] = f1_from_counts(cm[c][c], fp, fn);
  }

  const auto n = static_cast<double>(preds.size());
  switch (averaging) {
    case Averaging::kMacro: {
      double sum = 0.0;
      for (double f : out.per_class) sum += f;
      out.score = sum / kNumClasses;
      break;
    }
    case Averaging::kMicro:
      // Single-label: micro precision = micro recall = accuracy.
      out.score = static_cast<double>(correct) / n;
      break;
    case Averaging::kWeighted: {
      double sum = 0.0;
      for (int c = 0; c < kNumClasses; ++c) sum += out.per_class[c] * static_cast<double>(support[c]);
      out.score = sum / n;
      break;
    }
  }
  return out;
}

std::string metric_digest(Averaging averaging) {
  return "task_a=binary_f1(positive=AI);task_b=" + std::string(averaging_name(averaging)) +
         "_f1(classes=6);zero_division=0;absent_class=0;preprocess=normalise_only";
}

EvalReport report_from_predictions(std::span<const ClassLabel> preds,
                                   std::span<const ClassLabel> golds, Averaging averaging) {
  const MulticlassF1 task_b = f1_multiclass(preds, golds, averaging);
  std::vector<BinaryLabel> bin_preds, bin_golds;
  bin_preds.reserve(preds.size());
  bin_golds.reserve(golds.size());
  for (auto p : preds) bin_preds.push_back(binary_label(p));
  for (auto g : golds) bin_golds.push_back(binary_label(g));

  EvalReport report;
  report.f1_task_a = f1_binary(bin_preds, bin_golds);
  report.f1_task_b = task_b.score;
  report.per_class_f1 = task_b.per_class;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ++report.confusion[class_id(golds[i])][class_id(preds[i])];
  }
  report.n_samples = static_cast<long>(preds.size());
  report.config_digest = metric_digest(averaging);
  return report;
}

EvalReport evaluate(const Classifier& model, std::span<const LabeledImage> dataset,
                    const EvalOptions& options) {
  if (dataset.empty()) throw EmptyDataset("evaluate: dataset is empty");
  std::vector<Raster> rasters;
  std::vector<ClassLabel> golds;
  rasters.reserve(dataset.size());
  golds.reserve(dataset.size());
  for (const auto& item : dataset) {
    rasters.push_back(item.pixels);
    golds.push_back(item.label);
  }
  const auto preds = predict(model, rasters, options);
  return report_from_predictions(preds, golds, options.averaging);
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["f1_task_a"] = report.f1_task_a;
  j["f1_task_b"] = report.f1_task_b;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    per_class[std::string(class_name(class_from_id(c)))] = report.per_class_f1[c];
  }
  j["per_class_f1"] = per_class;
  j["confusion_6x6"] = report.confusion;
  j["n_samples"] = report.n_samples;
  j["config_digest"] = report.config_digest;
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.f1_task_a = j.at("f1_task_a").get<double>();
  r.f1_task_b = j.at("f1_task_b").get<double>();
  for (int c = 0; c < kNumClasses; ++c) {
    r.per_class_f1[c] = j.at("per_class_f1").at(std::string(class_name(class_from_id(c)))).get<double>();
  }
  r.confusion = j.at("confusion_6x6").get<ConfusionMatrix>();
  r.n_samples = j.at("n_samples").get<long>();
  r.config_digest = j.at("config_digest").get<std::string>();
  return r;
}

std::string render_table(const std::map<std::string, EvalReport>& reports) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(12) << "set" << std::right << std::setw(10) << "n"
      << std::setw(14) << "F1 (Task-A)" << std::setw(14) << "F1 (Task-B)" << '\n';
  for (const auto& [name, r] : reports) {
    out << std::left << std::setw(12) << name << std::right << std::setw(10) << r.n_samples
        << std::setw(14) << r.f1_task_a << std::setw(14) << r.f1_task_b << '\n';
  }
  out << '\n' << std::left << std::setw(12) << "class";
  for (const auto& [name, r] : reports) out << std::right << std::setw(12) << name;
  out << '\n';
  for (int c = 0; c < kNumClasses; ++c) {
    out << std::left << std::setw(12) << class_name(class_from_id(c));
    for (const auto& [name, r] : reports) out << std::right << std::setw(12) << r.per_class_f1[c];
    out << '\n';
  }
  return out.str();
}

void render_bar_chart(const std::map<std::string, EvalReport>& reports,
                      const std::filesystem::path& path) {
  constexpr int kWidth = 1040;
  constexpr int kPlotRight = 880;  // legend lives to the right of this
  constexpr int kHeight = 420;
  constexpr int kLeft = 60;
  constexpr int kBottom = 360;
  constexpr int kTop = 40;
  cv::Mat canvas(kHeight, kWidth, CV_8UC3, cv::Scalar(255, 255, 255));
  const cv::Scalar black(0, 0, 0);
  cv::line(canvas, {kLeft, kTop}, {kLeft, kBottom}, black, 1);
  cv::line(canvas, {kLeft, kBottom}, {kPlotRight, kBottom}, black, 1);
  for (int t = 0; t <= 4; ++t) {
    const int y = kBottom - (kBottom - kTop) * t / 4;
    char label[8];
    std::snprintf(label, sizeof label, "%.2f", t / 4.0);
    cv::putText(canvas, label, {8, y + 4}, cv::FONT_HERSHEY_SIMPLEX, 0.4, black, 1);
    cv::line(canvas, {kLeft - 4, y}, {kLeft, y}, black, 1);
  }
  static const std::array<cv::Scalar, 6> palette = {
      cv::Scalar(180, 119, 31), cv::Scalar(14, 127, 255), cv::Scalar(44, 160, 44),
      cv::Scalar(40, 39, 214),  cv::Scalar(189, 103, 148), cv::Scalar(75, 86, 140)};
  const int groups = kNumClasses;
  const int series = std::max<int>(1, static_cast<int>(reports.size()));
  const int group_width = (kPlotRight - kLeft - 10) / groups;
  const int bar_width = std::max(2, (group_width - 10) / series);
  int s = 0;
  for (const auto& [name, r] : reports) {
    const cv::Scalar color = palette[s % palette.size()];
    for (int c = 0; c < groups; ++c) {
      const int x = kLeft + 10 + c * group_width + s * bar_width;
      const int h = static_cast<int>((kBottom - kTop) * std::clamp(r.per_class_f1[c], 0.0, 1.0));
      cv::rectangle(canvas, {x, kBottom - h}, {x + bar_width - 2, kBottom}, color, cv::FILLED);
    }
    cv::rectangle(canvas, {kPlotRight + 15, kTop + 16 * s}, {kPlotRight + 27, kTop + 12 + 16 * s}, color,
                  cv::FILLED);
    cv::putText(canvas, name, {kPlotRight + 33, kTop + 11 + 16 * s}, cv::FONT_HERSHEY_SIMPLEX, 0.4, black,
                1);
    ++s;
  }
  for (int c = 0; c < groups; ++c) {
    cv::putText(canvas, std::string(class_name(class_from_id(c))),
                {kLeft + 10 + c * group_width, kBottom + 20}, cv::FONT_HERSHEY_SIMPLEX, 0.4, black,
                1);
  }
  cv::putText(canvas, "per-class F1", {kLeft, 25}, cv::FONT_HERSHEY_SIMPLEX, 0.6, black, 1);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), canvas)) throw Error("cannot write " + path.string());
}

}  // namespace aigid
