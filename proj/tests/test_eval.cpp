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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "aigid/error.hpp"
#include "aigid/eval.hpp"
#include "aigid/rng.hpp"
#include "metric_oracle.hpp"

namespace aigid {
namespace {

using B = BinaryLabel;
using C = ClassLabel;

TEST(F1Binary, PerfectPrediction) {
  const std::vector<B> v = {B::kAi, B::kAi, B::kNotAi};
  EXPECT_EQ(f1_binary(v, v), 1.0);
}

TEST(F1Binary, NoTruePositives) {
  const std::vector<B> golds = {B::kAi, B::kNotAi};
  const std::vector<B> preds = {B::kNotAi, B::kAi};
  EXPECT_EQ(f1_binary(preds, golds), 0.0);
}

TEST(F1Binary, HalfPrecisionHalfRecall) {
  const std::vector<B> golds = {B::kAi, B::kAi, B::kNotAi, B::kNotAi};
  const std::vector<B> preds = {B::kAi, B::kNotAi, B::kAi, B::kNotAi};
  EXPECT_DOUBLE_EQ(f1_binary(preds, golds), 0.5);
}

TEST(F1Binary, Errors) {
  const std::vector<B> one = {B::kAi};
  const std::vector<B> two = {B::kAi, B::kAi};
  EXPECT_THROW(f1_binary(one, two), LengthMismatch);
  EXPECT_THROW(f1_binary(std::span<const B>{}, std::span<const B>{}), EmptyInput);
}

TEST(F1Macro, PerfectOverAllClasses) {
  std::vector<C> v;
  for (int c = 0; c < kNumClasses; ++c) v.push_back(class_from_id(c));
  EXPECT_EQ(f1_macro(v, v).score, 1.0);
}

TEST(F1Macro, ConstantPredictorOnUniformGolds) {
  std::vector<C> golds;
  for (int c = 0; c < kNumClasses; ++c) golds.push_back(class_from_id(c));
  const std::vector<C> preds(golds.size(), C::kReal);
  const auto f = f1_macro(preds, golds);
  EXPECT_DOUBLE_EQ(f.per_class[0], 2.0 / 7.0);
  for (int c = 1; c < kNumClasses; ++c) EXPECT_EQ(f.per_class[c], 0.0);
  EXPECT_NEAR(f.score, 2.0 / 7.0 / 6.0, 1e-12);
  EXPECT_NEAR(f.score, 0.0476, 5e-5);
}

TEST(F1Macro, SingleCorrectSampleAveragesAllSixClasses) {
  const std::vector<C> v = {C::kSdxl};
  const auto f = f1_macro(v, v);
  EXPECT_EQ(f.per_class[class_id(C::kSdxl)], 1.0);
  EXPECT_DOUBLE_EQ(f.score, 1.0 / 6.0);
}

TEST(F1Macro, Errors) {
  const std::vector<C> one = {C::kReal};
  const std::vector<C> two = {C::kReal, C::kSd3};
  EXPECT_THROW(f1_macro(one, two), LengthMismatch);
  EXPECT_THROW(f1_macro(std::span<const C>{}, std::span<const C>{}), EmptyInput);
}

TEST(F1Macro, MatchesCountingOracle) {
  RngStream rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [preds, golds] = testing::random_label_pair(rng, 50);
    const auto got = f1_macro(preds, golds);
    const auto want = testing::oracle_multiclass(preds, golds);
    ASSERT_EQ(got.score, want.macro) << "trial " << trial;
    for (int c = 0; c < kNumClasses; ++c) ASSERT_EQ(got.per_class[c], want.per_class[c]);

    std::vector<B> bp, bg;
    for (auto p : preds) bp.push_back(binary_label(p));
    for (auto g : golds) bg.push_back(binary_label(g));
    ASSERT_EQ(f1_binary(bp, bg), testing::oracle_binary(bp, bg)) << "trial " << trial;
  }
}

TEST(F1Macro, InvariantUnderRelabelling) {
  RngStream rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto [preds, golds] = testing::random_label_pair(rng, 40);
    std::array<int, kNumClasses> perm;
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = kNumClasses - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    auto relabel = [&](std::vector<C> v) {
      for (auto& x : v) x = class_from_id(perm[class_id(x)]);
      return v;
    };
    EXPECT_NEAR(f1_macro(preds, golds).score, f1_macro(relabel(preds), relabel(golds)).score,
                1e-12);
  }
}

TEST(TaskA, InvariantUnderGeneratorPermutation) {
  RngStream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto [preds, golds] = testing::random_label_pair(rng, 40);
    std::array<int, kNumClasses> perm = {0, 1, 2, 3, 4, 5};
    for (int i = kNumClasses - 1; i > 1; --i) std::swap(perm[i], perm[rng.uniform_int(1, i)]);
    auto relabel = [&](std::vector<C> v) {
      for (auto& x : v) x = class_from_id(perm[class_id(x)]);
      return v;
    };
    EXPECT_EQ(report_from_predictions(preds, golds).f1_task_a,
              report_from_predictions(relabel(preds), relabel(golds)).f1_task_a);
  }
}

TEST(Report, ConfusionBookkeeping) {
  RngStream rng(3);
  const auto [preds, golds] = testing::random_label_pair(rng, 50);
  const EvalReport r = report_from_predictions(preds, golds);
  long total = 0;
  for (int g = 0; g < kNumClasses; ++g) {
    long row = 0, col = 0;
    for (int p = 0; p < kNumClasses; ++p) {
      row += r.confusion[g][p];
      col += r.confusion[p][g];
    }
    EXPECT_EQ(row, std::count(golds.begin(), golds.end(), class_from_id(g)));
    EXPECT_EQ(col, std::count(preds.begin(), preds.end(), class_from_id(g)));
    total += row;
  }
  EXPECT_EQ(total, r.n_samples);
  double mean = 0.0;
  for (double f : r.per_class_f1) mean += f;
  EXPECT_DOUBLE_EQ(r.f1_task_b, mean / kNumClasses);
}

TEST(Report, ConstantRealPredictorHasZeroTaskA) {
  std::vector<C> golds;
  for (int k = 0; k < 4; ++k) {
    for (int c = 0; c < kNumClasses; ++c) golds.push_back(class_from_id(c));
  }
  const std::vector<C> preds(golds.size(), C::kReal);
  EXPECT_EQ(report_from_predictions(preds, golds).f1_task_a, 0.0);
}

TEST(Report, PerfectPredictionsGiveDiagonal) {
  std::vector<C> v;
  for (int c = 0; c < kNumClasses; ++c) v.push_back(class_from_id(c));
  const EvalReport r = report_from_predictions(v, v);
  EXPECT_EQ(r.f1_task_a, 1.0);
  EXPECT_EQ(r.f1_task_b, 1.0);
  for (int g = 0; g < kNumClasses; ++g) {
    for (int p = 0; p < kNumClasses; ++p) EXPECT_EQ(r.confusion[g][p], g == p ? 1 : 0);
  }
}

TEST(Report, JsonRoundTripAndKeyOrder) {
  RngStream rng(8);
  const auto [preds, golds] = testing::random_label_pair(rng, 30);
  const EvalReport r = report_from_predictions(preds, golds);
  const auto j = report_to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"f1_task_a", "f1_task_b", "per_class_f1",
                                            "confusion_6x6", "n_samples", "config_digest"}));
  EXPECT_EQ(report_from_json(nlohmann::json::parse(j.dump())), r);
  EXPECT_EQ(j.dump(), report_to_json(report_from_json(nlohmann::json::parse(j.dump()))).dump());
}

TEST(Report, DigestNamesTheMetric) {
  const std::vector<C> v = {C::kReal};
  EXPECT_NE(report_from_predictions(v, v).config_digest.find("macro"), std::string::npos);
}

TEST(Averaging, MicroIsAccuracyAndWeightedUsesSupport) {
  const std::vector<C> golds = {C::kReal, C::kReal, C::kReal, C::kSd21};
  const std::vector<C> preds = {C::kReal, C::kReal, C::kSd21, C::kSd21};
  EXPECT_DOUBLE_EQ(f1_multiclass(preds, golds, Averaging::kMicro).score, 0.75);
  // REAL: P=1, R=2/3 -> 0.8; SD21: P=1/2, R=1 -> 2/3.
  EXPECT_NEAR(f1_multiclass(preds, golds, Averaging::kWeighted).score,
              (3 * 0.8 + 1 * (2.0 / 3.0)) / 4.0, 1e-12);
}

TEST(Argmax, PicksMaxAndBreaksTiesLow) {
  nn::Tensor logits({2, 6}, std::vector<float>{0.1f, 2.0f, 0.1f, 0.1f, 0.1f, 0.1f,  //
                                               1.0f, 1.0f, 1.0f, 1.0f, 1.0f, 1.0f});
  EXPECT_EQ(argmax_rows(logits), (std::vector<int>{1, 0}));
}

TEST(Table, ListsEverySetAndClass) {
  const std::vector<C> v = {C::kReal, C::kSd3};
  std::map<std::string, EvalReport> reports = {{"CLEAN", report_from_predictions(v, v)},
                                               {"JPEG", report_from_predictions(v, v)}};
  const std::string table = render_table(reports);
  for (auto name : {"CLEAN", "JPEG", "REAL", "MIDJOURNEY6", "Task-A", "Task-B"}) {
    EXPECT_NE(table.find(name), std::string::npos) << name;
  }
}

}  // namespace
}  // namespace aigid
