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

#ifndef AIGID_TESTS_METRIC_ORACLE_HPP_
#define AIGID_TESTS_METRIC_ORACLE_HPP_

// Brute-force F1 by direct TP/FP/FN counting, written independently of the
// library's confusion-matrix path.

#include <array>
#include <utility>
#include <vector>

#include "aigid/data.hpp"
#include "aigid/rng.hpp"

namespace aigid::testing {

inline double oracle_f1(long tp, long fp, long fn) {
  double p = 0.0, r = 0.0;
  if (tp + fp > 0) p = double(tp) / double(tp + fp);
  if (tp + fn > 0) r = double(tp) / double(tp + fn);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

inline double oracle_binary(const std::vector<BinaryLabel>& preds,
                            const std::vector<BinaryLabel>& golds) {
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == BinaryLabel::kAi && golds[i] == BinaryLabel::kAi) tp++;
    if (preds[i] == BinaryLabel::kAi && golds[i] == BinaryLabel::kNotAi) fp++;
    if (preds[i] == BinaryLabel::kNotAi && golds[i] == BinaryLabel::kAi) fn++;
  }
  return oracle_f1(tp, fp, fn);
}

struct OracleMulticlass {
  double macro = 0.0;
  std::array<double, kNumClasses> per_class{};
};

inline OracleMulticlass oracle_multiclass(const std::vector<ClassLabel>& preds,
                                          const std::vector<ClassLabel>& golds) {
  OracleMulticlass out;
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    const ClassLabel k = class_from_id(c);
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (preds[i] == k && golds[i] == k) tp++;
      if (preds[i] == k && golds[i] != k) fp++;
      if (preds[i] != k && golds[i] == k) fn++;
    }
    out.per_class[c] = oracle_f1(tp, fp, fn);
    sum += out.per_class[c];
  }
  out.macro = sum / kNumClasses;
  return out;
}

// Random (preds, golds) of length 1..max_len. Every third pair is biased
// toward agreement so high scores are exercised too.
inline std::pair<std::vector<ClassLabel>, std::vector<ClassLabel>> random_label_pair(
    RngStream& rng, int max_len) {
  const auto n = rng.uniform_int(1, max_len);
  const bool agree = rng.uniform_int(0, 2) == 0;
  std::vector<ClassLabel> preds, golds;
  for (long i = 0; i < n; ++i) {
    const auto g = class_from_id(static_cast<int>(rng.uniform_int(0, kNumClasses - 1)));
    golds.push_back(g);
    preds.push_back(agree && rng.bernoulli(0.8)
                        ? g
                        : class_from_id(static_cast<int>(rng.uniform_int(0, kNumClasses - 1))));
  }
  return {preds, golds};
}

}  // namespace aigid::testing

#endif  // AIGID_TESTS_METRIC_ORACLE_HPP_
