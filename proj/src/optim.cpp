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

#include "aigid/optim.hpp"

#include <cmath>

namespace aigid {

AdamW::AdamW(nn::ParameterList params, AdamWOptions options)
    : params_(std::move(params)), options_(options) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.var.shape(), 0.0f);
    v_.emplace_back(p.var.shape(), 0.0f);
  }
}

void AdamW::zero_grad() {
  for (auto& p : params_) p.var.zero_grad();
}

void AdamW::step() {
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = options_.learning_rate;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& var = params_[i].var;
    const nn::Tensor& g = var.grad();
    if (g.empty()) continue;
    const double wd = params_[i].decay ? options_.weight_decay : 0.0;
    nn::Tensor& theta = var.mutable_value();
    nn::Tensor& m = m_[i];
    nn::Tensor& v = v_[i];
    for (std::size_t j = 0; j < theta.numel(); ++j) {
      const double gj = g[j];
      m[j] = static_cast<float>(b1 * m[j] + (1.0 - b1) * gj);
      v[j] = static_cast<float>(b2 * v[j] + (1.0 - b2) * gj * gj);
      const double m_hat = m[j] / bias1;
      const double v_hat = v[j] / bias2;
      const double update = m_hat / (std::sqrt(v_hat) + options_.epsilon) + wd * theta[j];
      theta[j] = static_cast<float>(theta[j] - lr * update);
    }
  }
}

}  // namespace aigid
