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

#ifndef AIGID_OPTIM_HPP_
#define AIGID_OPTIM_HPP_

#include <vector>

#include "aigid/layers.hpp"

namespace aigid {

struct AdamWOptions {
  double learning_rate = 2e-5;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with decoupled weight decay:
//   theta -= lr * (m_hat / (sqrt(v_hat) + eps) + wd * theta)
// The decay term is skipped for parameters flagged decay = false, and the
// whole update is scaled by lr, so lr = 0 leaves parameters untouched.
class AdamW {
 public:
  AdamW(nn::ParameterList params, AdamWOptions options);

  void zero_grad();
  // Parameters without a gradient buffer are skipped.
  void step();
  long steps_taken() const noexcept { return t_; }
  const AdamWOptions& options() const noexcept { return options_; }

 private:
  nn::ParameterList params_;
  AdamWOptions options_;
  std::vector<nn::Tensor> m_;
  std::vector<nn::Tensor> v_;
  long t_ = 0;
};

}  // namespace aigid

#endif  // AIGID_OPTIM_HPP_
