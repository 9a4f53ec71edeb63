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

#ifndef AIGID_LAYERS_HPP_
#define AIGID_LAYERS_HPP_

#include <string>
#include <vector>

#include "aigid/rng.hpp"
#include "aigid/tensor.hpp"

namespace aigid::nn {

struct Parameter {
  std::string name;
  Var var;
  // Decoupled weight decay applies; false for biases and norm affines.
  bool decay = true;
};

using ParameterList = std::vector<Parameter>;

// Normal(0, stddev) truncated to +-2 stddev.
Tensor truncated_normal(Shape shape, float stddev, RngStream& rng);
Tensor normal_tensor(Shape shape, float stddev, RngStream& rng);

class Linear {
 public:
  Linear() = default;
  Linear(int in, int out, RngStream& rng, float init_std = 0.02f);

  Var forward(const Var& x) const { return linear(x, weight_, bias_); }
  void collect(ParameterList& out, const std::string& prefix) const;
  int in_features() const { return weight_.shape()[0]; }
  int out_features() const { return weight_.shape()[1]; }

 private:
  Var weight_;  // [in, out]
  Var bias_;
};

class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(int width);

  Var forward(const Var& x) const { return layer_norm(x, gamma_, beta_); }
  void collect(ParameterList& out, const std::string& prefix) const;

 private:
  Var gamma_;
  Var beta_;
};

class Conv2d {
 public:
  Conv2d() = default;
  // He-normal initialisation.
  Conv2d(int in_channels, int out_channels, int kernel, int stride, int padding, RngStream& rng);

  Var forward(const Var& x) const { return conv2d(x, weight_, bias_, stride_, padding_); }
  void collect(ParameterList& out, const std::string& prefix) const;
  int stride() const { return stride_; }

 private:
  Var weight_;  // [out, in, k, k]
  Var bias_;
  int stride_ = 1;
  int padding_ = 0;
};

// Pre-norm transformer encoder block: x + attn(ln(x)), then x + mlp(ln(x)).
class EncoderBlock {
 public:
  EncoderBlock() = default;
  EncoderBlock(int width, int heads, int mlp_width, RngStream& rng);

  Var forward(const Var& x) const;
  void collect(ParameterList& out, const std::string& prefix) const;

 private:
  int heads_ = 1;
  LayerNorm ln1_;
  Linear query_;
  Linear key_;
  Linear value_;
  Linear proj_;
  LayerNorm ln2_;
  Linear fc1_;
  Linear fc2_;
};

}  // namespace aigid::nn

#endif  // AIGID_LAYERS_HPP_
