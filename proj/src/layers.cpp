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

#include "aigid/layers.hpp"

#include <cmath>

namespace aigid::nn {

Tensor truncated_normal(Shape shape, float stddev, RngStream& rng) {
  Tensor t(std::move(shape));
  for (float& v : t.data()) {
    double z;
    do {
      z = rng.normal();
    } while (z < -2.0 || z > 2.0);
    v = static_cast<float>(z * stddev);
  }
  return t;
}

Tensor normal_tensor(Shape shape, float stddev, RngStream& rng) {
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = static_cast<float>(rng.normal(0.0, stddev));
  return t;
}

Linear::Linear(int in, int out, RngStream& rng, float init_std)
    : weight_(truncated_normal({in, out}, init_std, rng), true),
      bias_(Tensor({out}, 0.0f), true) {}

void Linear::collect(ParameterList& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight_, true});
  out.push_back({prefix + ".bias", bias_, false});
}

LayerNorm::LayerNorm(int width)
    : gamma_(Tensor({width}, 1.0f), true), beta_(Tensor({width}, 0.0f), true) {}

void LayerNorm::collect(ParameterList& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", gamma_, false});
  out.push_back({prefix + ".bias", beta_, false});
}

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int stride, int padding,
               RngStream& rng)
    : weight_(normal_tensor({out_channels, in_channels, kernel, kernel},
                            std::sqrt(2.0f / static_cast<float>(in_channels * kernel * kernel)),
                            rng),
              true),
      bias_(Tensor({out_channels}, 0.0f), true),
      stride_(stride),
      padding_(padding) {}

void Conv2d::collect(ParameterList& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight_, true});
  out.push_back({prefix + ".bias", bias_, false});
}

EncoderBlock::EncoderBlock(int width, int heads, int mlp_width, RngStream& rng)
    : heads_(heads),
      ln1_(width),
      query_(width, width, rng),
      key_(width, width, rng),
      value_(width, width, rng),
      proj_(width, width, rng),
      ln2_(width),
      fc1_(width, mlp_width, rng),
      fc2_(mlp_width, width, rng) {}

Var EncoderBlock::forward(const Var& x) const {
  const int width = x.shape()[2];
  const float inv_sqrt_d = 1.0f / std::sqrt(static_cast<float>(width / heads_));

  const Var h = ln1_.forward(x);
  const Var q = split_heads(query_.forward(h), heads_);
  const Var k = split_heads(key_.forward(h), heads_);
  const Var v = split_heads(value_.forward(h), heads_);
  const Var attn = softmax(scale(bmm(q, k, /*transpose_b=*/true), inv_sqrt_d));
  const Var mixed = merge_heads(bmm(attn, v), heads_);
  const Var x1 = add(x, proj_.forward(mixed));

  const Var m = fc2_.forward(gelu(fc1_.forward(ln2_.forward(x1))));
  return add(x1, m);
}

void EncoderBlock::collect(ParameterList& out, const std::string& prefix) const {
  ln1_.collect(out, prefix + ".ln1");
  query_.collect(out, prefix + ".attn.query");
  key_.collect(out, prefix + ".attn.key");
  value_.collect(out, prefix + ".attn.value");
  proj_.collect(out, prefix + ".attn.proj");
  ln2_.collect(out, prefix + ".ln2");
  fc1_.collect(out, prefix + ".mlp.fc1");
  fc2_.collect(out, prefix + ".mlp.fc2");
}

}  // namespace aigid::nn
