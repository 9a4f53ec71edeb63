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

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "aigid/error.hpp"
#include "aigid/rng.hpp"
#include "aigid/tensor.hpp"

namespace aigid::nn {
namespace {

Tensor random_tensor(const Shape& shape, RngStream& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(shape);
  for (float& v : t.data()) v = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

// sum(x * w) as a scalar node, so any output shape can be checked.
Var weighted_sum(const Var& x, const Tensor& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.numel(); ++i) s += double(x.value()[i]) * w[i];
  return make_result(Tensor({1}, std::vector<float>{static_cast<float>(s)}), {x},
                     [w](Node& n) {
                       Node& p = *n.parents[0];
                       if (!p.requires_grad) return;
                       Tensor& g = p.grad_buffer();
                       for (std::size_t i = 0; i < w.numel(); ++i) g[i] += w[i] * n.grad[0];
                     });
}

using Fn = std::function<Var(const std::vector<Var>&)>;

// Central differences on every input element against reverse mode.
void gradcheck(const Fn& f, std::vector<Tensor> inputs, double eps = 1e-2, double tol = 2e-2) {
  RngStream rng(1234);
  std::vector<Var> vars;
  for (auto& t : inputs) vars.emplace_back(t, true);
  const Var out = f(vars);
  const Tensor w = random_tensor(out.shape(), rng);
  backward(weighted_sum(out, w));

  auto eval = [&](const std::vector<Tensor>& ins) {
    NoGradGuard guard;
    std::vector<Var> vs;
    for (const auto& t : ins) vs.emplace_back(t);
    const Var o = f(vs);
    double s = 0.0;
    for (std::size_t i = 0; i < w.numel(); ++i) s += double(o.value()[i]) * w[i];
    return s;
  };
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Tensor analytic = vars[k].grad().empty() ? Tensor(inputs[k].shape()) : vars[k].grad();
    for (std::size_t i = 0; i < inputs[k].numel(); ++i) {
      const float keep = inputs[k][i];
      inputs[k][i] = keep + static_cast<float>(eps);
      const double up = eval(inputs);
      inputs[k][i] = keep - static_cast<float>(eps);
      const double down = eval(inputs);
      inputs[k][i] = keep;
      const double numeric = (up - down) / (2 * eps);
      ASSERT_NEAR(analytic[i], numeric, tol * (1.0 + std::abs(numeric)))
          << "input " << k << " element " << i;
    }
  }
}

TEST(Gradcheck, Linear) {
  RngStream rng(1);
  gradcheck([](const auto& v) { return linear(v[0], v[1], v[2]); },
            {random_tensor({2, 3, 4}, rng), random_tensor({4, 5}, rng), random_tensor({5}, rng)});
}

TEST(Gradcheck, AddScaleBroadcast) {
  RngStream rng(2);
  gradcheck([](const auto& v) { return scale(add_broadcast(add(v[0], v[1]), v[2]), 0.7f); },
            {random_tensor({2, 3, 4}, rng), random_tensor({2, 3, 4}, rng), random_tensor({3, 4}, rng)});
}

TEST(Gradcheck, ReluAwayFromKink) {
  RngStream rng(3);
  Tensor x = random_tensor({20}, rng);
  for (float& v : x.data()) v += v >= 0 ? 0.1f : -0.1f;
  gradcheck([](const auto& v) { return relu(v[0]); }, {x}, 1e-3);
}

TEST(Gradcheck, Gelu) {
  RngStream rng(4);
  gradcheck([](const auto& v) { return gelu(v[0]); }, {random_tensor({3, 7}, rng, -3, 3)}, 1e-3);
}

TEST(Gradcheck, LayerNorm) {
  RngStream rng(5);
  gradcheck([](const auto& v) { return layer_norm(v[0], v[1], v[2]); },
            {random_tensor({3, 6}, rng), random_tensor({6}, rng), random_tensor({6}, rng)}, 1e-3);
}

TEST(Gradcheck, Softmax) {
  RngStream rng(6);
  gradcheck([](const auto& v) { return softmax(v[0]); }, {random_tensor({2, 3, 5}, rng)}, 1e-3);
}

TEST(Gradcheck, Bmm) {
  RngStream rng(7);
  gradcheck([](const auto& v) { return bmm(v[0], v[1]); },
            {random_tensor({2, 3, 4}, rng), random_tensor({2, 4, 5}, rng)});
  gradcheck([](const auto& v) { return bmm(v[0], v[1], true); },
            {random_tensor({2, 3, 4}, rng), random_tensor({2, 5, 4}, rng)});
}

TEST(Gradcheck, HeadsAndTokens) {
  RngStream rng(8);
  gradcheck(
      [](const auto& v) { return select_token(merge_heads(split_heads(prepend_token(v[0], v[1]), 2), 2), 1); },
      {random_tensor({2, 3, 4}, rng), random_tensor({4}, rng)});
}

TEST(Gradcheck, ExtractPatches) {
  RngStream rng(9);
  gradcheck([](const auto& v) { return extract_patches(v[0], 2); }, {random_tensor({2, 3, 4, 4}, rng)});
}

TEST(Gradcheck, Conv2d) {
  RngStream rng(10);
  gradcheck([](const auto& v) { return conv2d(v[0], v[1], v[2], 2, 1); },
            {random_tensor({2, 2, 5, 5}, rng), random_tensor({3, 2, 3, 3}, rng), random_tensor({3}, rng)});
  gradcheck([](const auto& v) { return conv2d(v[0], v[1], Var(), 1, 0); },
            {random_tensor({1, 3, 4, 4}, rng), random_tensor({2, 3, 1, 1}, rng)});
}

TEST(Gradcheck, PoolResizeConcat) {
  RngStream rng(11);
  gradcheck([](const auto& v) { return global_avg_pool(v[0]); }, {random_tensor({2, 3, 4, 4}, rng)});
  gradcheck([](const auto& v) { return resize_bilinear(v[0], 7, 5); }, {random_tensor({1, 2, 3, 4}, rng)});
  gradcheck([](const auto& v) { return concat_last(v[0], v[1]); },
            {random_tensor({2, 3}, rng), random_tensor({2, 4}, rng)});
}

TEST(Gradcheck, CrossEntropy) {
  RngStream rng(12);
  const std::vector<int> labels = {0, 5, 2};
  gradcheck([&](const auto& v) { return cross_entropy(v[0], labels); }, {random_tensor({3, 6}, rng)},
            1e-3);
}

TEST(Ops, UniformLogitsGiveLogSix) {
  const Var logits(Tensor({1, 6}, 0.3f));
  const std::vector<int> label = {3};
  EXPECT_NEAR(cross_entropy(logits, label).value()[0], std::log(6.0), 1e-6);
  EXPECT_NEAR(cross_entropy(logits, label).value()[0], 1.7918, 1e-4);
}

// Reference values below come from PyTorch (F.gelu, F.layer_norm,
// F.interpolate with align_corners=False).
TEST(Ops, GeluValues) {
  const Var y = gelu(Var(Tensor({4}, std::vector<float>{-1.0f, 0.5f, 1.0f, 2.0f})));
  const std::vector<float> want = {-0.15865526f, 0.34573123f, 0.84134471f, 1.95449972f};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(y.value()[i], want[i], 1e-6);
}

TEST(Ops, LayerNormValues) {
  const Var y = layer_norm(Var(Tensor({4}, std::vector<float>{1, 2, 4, 7})), Var(Tensor({4}, 1.0f)),
                           Var(Tensor({4}, 0.0f)));
  const std::vector<float> want = {-1.09108937f, -0.65465361f, 0.21821786f, 1.52752507f};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(y.value()[i], want[i], 1e-5);
}

TEST(Ops, ResizeMatchesHalfPixelReference) {
  const Var up = resize_bilinear(Var(Tensor({1, 1, 2, 2}, std::vector<float>{0, 1, 2, 3})), 4, 4);
  const std::vector<float> want = {0.0, 0.25, 0.75, 1.0, 0.5, 0.75, 1.25, 1.5,
                                   1.5, 1.75, 2.25, 2.5, 2.0, 2.25, 2.75, 3.0};
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(up.value()[i], want[i], 1e-6);

  std::vector<float> ramp(12);
  for (int i = 0; i < 12; ++i) ramp[i] = static_cast<float>(i);
  const Var down = resize_bilinear(Var(Tensor({1, 1, 3, 4}, ramp)), 2, 3);
  const std::vector<float> want_down = {1.16666663f, 2.5f, 3.83333349f, 7.16666651f, 8.5f, 9.83333302f};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(down.value()[i], want_down[i], 1e-5);
}

TEST(Ops, Conv2dMatchesDirectSum) {
  RngStream rng(13);
  const Tensor x = random_tensor({2, 3, 6, 5}, rng);
  const Tensor w = random_tensor({4, 3, 3, 3}, rng);
  const Tensor b = random_tensor({4}, rng);
  const int stride = 2, pad = 1;
  const Tensor y = conv2d(Var(x), Var(w), Var(b), stride, pad).value();
  const int oh = (6 + 2 * pad - 3) / stride + 1, ow = (5 + 2 * pad - 3) / stride + 1;
  ASSERT_EQ(y.shape(), (Shape{2, 4, oh, ow}));
  for (int n = 0; n < 2; ++n) {
    for (int o = 0; o < 4; ++o) {
      for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
          double s = b[o];
          for (int c = 0; c < 3; ++c) {
            for (int ky = 0; ky < 3; ++ky) {
              for (int kx = 0; kx < 3; ++kx) {
                const int yy = i * stride - pad + ky, xx = j * stride - pad + kx;
                if (yy < 0 || yy >= 6 || xx < 0 || xx >= 5) continue;
                s += double(x[((n * 3 + c) * 6 + yy) * 5 + xx]) * w[((o * 3 + c) * 3 + ky) * 3 + kx];
              }
            }
          }
          EXPECT_NEAR(y[((n * 4 + o) * oh + i) * ow + j], s, 1e-5);
        }
      }
    }
  }
}

TEST(Ops, ExtractPatchesLayout) {
  std::vector<float> v(2 * 4 * 4);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i);
  const Tensor p = extract_patches(Var(Tensor({1, 2, 4, 4}, v)), 2).value();
  ASSERT_EQ(p.shape(), (Shape{1, 4, 8}));
  // Patch 1 is the top-right block; features run (c, dy, dx).
  const std::vector<float> want = {2, 3, 6, 7, 18, 19, 22, 23};
  for (int f = 0; f < 8; ++f) EXPECT_EQ(p[1 * 8 + f], want[f]);
}

TEST(Ops, SoftmaxRowsSumToOne) {
  RngStream rng(14);
  const Tensor s = softmax(Var(random_tensor({3, 4, 6}, rng, -20, 20))).value();
  for (int r = 0; r < 12; ++r) {
    double sum = 0.0;
    for (int k = 0; k < 6; ++k) sum += s[r * 6 + k];
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Autograd, NoGradGuardBuildsNoGraph) {
  const Var x(Tensor({2}, 1.0f), true);
  NoGradGuard guard;
  const Var y = scale(x, 2.0f);
  EXPECT_FALSE(y.requires_grad());
  EXPECT_FALSE(grad_enabled());
}

TEST(Autograd, GradientsAccumulateAcrossUses) {
  const Var x(Tensor({1}, 3.0f), true);
  backward(add(x, x));
  EXPECT_EQ(x.grad()[0], 2.0f);
}

TEST(Autograd, ShapeErrors) {
  EXPECT_THROW(add(Var(Tensor({2})), Var(Tensor({3}))), ShapeMismatch);
  EXPECT_THROW(bmm(Var(Tensor({1, 2, 3})), Var(Tensor({1, 2, 3}))), ShapeMismatch);
  EXPECT_THROW(extract_patches(Var(Tensor({1, 3, 5, 5})), 2), ShapeMismatch);
}

}  // namespace
}  // namespace aigid::nn
