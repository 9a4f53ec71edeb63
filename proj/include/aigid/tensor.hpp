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

#ifndef AIGID_TENSOR_HPP_
#define AIGID_TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace aigid::nn {

using Shape = std::vector<int>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major float32 tensor with value semantics.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  // Negative axes count from the back.
  int dim(int axis) const;
  std::size_t numel() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  float* ptr() noexcept { return data_.data(); }
  const float* ptr() const noexcept { return data_.data(); }
  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // Same data, new shape with equal element count.
  Tensor reshaped(Shape shape) const;
  void fill(float v);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

// c (m x n) += op(a) * op(b), where op transposes when the flag is set.
// a is m x k (or k x m when transposed), b is k x n (or n x k).
void gemm_accumulate(const float* a, const float* b, float* c, int m, int k, int n,
                     bool transpose_a, bool transpose_b);

struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backward_fn;

  // Zero-initialised on first use.
  Tensor& grad_buffer();
};

// Handle to a graph node. Copies share the node.
class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false);
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  bool defined() const noexcept { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  const Tensor& grad() const { return node_->grad; }
  Tensor& mutable_grad() { return node_->grad_buffer(); }
  bool requires_grad() const noexcept { return node_ && node_->requires_grad; }
  void zero_grad();
  const std::shared_ptr<Node>& node() const noexcept { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Seeds d(root)/d(root) = 1 and runs reverse-mode accumulation.
void backward(const Var& root);

bool grad_enabled() noexcept;

// Disables graph construction for the guard's lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Builds a result node; records the graph only if gradients are enabled and
// some parent requires them.
Var make_result(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backward_fn);

// ---------------------------------------------------------------------------
// Differentiable operations.

// x [..., in] * w [in, out] + b [out]; `b` may be undefined.
Var linear(const Var& x, const Var& w, const Var& b);
Var add(const Var& a, const Var& b);
// x [..., trailing] + p [trailing], p broadcast over the leading axes.
Var add_broadcast(const Var& x, const Var& p);
Var scale(const Var& x, float s);
Var relu(const Var& x);
// Exact (erf) GELU.
Var gelu(const Var& x);
// Normalises the last axis.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, float eps = 1e-6f);
// Softmax over the last axis.
Var softmax(const Var& x);
// a [g, m, k] * b [g, k, n], or b [g, n, k] when transpose_b.
Var bmm(const Var& a, const Var& b, bool transpose_b = false);
// [b, t, h*d] -> [b*h, t, d]
Var split_heads(const Var& x, int heads);
// [b*h, t, d] -> [b, t, h*d]
Var merge_heads(const Var& x, int heads);
// [b, t, d] with token [d] -> [b, t+1, d]
Var prepend_token(const Var& x, const Var& token);
// [b, t, d] -> [b, d]
Var select_token(const Var& x, int index);
// [b, c, h, w] -> [b, (h/p)*(w/p), c*p*p], patch rows in raster order and
// features ordered (c, dy, dx) to match a conv kernel [out, c, p, p].
Var extract_patches(const Var& x, int patch);
// x [b, c, h, w], w [o, c, k, k], bias [o] (may be undefined).
Var conv2d(const Var& x, const Var& w, const Var& bias, int stride, int padding);
// [b, c, h, w] -> [b, c]
Var global_avg_pool(const Var& x);
// Half-pixel, edge-clamped bilinear resize of [b, c, h, w].
Var resize_bilinear(const Var& x, int out_height, int out_width);
// [b, p] ++ [b, q] -> [b, p+q]
Var concat_last(const Var& a, const Var& b);
// Mean softmax cross-entropy of logits [b, k] against class ids.
Var cross_entropy(const Var& logits, std::span<const int> labels);

}  // namespace aigid::nn

#endif  // AIGID_TENSOR_HPP_
