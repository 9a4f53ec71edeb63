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
#include <cmath>
#include <numbers>

#include "aigid/error.hpp"
#include "aigid/tensor.hpp"

namespace aigid::nn {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeMismatch(what);
}

// Parent grad buffer, or nullptr when that parent is not being trained.
float* grad_of(Node& self, std::size_t i) {
  Node* p = self.parents[i].get();
  if (p == nullptr || !p->requires_grad) return nullptr;
  return p->grad_buffer().ptr();
}

const Tensor& parent_value(Node& self, std::size_t i) { return self.parents[i]->value; }

std::size_t leading(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) n *= s[i];
  return n;
}

}  // namespace

Var linear(const Var& x, const Var& w, const Var& b) {
  require(w.value().rank() == 2, "linear: weight must be rank 2");
  const int in = w.shape()[0];
  const int out = w.shape()[1];
  require(x.value().rank() >= 1 && x.shape().back() == in,
          "linear: input " + shape_string(x.shape()) + " vs weight " + shape_string(w.shape()));
  const bool has_bias = b.defined();
  if (has_bias) require(b.shape() == Shape{out}, "linear: bias shape");
  const auto rows = static_cast<int>(leading(x.shape()));
  Shape out_shape = x.shape();
  out_shape.back() = out;
  Tensor y(out_shape, 0.0f);
  if (has_bias) {
    for (int r = 0; r < rows; ++r) {
      std::copy_n(b.value().ptr(), out, y.ptr() + static_cast<std::size_t>(r) * out);
    }
  }
  gemm_accumulate(x.value().ptr(), w.value().ptr(), y.ptr(), rows, in, out, false, false);
  std::vector<Var> parents{x, w};
  if (has_bias) parents.push_back(b);
  return make_result(std::move(y), parents, [rows, in, out, has_bias](Node& self) {
    const float* dy = self.grad.ptr();
    if (float* dx = grad_of(self, 0)) {
      gemm_accumulate(dy, parent_value(self, 1).ptr(), dx, rows, out, in, false, true);
    }
    if (float* dw = grad_of(self, 1)) {
      gemm_accumulate(parent_value(self, 0).ptr(), dy, dw, in, rows, out, true, false);
    }
    if (has_bias) {
      if (float* db = grad_of(self, 2)) {
        for (int r = 0; r < rows; ++r) {
          for (int j = 0; j < out; ++j) db[j] += dy[static_cast<std::size_t>(r) * out + j];
        }
      }
    }
  });
}

Var add(const Var& a, const Var& b) {
  require(a.shape() == b.shape(),
          "add: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.numel(); ++i) y[i] += b.value()[i];
  return make_result(std::move(y), {a, b}, [](Node& self) {
    const std::size_t n = self.grad.numel();
    for (std::size_t k = 0; k < 2; ++k) {
      if (float* d = grad_of(self, k)) {
        for (std::size_t i = 0; i < n; ++i) d[i] += self.grad[i];
      }
    }
  });
}

Var add_broadcast(const Var& x, const Var& p) {
  const Shape& xs = x.shape();
  const Shape& ps = p.shape();
  require(ps.size() <= xs.size() && std::equal(ps.rbegin(), ps.rend(), xs.rbegin()),
          "add_broadcast: " + shape_string(ps) + " is not a suffix of " + shape_string(xs));
  const std::size_t inner = p.value().numel();
  const std::size_t outer = x.value().numel() / inner;
  Tensor y = x.value();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) y[o * inner + i] += p.value()[i];
  }
  return make_result(std::move(y), {x, p}, [inner, outer](Node& self) {
    if (float* dx = grad_of(self, 0)) {
      for (std::size_t i = 0; i < self.grad.numel(); ++i) dx[i] += self.grad[i];
    }
    if (float* dp = grad_of(self, 1)) {
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) dp[i] += self.grad[o * inner + i];
      }
    }
  });
}

Var scale(const Var& x, float s) {
  Tensor y = x.value();
  for (float& v : y.data()) v *= s;
  return make_result(std::move(y), {x}, [s](Node& self) {
    if (float* dx = grad_of(self, 0)) {
      for (std::size_t i = 0; i < self.grad.numel(); ++i) dx[i] += s * self.grad[i];
    }
  });
}

Var relu(const Var& x) {
  Tensor y = x.value();
  for (float& v : y.data()) v = v > 0.0f ? v : 0.0f;
  return make_result(std::move(y), {x}, [](Node& self) {
    if (float* dx = grad_of(self, 0)) {
      const Tensor& xv = parent_value(self, 0);
      for (std::size_t i = 0; i < self.grad.numel(); ++i) {
        if (xv[i] > 0.0f) dx[i] += self.grad[i];
      }
    }
  });
}

Var gelu(const Var& x) {
  Tensor y = x.value();
  for (float& v : y.data()) v = 0.5f * v * (1.0f + std::erf(v * std::numbers::sqrt2_v<float> / 2));
  return make_result(std::move(y), {x}, [](Node& self) {
    if (float* dx = grad_of(self, 0)) {
      const Tensor& xv = parent_value(self, 0);
      constexpr float kInvSqrt2Pi = 0.3989422804014327f;
      for (std::size_t i = 0; i < self.grad.numel(); ++i) {
        const float v = xv[i];
        const float cdf = 0.5f * (1.0f + std::erf(v * std::numbers::sqrt2_v<float> / 2));
        const float pdf = kInvSqrt2Pi * std::exp(-0.5f * v * v);
        dx[i] += self.grad[i] * (cdf + v * pdf);
      }
    }
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, float eps) {
  const int d = x.shape().back();
  require(gamma.shape() == Shape{d} && beta.shape() == Shape{d}, "layer_norm: affine shape");
  const std::size_t rows = leading(x.shape());
  Tensor y(x.shape());
  Tensor xhat(x.shape());
  std::vector<float> rstd(rows);
  const float* xv = x.value().ptr();
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = xv + r * d;
    double mean = 0.0;
    for (int j = 0; j < d; ++j) mean += row[j];
    mean /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= d;
    rstd[r] = static_cast<float>(1.0 / std::sqrt(var + eps));
    for (int j = 0; j < d; ++j) {
      const float h = static_cast<float>(row[j] - mean) * rstd[r];
      xhat[r * d + j] = h;
      y[r * d + j] = h * gamma.value()[j] + beta.value()[j];
    }
  }
  return make_result(std::move(y), {x, gamma, beta},
                     [d, rows, xhat = std::move(xhat), rstd = std::move(rstd)](Node& self) {
                       const float* dy = self.grad.ptr();
                       const float* g = parent_value(self, 1).ptr();
                       float* dx = grad_of(self, 0);
                       float* dg = grad_of(self, 1);
                       float* db = grad_of(self, 2);
                       for (std::size_t r = 0; r < rows; ++r) {
                         const float* dyr = dy + r * d;
                         const float* hr = xhat.ptr() + r * d;
                         double mean_dh = 0.0;
                         double mean_dh_h = 0.0;
                         for (int j = 0; j < d; ++j) {
                           const float dh = dyr[j] * g[j];
                           mean_dh += dh;
                           mean_dh_h += dh * hr[j];
                           if (dg) dg[j] += dyr[j] * hr[j];
                           if (db) db[j] += dyr[j];
                         }
                         if (!dx) continue;
                         mean_dh /= d;
                         mean_dh_h /= d;
                         for (int j = 0; j < d; ++j) {
                           const double dh = dyr[j] * g[j];
                           dx[r * d + j] += static_cast<float>(
                               rstd[r] * (dh - mean_dh - hr[j] * mean_dh_h));
                         }
                       }
                     });
}

Var softmax(const Var& x) {
  const int d = x.shape().back();
  const std::size_t rows = leading(x.shape());
  Tensor y = x.value();
  for (std::size_t r = 0; r < rows; ++r) {
    float* row = y.ptr() + r * d;
    const float mx = *std::max_element(row, row + d);
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    for (int j = 0; j < d; ++j) row[j] = static_cast<float>(row[j] / sum);
  }
  Tensor saved = y;
  return make_result(std::move(y), {x}, [d, rows, saved = std::move(saved)](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (std::size_t r = 0; r < rows; ++r) {
      const float* yr = saved.ptr() + r * d;
      const float* dyr = self.grad.ptr() + r * d;
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += dyr[j] * yr[j];
      for (int j = 0; j < d; ++j) dx[r * d + j] += yr[j] * static_cast<float>(dyr[j] - dot);
    }
  });
}

Var bmm(const Var& a, const Var& b, bool transpose_b) {
  require(a.value().rank() == 3 && b.value().rank() == 3, "bmm: rank-3 operands required");
  const int g = a.shape()[0];
  const int m = a.shape()[1];
  const int k = a.shape()[2];
  const int n = transpose_b ? b.shape()[1] : b.shape()[2];
  const int bk = transpose_b ? b.shape()[2] : b.shape()[1];
  require(b.shape()[0] == g && bk == k,
          "bmm: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  Tensor y({g, m, n}, 0.0f);
  const std::size_t sa = static_cast<std::size_t>(m) * k;
  const std::size_t sb = static_cast<std::size_t>(k) * n;
  const std::size_t sy = static_cast<std::size_t>(m) * n;
  for (int i = 0; i < g; ++i) {
    gemm_accumulate(a.value().ptr() + i * sa, b.value().ptr() + i * sb, y.ptr() + i * sy, m, k,
                    n, false, transpose_b);
  }
  return make_result(std::move(y), {a, b}, [g, m, k, n, sa, sb, sy, transpose_b](Node& self) {
    const float* av = parent_value(self, 0).ptr();
    const float* bv = parent_value(self, 1).ptr();
    float* da = grad_of(self, 0);
    float* db = grad_of(self, 1);
    for (int i = 0; i < g; ++i) {
      const float* dy = self.grad.ptr() + i * sy;
      if (da) {
        // dA = dY * B^T  (or dY * B when B was used transposed)
        gemm_accumulate(dy, bv + i * sb, da + i * sa, m, n, k, false, !transpose_b);
      }
      if (db) {
        if (transpose_b) {
          // B is [n, k]: dB = dY^T * A
          gemm_accumulate(dy, av + i * sa, db + i * sb, n, m, k, true, false);
        } else {
          gemm_accumulate(av + i * sa, dy, db + i * sb, k, m, n, true, false);
        }
      }
    }
  });
}

Var split_heads(const Var& x, int heads) {
  require(x.value().rank() == 3, "split_heads: rank-3 input required");
  const int b = x.shape()[0];
  const int t = x.shape()[1];
  const int width = x.shape()[2];
  require(heads > 0 && width % heads == 0, "split_heads: heads must divide width");
  const int d = width / heads;
  Tensor y({b * heads, t, d});
  auto src_index = [=](int bi, int h, int ti, int j) {
    return (static_cast<std::size_t>(bi) * t + ti) * width + h * d + j;
  };
  auto dst_index = [=](int bi, int h, int ti, int j) {
    return ((static_cast<std::size_t>(bi) * heads + h) * t + ti) * d + j;
  };
  for (int bi = 0; bi < b; ++bi)
    for (int h = 0; h < heads; ++h)
      for (int ti = 0; ti < t; ++ti)
        for (int j = 0; j < d; ++j) y[dst_index(bi, h, ti, j)] = x.value()[src_index(bi, h, ti, j)];
  return make_result(std::move(y), {x}, [=](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (int bi = 0; bi < b; ++bi)
      for (int h = 0; h < heads; ++h)
        for (int ti = 0; ti < t; ++ti)
          for (int j = 0; j < d; ++j) dx[src_index(bi, h, ti, j)] += self.grad[dst_index(bi, h, ti, j)];
  });
}

Var merge_heads(const Var& x, int heads) {
  require(x.value().rank() == 3 && heads > 0 && x.shape()[0] % heads == 0,
          "merge_heads: leading axis must be a multiple of heads");
  const int b = x.shape()[0] / heads;
  const int t = x.shape()[1];
  const int d = x.shape()[2];
  const int width = heads * d;
  Tensor y({b, t, width});
  auto src_index = [=](int bi, int h, int ti, int j) {
    return ((static_cast<std::size_t>(bi) * heads + h) * t + ti) * d + j;
  };
  auto dst_index = [=](int bi, int h, int ti, int j) {
    return (static_cast<std::size_t>(bi) * t + ti) * width + h * d + j;
  };
  for (int bi = 0; bi < b; ++bi)
    for (int h = 0; h < heads; ++h)
      for (int ti = 0; ti < t; ++ti)
        for (int j = 0; j < d; ++j) y[dst_index(bi, h, ti, j)] = x.value()[src_index(bi, h, ti, j)];
  return make_result(std::move(y), {x}, [=](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (int bi = 0; bi < b; ++bi)
      for (int h = 0; h < heads; ++h)
        for (int ti = 0; ti < t; ++ti)
          for (int j = 0; j < d; ++j) dx[src_index(bi, h, ti, j)] += self.grad[dst_index(bi, h, ti, j)];
  });
}

Var prepend_token(const Var& x, const Var& token) {
  require(x.value().rank() == 3 && token.shape() == Shape{x.shape()[2]},
          "prepend_token: token width must match");
  const int b = x.shape()[0];
  const int t = x.shape()[1];
  const int d = x.shape()[2];
  Tensor y({b, t + 1, d});
  for (int bi = 0; bi < b; ++bi) {
    float* dst = y.ptr() + static_cast<std::size_t>(bi) * (t + 1) * d;
    std::copy_n(token.value().ptr(), d, dst);
    std::copy_n(x.value().ptr() + static_cast<std::size_t>(bi) * t * d,
                static_cast<std::size_t>(t) * d, dst + d);
  }
  return make_result(std::move(y), {x, token}, [b, t, d](Node& self) {
    float* dx = grad_of(self, 0);
    float* dt = grad_of(self, 1);
    for (int bi = 0; bi < b; ++bi) {
      const float* src = self.grad.ptr() + static_cast<std::size_t>(bi) * (t + 1) * d;
      if (dt)
        for (int j = 0; j < d; ++j) dt[j] += src[j];
      if (dx) {
        float* dst = dx + static_cast<std::size_t>(bi) * t * d;
        for (std::size_t j = 0; j < static_cast<std::size_t>(t) * d; ++j) dst[j] += src[d + j];
      }
    }
  });
}

Var select_token(const Var& x, int index) {
  require(x.value().rank() == 3 && index >= 0 && index < x.shape()[1],
          "select_token: index out of range");
  const int b = x.shape()[0];
  const int t = x.shape()[1];
  const int d = x.shape()[2];
  Tensor y({b, d});
  for (int bi = 0; bi < b; ++bi) {
    std::copy_n(x.value().ptr() + (static_cast<std::size_t>(bi) * t + index) * d, d,
                y.ptr() + static_cast<std::size_t>(bi) * d);
  }
  return make_result(std::move(y), {x}, [b, t, d, index](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (int bi = 0; bi < b; ++bi) {
      float* dst = dx + (static_cast<std::size_t>(bi) * t + index) * d;
      for (int j = 0; j < d; ++j) dst[j] += self.grad[static_cast<std::size_t>(bi) * d + j];
    }
  });
}

Var extract_patches(const Var& x, int patch) {
  require(x.value().rank() == 4, "extract_patches: input must be [b, c, h, w]");
  const int b = x.shape()[0];
  const int c = x.shape()[1];
  const int h = x.shape()[2];
  const int w = x.shape()[3];
  require(patch > 0 && h % patch == 0 && w % patch == 0,
          "extract_patches: patch size must divide the image side");
  const int ph = h / patch;
  const int pw = w / patch;
  const int feat = c * patch * patch;
  Tensor y({b, ph * pw, feat});
  // Visits every (output, input) index pair once.
  auto visit = [=](auto&& fn) {
    for (int bi = 0; bi < b; ++bi)
      for (int py = 0; py < ph; ++py)
        for (int px = 0; px < pw; ++px)
          for (int ci = 0; ci < c; ++ci)
            for (int dy = 0; dy < patch; ++dy)
              for (int dx = 0; dx < patch; ++dx) {
                const std::size_t out =
                    ((static_cast<std::size_t>(bi) * ph * pw + py * pw + px) * feat) +
                    (ci * patch + dy) * patch + dx;
                const std::size_t in =
                    ((static_cast<std::size_t>(bi) * c + ci) * h + py * patch + dy) * w +
                    px * patch + dx;
                fn(out, in);
              }
  };
  const float* xv = x.value().ptr();
  visit([&](std::size_t out, std::size_t in) { y[out] = xv[in]; });
  return make_result(std::move(y), {x}, [visit](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    const float* dy = self.grad.ptr();
    visit([&](std::size_t out, std::size_t in) { dx[in] += dy[out]; });
  });
}

namespace {

struct ConvGeometry {
  int c, h, w, o, k, stride, pad, oh, ow;
};

// cols [c*k*k, oh*ow] for one image.
void im2col(const float* img, const ConvGeometry& g, float* cols) {
  const int plane = g.oh * g.ow;
  for (int ci = 0; ci < g.c; ++ci)
    for (int ky = 0; ky < g.k; ++ky)
      for (int kx = 0; kx < g.k; ++kx) {
        float* row = cols + static_cast<std::size_t>((ci * g.k + ky) * g.k + kx) * plane;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            row[oy * g.ow + ox] = (iy < 0 || iy >= g.h || ix < 0 || ix >= g.w)
                                      ? 0.0f
                                      : img[(static_cast<std::size_t>(ci) * g.h + iy) * g.w + ix];
          }
        }
      }
}

void col2im(const float* cols, const ConvGeometry& g, float* img) {
  const int plane = g.oh * g.ow;
  for (int ci = 0; ci < g.c; ++ci)
    for (int ky = 0; ky < g.k; ++ky)
      for (int kx = 0; kx < g.k; ++kx) {
        const float* row = cols + static_cast<std::size_t>((ci * g.k + ky) * g.k + kx) * plane;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.h) continue;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix < 0 || ix >= g.w) continue;
            img[(static_cast<std::size_t>(ci) * g.h + iy) * g.w + ix] += row[oy * g.ow + ox];
          }
        }
      }
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& bias, int stride, int padding) {
  require(x.value().rank() == 4 && w.value().rank() == 4, "conv2d: rank-4 operands required");
  ConvGeometry g{};
  const int b = x.shape()[0];
  g.c = x.shape()[1];
  g.h = x.shape()[2];
  g.w = x.shape()[3];
  g.o = w.shape()[0];
  g.k = w.shape()[2];
  g.stride = stride;
  g.pad = padding;
  require(w.shape()[1] == g.c && w.shape()[3] == g.k,
          "conv2d: input " + shape_string(x.shape()) + " vs kernel " + shape_string(w.shape()));
  g.oh = (g.h + 2 * padding - g.k) / stride + 1;
  g.ow = (g.w + 2 * padding - g.k) / stride + 1;
  require(g.oh > 0 && g.ow > 0, "conv2d: kernel larger than padded input");
  const bool has_bias = bias.defined();
  if (has_bias) require(bias.shape() == Shape{g.o}, "conv2d: bias shape");

  const int plane = g.oh * g.ow;
  const int ckk = g.c * g.k * g.k;
  const std::size_t in_stride = static_cast<std::size_t>(g.c) * g.h * g.w;
  const std::size_t out_stride = static_cast<std::size_t>(g.o) * plane;
  Tensor y({b, g.o, g.oh, g.ow}, 0.0f);
  std::vector<float> cols(static_cast<std::size_t>(ckk) * plane);
  for (int bi = 0; bi < b; ++bi) {
    im2col(x.value().ptr() + bi * in_stride, g, cols.data());
    float* yb = y.ptr() + bi * out_stride;
    if (has_bias) {
      for (int oc = 0; oc < g.o; ++oc) std::fill_n(yb + oc * plane, plane, bias.value()[oc]);
    }
    gemm_accumulate(w.value().ptr(), cols.data(), yb, g.o, ckk, plane, false, false);
  }
  std::vector<Var> parents{x, w};
  if (has_bias) parents.push_back(bias);
  return make_result(std::move(y), parents,
                     [g, b, plane, ckk, in_stride, out_stride, has_bias](Node& self) {
                       float* dx = grad_of(self, 0);
                       float* dw = grad_of(self, 1);
                       float* db = has_bias ? grad_of(self, 2) : nullptr;
                       const float* xv = parent_value(self, 0).ptr();
                       const float* wv = parent_value(self, 1).ptr();
                       std::vector<float> cols(static_cast<std::size_t>(ckk) * plane);
                       for (int bi = 0; bi < b; ++bi) {
                         const float* dy = self.grad.ptr() + bi * out_stride;
                         if (db) {
                           for (int oc = 0; oc < g.o; ++oc)
                             for (int p = 0; p < plane; ++p) db[oc] += dy[oc * plane + p];
                         }
                         if (dw) {
                           im2col(xv + bi * in_stride, g, cols.data());
                           gemm_accumulate(dy, cols.data(), dw, g.o, plane, ckk, false, true);
                         }
                         if (dx) {
                           std::fill(cols.begin(), cols.end(), 0.0f);
                           gemm_accumulate(wv, dy, cols.data(), ckk, g.o, plane, true, false);
                           col2im(cols.data(), g, dx + bi * in_stride);
                         }
                       }
                     });
}

Var global_avg_pool(const Var& x) {
  require(x.value().rank() == 4, "global_avg_pool: input must be [b, c, h, w]");
  const int b = x.shape()[0];
  const int c = x.shape()[1];
  const int plane = x.shape()[2] * x.shape()[3];
  Tensor y({b, c});
  for (int i = 0; i < b * c; ++i) {
    double sum = 0.0;
    const float* src = x.value().ptr() + static_cast<std::size_t>(i) * plane;
    for (int p = 0; p < plane; ++p) sum += src[p];
    y[i] = static_cast<float>(sum / plane);
  }
  return make_result(std::move(y), {x}, [b, c, plane](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (int i = 0; i < b * c; ++i) {
      const float g = self.grad[i] / static_cast<float>(plane);
      float* dst = dx + static_cast<std::size_t>(i) * plane;
      for (int p = 0; p < plane; ++p) dst[p] += g;
    }
  });
}

namespace {

struct AxisTap {
  int lo;
  int hi;
  float w_hi;
};

std::vector<AxisTap> resize_taps(int in, int out) {
  std::vector<AxisTap> taps(out);
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    const double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
    const int lo = static_cast<int>(std::floor(s));
    taps[i] = {lo, std::min(lo + 1, in - 1), static_cast<float>(s - lo)};
  }
  return taps;
}

}  // namespace

Var resize_bilinear(const Var& x, int out_height, int out_width) {
  require(x.value().rank() == 4, "resize_bilinear: input must be [b, c, h, w]");
  const int planes = x.shape()[0] * x.shape()[1];
  const int h = x.shape()[2];
  const int w = x.shape()[3];
  const auto ys = resize_taps(h, out_height);
  const auto xs = resize_taps(w, out_width);
  Tensor y({x.shape()[0], x.shape()[1], out_height, out_width});
  for (int p = 0; p < planes; ++p) {
    const float* src = x.value().ptr() + static_cast<std::size_t>(p) * h * w;
    float* dst = y.ptr() + static_cast<std::size_t>(p) * out_height * out_width;
    for (int oy = 0; oy < out_height; ++oy) {
      const AxisTap& ty = ys[oy];
      for (int ox = 0; ox < out_width; ++ox) {
        const AxisTap& tx = xs[ox];
        const float top = src[ty.lo * w + tx.lo] * (1 - tx.w_hi) + src[ty.lo * w + tx.hi] * tx.w_hi;
        const float bot = src[ty.hi * w + tx.lo] * (1 - tx.w_hi) + src[ty.hi * w + tx.hi] * tx.w_hi;
        dst[oy * out_width + ox] = top * (1 - ty.w_hi) + bot * ty.w_hi;
      }
    }
  }
  return make_result(std::move(y), {x}, [=](Node& self) {
    float* dx = grad_of(self, 0);
    if (!dx) return;
    for (int p = 0; p < planes; ++p) {
      float* dsrc = dx + static_cast<std::size_t>(p) * h * w;
      const float* g = self.grad.ptr() + static_cast<std::size_t>(p) * out_height * out_width;
      for (int oy = 0; oy < out_height; ++oy) {
        const AxisTap& ty = ys[oy];
        for (int ox = 0; ox < out_width; ++ox) {
          const AxisTap& tx = xs[ox];
          const float v = g[oy * out_width + ox];
          dsrc[ty.lo * w + tx.lo] += v * (1 - ty.w_hi) * (1 - tx.w_hi);
          dsrc[ty.lo * w + tx.hi] += v * (1 - ty.w_hi) * tx.w_hi;
          dsrc[ty.hi * w + tx.lo] += v * ty.w_hi * (1 - tx.w_hi);
          dsrc[ty.hi * w + tx.hi] += v * ty.w_hi * tx.w_hi;
        }
      }
    }
  });
}

Var concat_last(const Var& a, const Var& b) {
  require(a.value().rank() == 2 && b.value().rank() == 2 && a.shape()[0] == b.shape()[0],
          "concat_last: operands must be [n, p] and [n, q]");
  const int n = a.shape()[0];
  const int p = a.shape()[1];
  const int q = b.shape()[1];
  Tensor y({n, p + q});
  for (int i = 0; i < n; ++i) {
    std::copy_n(a.value().ptr() + static_cast<std::size_t>(i) * p, p,
                y.ptr() + static_cast<std::size_t>(i) * (p + q));
    std::copy_n(b.value().ptr() + static_cast<std::size_t>(i) * q, q,
                y.ptr() + static_cast<std::size_t>(i) * (p + q) + p);
  }
  return make_result(std::move(y), {a, b}, [n, p, q](Node& self) {
    float* da = grad_of(self, 0);
    float* db = grad_of(self, 1);
    for (int i = 0; i < n; ++i) {
      const float* g = self.grad.ptr() + static_cast<std::size_t>(i) * (p + q);
      if (da)
        for (int j = 0; j < p; ++j) da[static_cast<std::size_t>(i) * p + j] += g[j];
      if (db)
        for (int j = 0; j < q; ++j) db[static_cast<std::size_t>(i) * q + j] += g[p + j];
    }
  });
}

Var cross_entropy(const Var& logits, std::span<const int> labels) {
  require(logits.value().rank() == 2, "cross_entropy: logits must be [b, k]");
  const int b = logits.shape()[0];
  const int k = logits.shape()[1];
  require(static_cast<int>(labels.size()) == b && b > 0, "cross_entropy: label count");
  Tensor probs({b, k});
  double total = 0.0;
  for (int i = 0; i < b; ++i) {
    require(labels[i] >= 0 && labels[i] < k, "cross_entropy: label out of range");
    const float* row = logits.value().ptr() + static_cast<std::size_t>(i) * k;
    const float mx = *std::max_element(row, row + k);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::exp(static_cast<double>(row[j]) - mx);
    const double lse = mx + std::log(sum);
    total += lse - row[labels[i]];
    for (int j = 0; j < k; ++j) probs[i * k + j] = static_cast<float>(std::exp(row[j] - lse));
  }
  Tensor y({1}, static_cast<float>(total / b));
  std::vector<int> ids(labels.begin(), labels.end());
  return make_result(std::move(y), {logits},
                     [b, k, probs = std::move(probs), ids = std::move(ids)](Node& self) {
                       float* dl = grad_of(self, 0);
                       if (!dl) return;
                       const float g = self.grad[0] / static_cast<float>(b);
                       for (int i = 0; i < b; ++i) {
                         for (int j = 0; j < k; ++j) {
                           const float onehot = j == ids[i] ? 1.0f : 0.0f;
                           dl[i * k + j] += g * (probs[i * k + j] - onehot);
                         }
                       }
                     });
}

}  // namespace aigid::nn
