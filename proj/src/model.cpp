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

#include "aigid/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aigid/error.hpp"

namespace aigid {
namespace {

constexpr std::array<std::string_view, 4> kVariantNames = {"VIT", "CNN", "CNN_TO_VIT",
                                                           "CNN_CONCAT_VIT"};

bool starts_with(std::string_view s, std::string_view prefix) { return s.starts_with(prefix); }

}  // namespace

std::string_view variant_name(ModelVariant variant) {
  return kVariantNames[static_cast<int>(variant)];
}

ModelVariant variant_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == name) return static_cast<ModelVariant>(i);
  }
  throw InvalidConfig("unknown model variant: " + std::string(name));
}

ModelConfig ModelConfig::tiny(ModelVariant variant) {
  ModelConfig c;
  c.variant = variant;
  c.image_side = 32;
  c.patch_size = 16;
  c.embed_dim = 64;
  c.depth = 2;
  c.heads = 4;
  c.cnn_feature_dim = 64;
  c.tiny_mode = true;
  return c;
}

int ModelConfig::head_input_width() const {
  switch (variant) {
    case ModelVariant::kVit:
    case ModelVariant::kCnnToVit:
      return embed_dim;
    case ModelVariant::kCnn:
      return cnn_feature_dim;
    case ModelVariant::kCnnConcatVit:
      return embed_dim + cnn_feature_dim;
  }
  return embed_dim;
}

void ModelConfig::validate() const {
  if (image_side <= 0 || patch_size <= 0) throw InvalidConfig("image_side and patch_size must be positive");
  if (image_side % patch_size != 0) {
    throw InvalidConfig("image_side " + std::to_string(image_side) +
                        " is not divisible by patch_size " + std::to_string(patch_size));
  }
  if (embed_dim <= 0 || heads <= 0 || embed_dim % heads != 0) {
    throw InvalidConfig("heads must divide embed_dim");
  }
  if (depth < 0 || mlp_ratio <= 0) throw InvalidConfig("depth/mlp_ratio out of range");
  if (num_classes != kNumClasses) throw InvalidConfig("num_classes must be 6");
  if (uses_cnn()) {
    if (cnn_feature_dim < 4 || cnn_feature_dim % 4 != 0) {
      throw InvalidConfig("cnn_feature_dim must be a positive multiple of 4");
    }
    if (image_side % kCnnTotalStride != 0) {
      throw InvalidConfig("image_side must be divisible by the CNN stride 8");
    }
  }
}

nn::Tensor to_batch(std::span<const Raster> rasters, int side) {
  const int b = static_cast<int>(rasters.size());
  nn::Tensor out({b, 3, side, side});
  const std::size_t plane = static_cast<std::size_t>(side) * side;
  for (int i = 0; i < b; ++i) {
    const Raster& r = rasters[i];
    if (r.height() != side || r.width() != side) {
      throw ShapeMismatch("raster " + std::to_string(r.height()) + "x" +
                          std::to_string(r.width()) + " does not match model side " +
                          std::to_string(side));
    }
    float* dst = out.ptr() + static_cast<std::size_t>(i) * 3 * plane;
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x)
        for (int c = 0; c < 3; ++c) dst[c * plane + static_cast<std::size_t>(y) * side + x] = r.at(y, x, c);
  }
  return out;
}

// --- VisionTransformer -----------------------------------------------------

VisionTransformer::VisionTransformer(const ModelConfig& config, RngStream& rng)
    : patch_size_(config.patch_size), token_count_(config.token_count()) {
  const int d = config.embed_dim;
  patch_embed_ = nn::Linear(3 * config.patch_size * config.patch_size, d, rng);
  cls_token_ = nn::Var(nn::truncated_normal({d}, 0.02f, rng), true);
  pos_embed_ = nn::Var(nn::truncated_normal({token_count_, d}, 0.02f, rng), true);
  blocks_.reserve(config.depth);
  for (int i = 0; i < config.depth; ++i) {
    blocks_.emplace_back(d, config.heads, d * config.mlp_ratio, rng);
  }
  norm_ = nn::LayerNorm(d);
}

nn::Var VisionTransformer::patchify(const nn::Var& images) const {
  const nn::Var patches = nn::extract_patches(images, patch_size_);
  if (patches.shape()[1] + 1 != token_count_) {
    throw ShapeMismatch("image yields " + std::to_string(patches.shape()[1]) +
                        " patches, model expects " + std::to_string(token_count_ - 1));
  }
  const nn::Var tokens = nn::prepend_token(patch_embed_.forward(patches), cls_token_);
  return nn::add_broadcast(tokens, pos_embed_);
}

nn::Var VisionTransformer::features(const nn::Var& images) const {
  nn::Var x = patchify(images);
  for (const auto& block : blocks_) x = block.forward(x);
  return nn::select_token(norm_.forward(x), 0);
}

void VisionTransformer::collect(nn::ParameterList& out, const std::string& prefix) const {
  patch_embed_.collect(out, prefix + ".patch_embed");
  out.push_back({prefix + ".cls_token", cls_token_, true});
  out.push_back({prefix + ".pos_embed", pos_embed_, true});
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks_[i].collect(out, prefix + ".blocks." + std::to_string(i));
  }
  norm_.collect(out, prefix + ".norm");
}

// --- ResidualCnn -------------------------------------------------------------

ResidualCnn::ResidualCnn(int feature_dim, RngStream& rng) {
  const int widths[4] = {feature_dim / 4, feature_dim / 4, feature_dim / 2, feature_dim};
  stem_ = nn::Conv2d(3, widths[0], 3, 1, 1, rng);
  for (int i = 0; i < 3; ++i) {
    Block b;
    b.conv1 = nn::Conv2d(widths[i], widths[i + 1], 3, 2, 1, rng);
    b.conv2 = nn::Conv2d(widths[i + 1], widths[i + 1], 3, 1, 1, rng);
    b.skip = nn::Conv2d(widths[i], widths[i + 1], 1, 2, 0, rng);
    blocks_.push_back(std::move(b));
  }
}

CnnFeatures ResidualCnn::forward(const nn::Var& images) const {
  nn::Var x = nn::relu(stem_.forward(images));
  for (const auto& b : blocks_) {
    const nn::Var main = b.conv2.forward(nn::relu(b.conv1.forward(x)));
    x = nn::relu(nn::add(main, b.skip.forward(x)));
  }
  return {x, nn::global_avg_pool(x)};
}

void ResidualCnn::collect(nn::ParameterList& out, const std::string& prefix) const {
  stem_.collect(out, prefix + ".stem");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = prefix + ".blocks." + std::to_string(i);
    blocks_[i].conv1.collect(out, p + ".conv1");
    blocks_[i].conv2.collect(out, p + ".conv2");
    blocks_[i].skip.collect(out, p + ".skip");
  }
}

// --- Classifier --------------------------------------------------------------

Classifier::Classifier(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  // Separate streams keep each branch's initialisation independent of the others.
  if (config_.uses_vit()) {
    RngStream rng(derive_seed(seed, {1}));
    vit_.emplace(config_, rng);
  }
  if (config_.uses_cnn()) {
    RngStream rng(derive_seed(seed, {2}));
    cnn_.emplace(config_.cnn_feature_dim, rng);
  }
  if (config_.variant == ModelVariant::kCnnToVit) {
    RngStream rng(derive_seed(seed, {3}));
    bridge_.emplace(config_.cnn_feature_dim, 3, 1, 1, 0, rng);
  }
  RngStream rng(derive_seed(seed, {4}));
  head_ = nn::Linear(config_.head_input_width(), config_.num_classes, rng, 0.02f);
}

void Classifier::check_input(const nn::Var& images) const {
  const auto& s = images.shape();
  if (s.size() != 4 || s[1] != 3 || s[2] != config_.image_side || s[3] != config_.image_side) {
    throw ShapeMismatch("expected [b, 3, " + std::to_string(config_.image_side) + ", " +
                        std::to_string(config_.image_side) + "], got " + nn::shape_string(s));
  }
}

nn::Var Classifier::patchify(const nn::Var& images) const {
  if (!vit_) throw InvalidConfig("variant has no transformer branch");
  check_input(images);
  return vit_->patchify(images);
}

nn::Var Classifier::forward_vit(const nn::Var& images) const {
  if (config_.variant != ModelVariant::kVit) throw InvalidConfig("forward_vit needs variant VIT");
  check_input(images);
  return head_.forward(vit_->features(images));
}

CnnOutputs Classifier::forward_cnn(const nn::Var& images) const {
  if (config_.variant != ModelVariant::kCnn) throw InvalidConfig("forward_cnn needs variant CNN");
  check_input(images);
  CnnFeatures f = cnn_->forward(images);
  nn::Var logits = head_.forward(f.pooled);
  return {std::move(f.feature_map), std::move(f.pooled), std::move(logits)};
}

nn::Var Classifier::forward_cnn_to_vit(const nn::Var& images) const {
  if (config_.variant != ModelVariant::kCnnToVit) {
    throw InvalidConfig("forward_cnn_to_vit needs variant CNN_TO_VIT");
  }
  check_input(images);
  const CnnFeatures f = cnn_->forward(images);
  const nn::Var planes = bridge_->forward(f.feature_map);
  const nn::Var upscaled = nn::resize_bilinear(planes, config_.image_side, config_.image_side);
  return head_.forward(vit_->features(upscaled));
}

nn::Var Classifier::forward_cnn_concat_vit(const nn::Var& images) const {
  if (config_.variant != ModelVariant::kCnnConcatVit) {
    throw InvalidConfig("forward_cnn_concat_vit needs variant CNN_CONCAT_VIT");
  }
  check_input(images);
  const CnnFeatures f = cnn_->forward(images);
  return head_.forward(nn::concat_last(vit_->features(images), f.pooled));
}

nn::Var Classifier::forward(const nn::Var& images) const {
  switch (config_.variant) {
    case ModelVariant::kVit: return forward_vit(images);
    case ModelVariant::kCnn: return forward_cnn(images).logits;
    case ModelVariant::kCnnToVit: return forward_cnn_to_vit(images);
    case ModelVariant::kCnnConcatVit: return forward_cnn_concat_vit(images);
  }
  throw InvalidConfig("unknown variant");
}

nn::Tensor Classifier::infer(const nn::Tensor& images) const {
  nn::NoGradGuard guard;
  nn::Tensor logits = forward(nn::Var(images)).value();
  for (float v : logits.data()) {
    if (!std::isfinite(v)) throw NonFiniteOutput("model produced non-finite logits");
  }
  return logits;
}

nn::ParameterList Classifier::parameters() const {
  nn::ParameterList out;
  if (vit_) vit_->collect(out, "vit");
  if (cnn_) cnn_->collect(out, "cnn");
  if (bridge_) bridge_->collect(out, "bridge");
  head_.collect(out, "head");
  return out;
}

Checkpoint Classifier::to_checkpoint() const {
  Checkpoint ckpt;
  for (const auto& p : parameters()) ckpt.tensors.emplace(p.name, p.var.value());
  ckpt.metadata["variant"] = std::string(variant_name(config_.variant));
  return ckpt;
}

void Classifier::load_checkpoint(const Checkpoint& checkpoint) {
  auto params = parameters();
  std::set<std::string> known;
  for (const auto& p : params) {
    known.insert(p.name);
    const auto it = checkpoint.tensors.find(p.name);
    if (it == checkpoint.tensors.end()) throw CheckpointMismatch(p.name, "missing from checkpoint");
    if (it->second.shape() != p.var.shape()) {
      throw CheckpointMismatch(p.name, "shape " + nn::shape_string(it->second.shape()) +
                                           " but model expects " + nn::shape_string(p.var.shape()));
    }
  }
  for (const auto& [name, tensor] : checkpoint.tensors) {
    if (!known.contains(name)) throw CheckpointMismatch(name, "not a parameter of this model");
  }
  for (auto& p : params) p.var.mutable_value() = checkpoint.tensors.at(p.name);
}

Classifier load_pretrained(const ModelConfig& config, const std::filesystem::path& checkpoint,
                           std::uint64_t seed) {
  Classifier model(config, seed);
  const Checkpoint ckpt = aigid::load_checkpoint(checkpoint);
  const bool take_cnn = config.variant == ModelVariant::kCnn || config.pretrained_cnn;
  for (auto& p : model.parameters()) {
    const bool backbone = starts_with(p.name, "vit.") || (take_cnn && starts_with(p.name, "cnn."));
    if (!backbone) continue;
    const auto it = ckpt.tensors.find(p.name);
    if (it == ckpt.tensors.end()) throw CheckpointMismatch(p.name, "missing from checkpoint");
    if (it->second.shape() != p.var.shape()) {
      throw CheckpointMismatch(p.name, "shape " + nn::shape_string(it->second.shape()) +
                                           " but model expects " + nn::shape_string(p.var.shape()));
    }
    p.var.mutable_value() = it->second;
  }
  return model;
}

}  // namespace aigid
