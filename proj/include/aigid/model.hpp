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

#ifndef AIGID_MODEL_HPP_
#define AIGID_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aigid/checkpoint.hpp"
#include "aigid/data.hpp"
#include "aigid/layers.hpp"
#include "aigid/raster.hpp"

namespace aigid {

enum class ModelVariant : int {
  kVit = 0,
  kCnn,
  // CNN feature map projected to three planes, upsampled, and encoded by the transformer.
  kCnnToVit,
  // Class-token representation concatenated with the pooled CNN vector.
  kCnnConcatVit,
};

std::string_view variant_name(ModelVariant variant);
// Accepts VIT, CNN, CNN_TO_VIT, CNN_CONCAT_VIT. Throws InvalidConfig.
ModelVariant variant_from_name(std::string_view name);

struct ModelConfig {
  ModelVariant variant = ModelVariant::kVit;
  int image_side = 224;
  int patch_size = 16;
  int embed_dim = 768;
  int depth = 12;
  int heads = 12;
  int mlp_ratio = 4;
  int num_classes = kNumClasses;
  // Pooled width of the residual CNN; stage widths are /4, /2, /1 of it.
  int cnn_feature_dim = 64;
  std::string pretrained_checkpoint;
  // Fusion variants: also take `cnn.*` tensors from the pretrained checkpoint.
  bool pretrained_cnn = false;
  bool tiny_mode = false;

  // Desk-scale topology: 32px images, 16px patches, width 64, depth 2, 4 heads.
  static ModelConfig tiny(ModelVariant variant);

  int patches_per_side() const { return image_side / patch_size; }
  int patch_count() const { return patches_per_side() * patches_per_side(); }
  // Patch tokens plus the class token.
  int token_count() const { return patch_count() + 1; }

  bool uses_vit() const { return variant != ModelVariant::kCnn; }
  bool uses_cnn() const { return variant != ModelVariant::kVit; }
  int head_input_width() const;

  // Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Overall spatial stride of the residual CNN.
inline constexpr int kCnnTotalStride = 8;

// Packs rasters into a [batch, 3, side, side] tensor. Throws ShapeMismatch.
nn::Tensor to_batch(std::span<const Raster> rasters, int side);

class VisionTransformer {
 public:
  VisionTransformer() = default;
  VisionTransformer(const ModelConfig& config, RngStream& rng);

  // [b, 3, s, s] -> [b, tokens, embed_dim] with class token and positions.
  nn::Var patchify(const nn::Var& images) const;
  // Final class-token representation, [b, embed_dim].
  nn::Var features(const nn::Var& images) const;
  void collect(nn::ParameterList& out, const std::string& prefix) const;

 private:
  int patch_size_ = 16;
  int token_count_ = 0;
  nn::Linear patch_embed_;
  nn::Var cls_token_;
  nn::Var pos_embed_;
  std::vector<nn::EncoderBlock> blocks_;
  nn::LayerNorm norm_;
};

struct CnnFeatures {
  nn::Var feature_map;  // [b, cnn_feature_dim, s/8, s/8]
  nn::Var pooled;       // [b, cnn_feature_dim]
};

// Stem plus three stride-2 residual blocks.
class ResidualCnn {
 public:
  ResidualCnn() = default;
  ResidualCnn(int feature_dim, RngStream& rng);

  CnnFeatures forward(const nn::Var& images) const;
  void collect(nn::ParameterList& out, const std::string& prefix) const;

 private:
  struct Block {
    nn::Conv2d conv1;
    nn::Conv2d conv2;
    nn::Conv2d skip;
  };
  nn::Conv2d stem_;
  std::vector<Block> blocks_;
};

struct CnnOutputs {
  nn::Var feature_map;
  nn::Var pooled;
  nn::Var logits;
};

// One of the four classifier variants, each ending in a 6-way linear head.
// Parameters live in shared graph nodes, so instances are move-only.
class Classifier {
 public:
  Classifier(const ModelConfig& config, std::uint64_t seed);
  Classifier(Classifier&&) = default;
  Classifier& operator=(Classifier&&) = default;
  Classifier(const Classifier&) = delete;
  Classifier& operator=(const Classifier&) = delete;

  const ModelConfig& config() const noexcept { return config_; }

  // [b, 3, s, s] normalised images -> [b, num_classes] logits.
  nn::Var forward(const nn::Var& images) const;
  nn::Var forward(const nn::Tensor& images) const { return forward(nn::Var(images)); }

  // Variant-specific entry points; each throws InvalidConfig when the
  // variant lacks the branch.
  nn::Var patchify(const nn::Var& images) const;
  nn::Var forward_vit(const nn::Var& images) const;
  CnnOutputs forward_cnn(const nn::Var& images) const;
  nn::Var forward_cnn_to_vit(const nn::Var& images) const;
  nn::Var forward_cnn_concat_vit(const nn::Var& images) const;

  // Gradient-free forward with a finiteness check. Throws NonFiniteOutput.
  nn::Tensor infer(const nn::Tensor& images) const;

  // Every trainable tensor with a stable dotted name, in registration order.
  nn::ParameterList parameters() const;

  Checkpoint to_checkpoint() const;
  // Exact load: names and shapes must match the model in both directions.
  // Throws CheckpointMismatch naming the first offending tensor.
  void load_checkpoint(const Checkpoint& checkpoint);

 private:
  void check_input(const nn::Var& images) const;

  ModelConfig config_;
  std::optional<VisionTransformer> vit_;
  std::optional<ResidualCnn> cnn_;
  std::optional<nn::Conv2d> bridge_;
  nn::Linear head_;
};

// Fresh model whose backbone (`vit.*`, plus `cnn.*` for the CNN variant or
// when config.pretrained_cnn) is copied from the checkpoint. The head and
// the CNN-to-ViT bridge stay freshly initialised; checkpoint tensors outside
// the backbone are ignored. Throws CheckpointMismatch.
Classifier load_pretrained(const ModelConfig& config, const std::filesystem::path& checkpoint,
                           std::uint64_t seed);

}  // namespace aigid

#endif  // AIGID_MODEL_HPP_
