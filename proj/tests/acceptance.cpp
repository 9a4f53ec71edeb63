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

// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   aigid_acceptance [--only NAME]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aigid/augment.hpp"
#include "aigid/checkpoint.hpp"
#include "aigid/config.hpp"
#include "aigid/eval.hpp"
#include "aigid/model.hpp"
#include "aigid/perturb.hpp"
#include "aigid/toy.hpp"
#include "aigid/train.hpp"
#include "metric_oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace aigid;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; the first few are kept for the report line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool in_unit_range(const Raster& r) {
  for (float v : r.values()) {
    if (!(v >= 0.0f && v <= 1.0f)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome metric_oracle() {
  Check check;
  RngStream rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [preds, golds] = testing::random_label_pair(rng, 50);
    const auto got = f1_macro(preds, golds);
    const auto want = testing::oracle_multiclass(preds, golds);
    check.expect(got.score == want.macro, "macro trial " + std::to_string(trial));
    for (int c = 0; c < kNumClasses; ++c) {
      check.expect(got.per_class[c] == want.per_class[c], "class trial " + std::to_string(trial));
    }
    std::vector<BinaryLabel> bp, bg;
    for (auto p : preds) bp.push_back(binary_label(p));
    for (auto g : golds) bg.push_back(binary_label(g));
    check.expect(f1_binary(bp, bg) == testing::oracle_binary(bp, bg),
                 "binary trial " + std::to_string(trial));
  }
  return check.outcome("1000 pairs, exact match");
}

Outcome augmentation_properties() {
  Check check;
  RngStream inputs(77);
  const AugmentationSpec spec;
  for (int i = 0; i < 200; ++i) {
    const int h = static_cast<int>(inputs.uniform_int(4, 40));
    const int w = static_cast<int>(inputs.uniform_int(4, 40));
    const Raster x = testing::random_raster(h, w, inputs);
    const std::uint64_t seed = inputs.next_u64();
    const std::string at = " (input " + std::to_string(i) + ")";
    auto common = [&](const Raster& y, const std::string& op) {
      check.expect(y.same_shape(x), op + " shape" + at);
      check.expect(in_unit_range(y), op + " range" + at);
    };

    // flips
    common(hflip(x), "hflip");
    common(vflip(x), "vflip");
    check.expect(hflip(hflip(x)) == x, "hflip involution" + at);
    check.expect(vflip(vflip(x)) == x, "vflip involution" + at);

    // brightness
    const double factor = inputs.uniform(spec.brightness_range.lo, spec.brightness_range.hi);
    common(color_jitter(x, factor), "color_jitter");
    check.expect(color_jitter(x, 1.0) == x, "color_jitter(1) identity" + at);
    check.expect(color_jitter(x, factor) == color_jitter(x, factor), "color_jitter determinism" + at);

    // rotation
    const double angle = inputs.uniform(spec.rotation_range_deg.lo, spec.rotation_range_deg.hi);
    common(rotate(x, angle), "rotate");
    check.expect(rotate(x, 0.0) == x, "rotate(0) identity" + at);
    check.expect(rotate(x, angle) == rotate(x, angle), "rotate determinism" + at);

    // noise
    const double sigma = inputs.uniform(0.0, spec.noise_sigma_max);
    RngStream n1(seed), n2(seed), n0(seed);
    const Raster noisy = gaussian_noise(x, sigma, n1);
    common(noisy, "gaussian_noise");
    check.expect(noisy == gaussian_noise(x, sigma, n2), "gaussian_noise determinism" + at);
    check.expect(gaussian_noise(x, 0.0, n0) == x, "gaussian_noise(0) identity" + at);

    // crop
    const double scale = inputs.uniform(spec.crop_scale_range.lo, spec.crop_scale_range.hi);
    RngStream c1(seed), c2(seed), c0(seed);
    const Raster cropped = random_crop(x, scale, c1);
    common(cropped, "random_crop");
    check.expect(cropped == random_crop(x, scale, c2), "random_crop determinism" + at);
    const double frame_aspect = static_cast<double>(w) / h;
    check.expect(random_crop(x, 1.0, frame_aspect, c0) == x, "random_crop full-frame identity" + at);

    // JPEG
    const int quality = static_cast<int>(
        inputs.uniform_int(static_cast<long>(spec.jpeg_quality_range.lo),
                           static_cast<long>(spec.jpeg_quality_range.hi)));
    const Raster jpeg = jpeg_compress(x, quality);
    common(jpeg, "jpeg_compress");
    check.expect(jpeg == jpeg_compress(x, quality), "jpeg_compress determinism" + at);

    // composed
    RngStream k1(seed), k2(seed);
    const Raster composed = compose(x, spec, k1);
    common(composed, "compose");
    check.expect(composed == compose(x, spec, k2), "compose determinism" + at);
  }
  return check.outcome("200 inputs x 7 operators plus compose");
}

Outcome range_conformance() {
  Check check;
  const AugmentationSpec spec;
  const Raster x(8, 8, 0.5f);
  RngStream rng(4242);
  constexpr int kDraws = 10000;
  std::map<AugmentOp, long> applied;
  for (int i = 0; i < kDraws; ++i) {
    std::vector<AugmentDraw> trace;
    compose(x, spec, rng, &trace);
    check.expect(trace.size() == kComposeOrder.size(), "trace length");
    for (const AugmentDraw& d : trace) {
      if (!d.applied) continue;
      applied[d.op]++;
      if (!d.parameter) continue;
      const double v = *d.parameter;
      const std::string name(augment_op_name(d.op));
      switch (d.op) {
        case AugmentOp::kJpegCompress:
          check.expect(v >= 30 && v <= 70 && v == std::round(v), name + " " + std::to_string(v));
          break;
        case AugmentOp::kColorJitter:
          check.expect(v >= 0.45 && v <= 0.55, name + " " + std::to_string(v));
          break;
        case AugmentOp::kRotate:
          check.expect(v >= 0.0 && v <= 90.0, name + " " + std::to_string(v));
          break;
        case AugmentOp::kGaussianNoise:
          check.expect(v >= 0.0 && v <= 0.3, name + " " + std::to_string(v));
          break;
        default:
          break;
      }
    }
  }
  const double p = spec.apply_prob;
  const double sd = std::sqrt(p * (1.0 - p) / kDraws);
  double worst = 0.0;
  for (AugmentOp op : kComposeOrder) {
    const double rate = static_cast<double>(applied[op]) / kDraws;
    const double z = std::abs(rate - p) / sd;
    worst = std::max(worst, z);
    check.expect(z <= 3.0, std::string(augment_op_name(op)) + " rate " + fmt("%.4f", rate));
  }
  return check.outcome("10000 draws, worst rate deviation " + fmt("%.2f", worst) + " sd");
}

double grad_l1(const nn::Var& v) {
  double s = 0.0;
  for (float g : v.grad().data()) s += std::abs(g);
  return s;
}

Outcome topology() {
  Check check;
  ModelConfig full;
  check.expect(full.token_count() == 197, "224/16 tokens");
  ModelConfig full_small = full;
  full_small.depth = 1;
  full_small.embed_dim = 48;
  full_small.heads = 4;
  RngStream rng(5);
  nn::Tensor big({1, 3, 224, 224});
  for (float& v : big.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  check.expect(Classifier(full_small, 1).patchify(nn::Var(big)).shape() == nn::Shape{1, 197, 48},
               "patchify at 224/16");

  const ModelConfig tiny = ModelConfig::tiny(ModelVariant::kVit);
  check.expect(tiny.token_count() == 5, "32/16 tokens");
  nn::Tensor x({6, 3, 32, 32});
  for (float& v : x.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  check.expect(Classifier(tiny, 1).patchify(nn::Var(x)).shape() == nn::Shape{6, 5, 64},
               "patchify at 32/16");

  const std::vector<int> labels = {0, 1, 2, 3, 4, 5};
  for (ModelVariant v : {ModelVariant::kVit, ModelVariant::kCnn, ModelVariant::kCnnToVit,
                         ModelVariant::kCnnConcatVit}) {
    const ModelConfig c = ModelConfig::tiny(v);
    const Classifier m(c, 2);
    const std::string name(variant_name(v));
    check.expect(m.infer(x).shape() == nn::Shape{6, 6}, name + " logits width");
    if (v == ModelVariant::kCnnConcatVit) {
      check.expect(c.head_input_width() == c.embed_dim + c.cnn_feature_dim, "concat head width");
      for (const auto& p : m.parameters()) {
        if (p.name == "head.weight") {
          check.expect(p.var.shape() == nn::Shape{c.embed_dim + c.cnn_feature_dim, 6},
                       "concat head weight shape");
        }
      }
    }
    if (v == ModelVariant::kCnnToVit || v == ModelVariant::kCnnConcatVit) {
      nn::backward(nn::cross_entropy(m.forward(x), labels));
      double cnn = 0.0, vit = 0.0;
      for (const auto& p : m.parameters()) {
        if (p.name.starts_with("cnn.")) cnn += grad_l1(p.var);
        if (p.name.starts_with("vit.")) vit += grad_l1(p.var);
        check.expect(grad_l1(p.var) > 0.0, name + " no gradient at " + p.name);
      }
      check.expect(cnn > 0.0 && std::isfinite(cnn), name + " CNN branch gradient");
      check.expect(vit > 0.0 && std::isfinite(vit), name + " ViT branch gradient");
    }
  }
  return check.outcome("tokens 197/5, 4 variants x 6 logits, concat head 128, both branches train");
}

struct OverfitRun {
  Checkpoint weights;
  long first_step = -1;
  double final_f1 = 0.0;
  long steps = 0;
};

OverfitRun overfit_once(const std::vector<LabeledImage>& corpus) {
  TrainConfig tc;
  tc.learning_rate = 1e-3;
  tc.batch_size = 16;
  tc.epochs = 50;  // 60 images / 16 -> 4 steps per epoch -> 200 steps
  tc.augment_enabled = false;
  tc.seed = 3;
  Classifier model(ModelConfig::tiny(ModelVariant::kVit), 2);
  OverfitRun run;
  // Validating on the training set itself tracks train macro-F1.
  const FitResult r = fit(model, corpus, corpus, tc, [&](const HistoryRecord& h, bool) {
    if (run.first_step < 0 && h.val_f1_task_b >= 0.95) run.first_step = h.step;
  });
  run.steps = r.state.step;
  run.weights = model.to_checkpoint();
  run.final_f1 = evaluate(model, corpus).f1_task_b;
  return run;
}

Outcome overfit() {
  Check check;
  const auto corpus = make_toy_corpus(10, 32, 1);
  check.expect(corpus.size() == 60, "corpus size");
  const OverfitRun a = overfit_once(corpus);
  const OverfitRun b = overfit_once(corpus);
  check.expect(a.steps <= 200, "ran " + std::to_string(a.steps) + " steps");
  check.expect(a.first_step >= 0 && a.first_step <= 200,
               "train macro-F1 never reached 0.95 (final " + fmt("%.3f", a.final_f1) + ")");
  check.expect(a.final_f1 >= 0.95, "final train macro-F1 " + fmt("%.3f", a.final_f1));
  check.expect(a.weights.tensors == b.weights.tensors, "weights differ between identical runs");
  check.expect(a.first_step == b.first_step, "first passing step differs between runs");
  return check.outcome("train macro-F1 >= 0.95 at step " + std::to_string(a.first_step) +
                       ", final " + fmt("%.3f", a.final_f1) + " after " + std::to_string(a.steps) +
                       " steps, repeatable");
}

// NOISE-mode Task-B F1 from the ablation runs, summed over seeds.
struct NoiseModeScores {
  bool ran = false;
  double augmented = 0.0;
  double plain = 0.0;
} noise_scores;

Outcome ablation() {
  Check check;
  testing::TempDir dir;
  const fs::path manifest_path = write_toy_corpus(dir / "corpus", 100, 32, 1);
  const Manifest manifest = load_manifest(manifest_path);
  double sum_gap = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    RunConfig rc;
    rc.seed = seed;
    rc.model = ModelConfig::tiny(ModelVariant::kVit);
    rc.train.learning_rate = 1e-3;
    rc.train.batch_size = 16;
    rc.train.epochs = 20;
    rc.apply_seeds();
    const DatasetSplits splits = split_dataset(manifest, rc.data.fractions, rc.split_seed(), 32);
    const auto perturbed = build_perturbed_set(splits.test, rc.perturb);
    double f[2] = {0.0, 0.0};
    for (int aug = 0; aug < 2; ++aug) {
      TrainConfig tc = rc.train;
      tc.augment_enabled = aug == 1;
      Classifier model(rc.model, rc.init_seed());
      const FitResult r = fit(model, splits.train, splits.val, tc);
      model.load_checkpoint(r.best_weights);
      const auto reports = per_mode_report(model, perturbed);
      f[aug] = reports.at("ALL").f1_task_b;
      (aug ? noise_scores.augmented : noise_scores.plain) += reports.at("NOISE").f1_task_b / 3.0;
    }
    per_seed << " seed" << seed << " " << fmt("%.3f", f[1]) << "/" << fmt("%.3f", f[0]);
    sum_gap += f[1] - f[0];
  }
  noise_scores.ran = true;
  const double gap = sum_gap / 3.0;
  check.expect(gap >= 0.05, "mean gap " + fmt("%.4f", gap) + " <" + per_seed.str());
  return check.outcome("mean Task-B gap " + fmt("%.4f", gap) + " (aug/no-aug:" + per_seed.str() +
                       ")");
}

Outcome noise_mode_direction() {
  if (!noise_scores.ran) ablation();
  Check check;
  check.expect(noise_scores.augmented >= noise_scores.plain,
               "augmented " + fmt("%.4f", noise_scores.augmented) + " < plain " +
                   fmt("%.4f", noise_scores.plain));
  return check.outcome("NOISE Task-B mean " + fmt("%.4f", noise_scores.augmented) + " vs " +
                       fmt("%.4f", noise_scores.plain) + " (from the ablation runs)");
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(AIGID_CLI_PATH) + " " + args + " >>" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  Check check;
  testing::TempDir dir;
  const fs::path log = dir / "cli.log";
  const std::string config = std::string(AIGID_SOURCE_DIR) + "/configs/toy.json";
  check.expect(run_cli("toy-corpus --output " + (dir / "corpus").string() +
                           " --per-class 10 --side 32 --seed 5",
                       log) == 0,
               "toy-corpus");
  for (const std::string run : {"a", "b"}) {
    const std::string common =
        " --config " + config + " --seed 11 --tiny --output " + (dir / run).string();
    check.expect(run_cli("prepare" + common + " --manifest " + (dir / "corpus/manifest.tsv").string(),
                         log) == 0,
                 "prepare " + run);
    check.expect(run_cli("train" + common, log) == 0, "train " + run);
    check.expect(run_cli("perturb" + common, log) == 0, "perturb " + run);
    check.expect(run_cli("evaluate" + common + " --manifest " +
                             (dir / run / "perturbed/perturbed.tsv").string(),
                         log) == 0,
                 "evaluate " + run);
  }
  const std::vector<std::string> files = {"train.tsv",
                                          "val.tsv",
                                          "test.tsv",
                                          "split.json",
                                          "perturbed/perturbed.tsv",
                                          "checkpoints/history.jsonl",
                                          "report.json"};
  for (const auto& f : files) {
    const fs::path a = dir / "a" / f, b = dir / "b" / f;
    check.expect(fs::exists(a), f + " missing");
    check.expect(fs::exists(a) && testing::read_text(a) == testing::read_text(b), f + " differs");
  }
  if (!fs::exists(dir / "a/report.json")) {
    check.expect(false, "cli log: " + testing::read_text(log).substr(0, 300));
  }
  return check.outcome(std::to_string(files.size()) + " artifacts byte-identical across two runs");
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc == 3 && std::string(argv[1]) == "--only" ? argv[2] : "";
  const std::vector<Criterion> criteria = {
      {"metric-oracle-equivalence", 10, metric_oracle},
      {"augmentation-property-suite", 60, augmentation_properties},
      {"range-conformance", 600, range_conformance},
      {"topology-checks", 60, topology},
      {"overfit-sanity", 300, overfit},
      {"augmentation-ablation-direction", 1200, ablation},
      {"noise-mode-direction", 1200, noise_mode_direction},
      {"end-to-end-determinism", 600, cli_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; took longer than " + fmt("%.0f", c.limit_seconds) + " s";
    }
    failed += !o.pass;
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
