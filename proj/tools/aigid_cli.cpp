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

// aigid: command-line driver for the AI-generated image detection pipeline.
//
//   aigid prepare  --config run.json            split a manifest into train/val/test
//   aigid train    --config run.json [--tiny]   fine-tune and keep the best checkpoint
//   aigid perturb  --config run.json            build the perturbed test set
//   aigid evaluate --config run.json [--table] [--plot]
//   aigid report   --report out/report.json     render table + bar chart
//   aigid toy-corpus --output data/toy          synthetic six-class corpus
//
// Exit codes: 0 ok, 2 data error, 3 non-finite training loss,
// 4 checkpoint/config mismatch, 1 anything else.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aigid/checkpoint.hpp"
#include "aigid/config.hpp"
#include "aigid/data.hpp"
#include "aigid/error.hpp"
#include "aigid/eval.hpp"
#include "aigid/image_io.hpp"
#include "aigid/model.hpp"
#include "aigid/perturb.hpp"
#include "aigid/toy.hpp"
#include "aigid/train.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  bool tiny = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Run configuration (JSON)");
  cmd->add_option("--seed", opts.seed, "Root seed (overrides the config)");
  cmd->add_option("--output", opts.output, "Output directory (overrides the config)");
  cmd->add_flag("--tiny", opts.tiny, "Force the desk-scale model topology");
}

aigid::RunConfig resolve_config(const CommonOptions& opts) {
  aigid::RunConfig cfg = opts.config.empty() ? aigid::RunConfig{} : aigid::load_run_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (!opts.output.empty()) cfg.output_dir = opts.output;
  if (opts.tiny) {
    const auto keep = cfg.model;
    cfg.model = aigid::ModelConfig::tiny(keep.variant);
    cfg.model.pretrained_checkpoint = keep.pretrained_checkpoint;
    cfg.model.pretrained_cnn = keep.pretrained_cnn;
  }
  cfg.apply_seeds();
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  aigid::write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string absolute_dir(const fs::path& p) {
  return fs::weakly_canonical(fs::absolute(p)).string();
}

ordered_json class_counts(const std::vector<aigid::ManifestEntry>& entries) {
  std::array<long, aigid::kNumClasses> counts{};
  for (const auto& e : entries) ++counts[aigid::class_id(e.label)];
  ordered_json per_class = ordered_json::object();
  for (int c = 0; c < aigid::kNumClasses; ++c) {
    per_class[std::string(aigid::kClassNames[c])] = counts[c];
  }
  return {{"total", entries.size()}, {"per_class", per_class}};
}

// --- prepare ---------------------------------------------------------------

int cmd_prepare(const CommonOptions& common, const std::string& manifest_override) {
  auto cfg = resolve_config(common);
  if (!manifest_override.empty()) cfg.data.manifest = manifest_override;
  if (cfg.data.manifest.empty()) throw aigid::InvalidConfig("no manifest given (data.manifest or --manifest)");

  const aigid::Manifest manifest = aigid::load_manifest(cfg.data.manifest);
  for (const auto& entry : manifest.entries) aigid::read_image(manifest.resolve(entry));

  const auto split = aigid::split_entries(manifest, cfg.data.fractions, cfg.split_seed());
  const std::string root = absolute_dir(manifest.root);
  const std::vector<std::string> header = {"root seed " + std::to_string(cfg.seed)};
  fs::create_directories(cfg.output_dir);
  const std::array<std::pair<const char*, const std::vector<aigid::ManifestEntry>*>, 3> parts = {
      {{"train", &split.train}, {"val", &split.val}, {"test", &split.test}}};
  ordered_json counts;
  for (const auto& [name, entries] : parts) {
    aigid::Manifest out{manifest.root, *entries};
    aigid::save_manifest(cfg.output_dir / (std::string(name) + ".tsv"), out, root, header);
    counts[name] = class_counts(*entries);
  }
  ordered_json record;
  record["seed"] = cfg.seed;
  record["split_seed"] = cfg.split_seed();
  record["fractions"] = {cfg.data.fractions.train, cfg.data.fractions.val, cfg.data.fractions.test};
  record["manifest"] = absolute_dir(cfg.data.manifest);
  record["counts"] = counts;
  write_text(cfg.output_dir / "split.json", record.dump(2) + "\n");
  std::cout << "split " << manifest.entries.size() << " images: train " << split.train.size()
            << ", val " << split.val.size() << ", test " << split.test.size() << "\n";
  return 0;
}

// --- train -----------------------------------------------------------------

int cmd_train(const CommonOptions& common, bool no_augment, std::string train_manifest,
              std::string val_manifest) {
  auto cfg = resolve_config(common);
  if (no_augment) cfg.train.augment_enabled = false;
  if (train_manifest.empty()) train_manifest = (cfg.output_dir / "train.tsv").string();
  if (val_manifest.empty()) val_manifest = (cfg.output_dir / "val.tsv").string();
  cfg.train.checkpoint_dir = cfg.output_dir / "checkpoints";

  const int side = cfg.model.image_side;
  const auto train_m = aigid::load_manifest(train_manifest);
  const auto val_m = aigid::load_manifest(val_manifest);
  const auto train = aigid::load_images(train_m, train_m.entries, aigid::Split::kTrain, side);
  const auto val = aigid::load_images(val_m, val_m.entries, aigid::Split::kVal, side);

  aigid::Classifier model =
      cfg.model.pretrained_checkpoint.empty()
          ? aigid::Classifier(cfg.model, cfg.init_seed())
          : aigid::load_pretrained(cfg.model, cfg.model.pretrained_checkpoint, cfg.init_seed());

  ordered_json header;
  header["root_seed"] = cfg.seed;
  header["model"] = aigid::model_config_to_json(cfg.model);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "training " << aigid::variant_name(cfg.model.variant) << " on " << train.size()
            << " images (augment " << (cfg.train.augment_enabled ? "on" : "off") << ")\n";
  const auto result = aigid::fit(
      model, train, val, cfg.train,
      [](const aigid::HistoryRecord& r, bool improved) {
        std::cout << "step " << r.step << " epoch " << r.epoch << " loss " << r.train_loss
                  << " val_f1_task_a " << r.val_f1_task_a << " val_f1_task_b " << r.val_f1_task_b
                  << (improved ? " *" : "") << "\n";
      },
      header);
  if (!result.best_checkpoint.empty()) {
    aigid::Checkpoint best = result.best_weights;
    best.metadata["root_seed"] = std::to_string(cfg.seed);
    aigid::save_checkpoint(result.best_checkpoint, best);
  }
  std::cout << result.best_checkpoint.string() << "\n";
  return 0;
}

// --- perturb ---------------------------------------------------------------

int cmd_perturb(const CommonOptions& common, std::string manifest_path) {
  auto cfg = resolve_config(common);
  if (manifest_path.empty()) manifest_path = (cfg.output_dir / "test.tsv").string();
  const auto manifest = aigid::load_manifest(manifest_path);
  std::vector<aigid::LabeledImage> images;
  images.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    const auto path = manifest.resolve(e);
    images.push_back({aigid::read_image(path), e.label, path.string(), aigid::Split::kTest, {}});
  }
  const fs::path out_dir = cfg.output_dir / "perturbed";
  const auto files = aigid::write_perturbed_set(images, cfg.perturb, out_dir);
  const std::vector<std::string> header = {
      "root seed " + std::to_string(cfg.seed),
      "plan " + aigid::perturbation_plan_to_json(cfg.perturb).dump()};
  aigid::save_manifest(out_dir / "perturbed.tsv", files.manifest, {}, header);
  std::cout << files.manifest.entries.size() << " images across " << files.counts_per_mode.size()
            << " modes\n";
  for (const auto& [mode, n] : files.counts_per_mode) std::cout << "  " << mode << " " << n << "\n";
  return 0;
}

// --- evaluate / report -------------------------------------------------------

std::map<std::string, aigid::EvalReport> reports_from_document(const nlohmann::json& doc) {
  std::map<std::string, aigid::EvalReport> reports;
  reports["overall"] = aigid::report_from_json(doc);
  if (doc.contains("per_mode")) {
    for (const auto& [mode, r] : doc.at("per_mode").items()) reports[mode] = aigid::report_from_json(r);
  }
  return reports;
}

void render_outputs(const nlohmann::json& doc, const fs::path& dir, bool table, bool plot) {
  const auto reports = reports_from_document(doc);
  if (table) {
    const std::string text = aigid::render_table(reports);
    write_text(dir / "report.txt", text);
    std::cout << text;
  }
  if (plot) aigid::render_bar_chart(reports, dir / "report.png");
}

int cmd_evaluate(const CommonOptions& common, std::string checkpoint_path,
                 std::string manifest_path, bool table, bool plot) {
  auto cfg = resolve_config(common);
  if (checkpoint_path.empty()) checkpoint_path = (cfg.output_dir / "checkpoints" / "best.safetensors").string();
  if (manifest_path.empty()) manifest_path = (cfg.output_dir / "test.tsv").string();

  const aigid::Checkpoint ckpt = aigid::load_checkpoint(checkpoint_path);
  if (const auto it = ckpt.metadata.find("model_config"); it != ckpt.metadata.end()) {
    const auto stored = aigid::model_config_from_json(nlohmann::json::parse(it->second));
    auto expected = cfg.model;
    expected.pretrained_checkpoint = stored.pretrained_checkpoint;
    expected.pretrained_cnn = stored.pretrained_cnn;
    if (!(stored == expected)) {
      throw aigid::CheckpointMismatch(
          "<model_config>", "checkpoint was trained with " + it->second + " but the run config has " +
                                aigid::model_config_to_json(cfg.model).dump());
    }
  }
  aigid::Classifier model(cfg.model, cfg.init_seed());
  model.load_checkpoint(ckpt);

  const auto manifest = aigid::load_manifest(manifest_path);
  const auto images =
      aigid::load_images(manifest, manifest.entries, aigid::Split::kTest, cfg.model.image_side);
  aigid::EvalOptions options;
  options.normalisation = cfg.train.normalisation;
  options.averaging = cfg.averaging;

  const bool tagged = std::any_of(images.begin(), images.end(), [](const auto& i) { return !i.mode.empty(); });
  ordered_json doc;
  if (tagged) {
    auto per_mode = aigid::per_mode_report(model, images, options);
    doc = aigid::report_to_json(per_mode.at("ALL"));
    per_mode.erase("ALL");
    ordered_json modes = ordered_json::object();
    for (const auto& [mode, r] : per_mode) modes[mode] = aigid::report_to_json(r);
    doc["per_mode"] = modes;
  } else {
    doc = aigid::report_to_json(aigid::evaluate(model, images, options));
  }
  doc["seed"] = cfg.seed;
  fs::create_directories(cfg.output_dir);
  write_text(cfg.output_dir / "report.json", doc.dump(2) + "\n");
  std::cout << std::fixed << std::setprecision(4) << "f1_task_a " << doc["f1_task_a"].get<double>()
            << " f1_task_b " << doc["f1_task_b"].get<double>() << " n " << images.size() << "\n";
  render_outputs(nlohmann::json::parse(doc.dump()), cfg.output_dir, table, plot);
  return 0;
}

int cmd_report(const CommonOptions& common, std::string report_path) {
  const fs::path out = common.output.empty() ? fs::path{} : fs::path(common.output);
  if (report_path.empty()) report_path = ((out.empty() ? fs::path("runs/default") : out) / "report.json").string();
  std::ifstream in(report_path);
  if (!in) throw aigid::MissingFile(report_path);
  const auto doc = nlohmann::json::parse(in);
  render_outputs(doc, out.empty() ? fs::path(report_path).parent_path() : out, true, true);
  return 0;
}

int cmd_toy(const std::string& output, int per_class, int side, std::uint64_t seed) {
  const auto path = aigid::write_toy_corpus(output, per_class, side, seed);
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI-generated image detection: prepare, train, perturb, evaluate, report"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string manifest, checkpoint, train_manifest, val_manifest, report_path;
  bool no_augment = false, table = false, plot = false;
  int per_class = 10, side = 32;

  auto* prepare = app.add_subcommand("prepare", "Split a manifest into train/val/test manifests");
  add_common(prepare, common);
  prepare->add_option("--manifest", manifest, "Input manifest (overrides data.manifest)");

  auto* train = app.add_subcommand("train", "Train a classifier and keep the best checkpoint");
  add_common(train, common);
  train->add_flag("--no-augment", no_augment, "Disable training-time perturbations");
  train->add_option("--train-manifest", train_manifest, "Default: OUTPUT/train.tsv");
  train->add_option("--val-manifest", val_manifest, "Default: OUTPUT/val.tsv");

  auto* perturb = app.add_subcommand("perturb", "Build the perturbed test set");
  add_common(perturb, common);
  perturb->add_option("--manifest", manifest, "Clean manifest. Default: OUTPUT/test.tsv");

  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a manifest");
  add_common(evaluate, common);
  evaluate->add_option("--checkpoint", checkpoint, "Default: OUTPUT/checkpoints/best.safetensors");
  evaluate->add_option("--manifest", manifest, "Default: OUTPUT/test.tsv");
  evaluate->add_flag("--table", table, "Print and write report.txt");
  evaluate->add_flag("--plot", plot, "Write report.png");

  auto* report = app.add_subcommand("report", "Render report.json as a table and bar chart");
  add_common(report, common);
  report->add_option("--report", report_path, "Default: OUTPUT/report.json");

  std::string toy_output = "data/toy";
  std::uint64_t toy_seed = 0;
  auto* toy = app.add_subcommand("toy-corpus", "Write a synthetic six-class corpus");
  toy->add_option("--output", toy_output, "Destination directory");
  toy->add_option("--per-class", per_class, "Images per class");
  toy->add_option("--side", side, "Image side in pixels");
  toy->add_option("--seed", toy_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(aigid::ExitCode::kOther);
  }

  try {
    if (*prepare) return cmd_prepare(common, manifest);
    if (*train) return cmd_train(common, no_augment, train_manifest, val_manifest);
    if (*perturb) return cmd_perturb(common, manifest);
    if (*evaluate) return cmd_evaluate(common, checkpoint, manifest, table, plot);
    if (*report) return cmd_report(common, report_path);
    if (*toy) return cmd_toy(toy_output, per_class, side, toy_seed);
  } catch (const aigid::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(aigid::ExitCode::kOther);
  }
  return static_cast<int>(aigid::ExitCode::kOther);
}
