// Copyright 2026 The burnseg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "burnseg/pipeline.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "burnseg/blocksplit.hpp"
#include "burnseg/dataset.hpp"
#include "burnseg/error.hpp"
#include "burnseg/geotiff.hpp"
#include "burnseg/patching.hpp"
#include "burnseg/synth.hpp"
#include "burnseg/vector_io.hpp"
#include "json.hpp"

#ifndef BURNSEG_VERSION
#define BURNSEG_VERSION "0.0.0"
#endif

namespace burnseg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return BURNSEG_VERSION; }

std::string model_display_name(Architecture arch) {
  return arch == Architecture::kSegFormerMiTB2 ? "SegFormer-B2" : "UNet-RN34";
}

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << text;
}

void require_file(const fs::path& path, const std::string& what) {
  require(!path.empty() && fs::exists(path), ErrorCode::kIoError, what + " '" + path.string() + "' not found");
}

std::string relative_to(const fs::path& p, const fs::path& base) { return p.lexically_relative(base).generic_string(); }

// Records a stage's outputs in <run_dir>/manifest.json, keeping other stages.
void update_manifest(const PipelineConfig& config, const std::string& stage, const std::vector<fs::path>& outputs) {
  const fs::path path = config.run_dir / "manifest.json";
  json doc = fs::exists(path) ? read_json(path) : json::object();
  doc["tool"] = "burnseg";
  doc["tool_version"] = tool_version();
  doc["schema_version"] = kConfigSchemaVersion;
  json files = json::array();
  for (const fs::path& p : outputs) {
    files.push_back(relative_to(p, config.run_dir));
  }
  doc["stages"][stage] = {{"config_sha256", config.hash()}, {"seed", config.seed}, {"outputs", files}};
  write_text(path, doc.dump(1) + "\n");
}

fs::path prepared_dir(const PipelineConfig& c) { return c.run_dir / "prepared"; }
fs::path scene_dir(const PipelineConfig& c, const std::string& id) { return prepared_dir(c) / id; }
fs::path checkpoint_path(const PipelineConfig& c) {
  return c.predict.checkpoint.empty() ? c.run_dir / "train" / "best.ckpt" : c.predict.checkpoint;
}

struct PreparedScene {
  std::string id;
  std::string role;
};

std::vector<PreparedScene> read_prepared_index(const PipelineConfig& config) {
  const json doc = read_json(prepared_dir(config) / "index.json");
  std::vector<PreparedScene> out;
  try {
    require(doc.at("format") == "burnseg-prepared", ErrorCode::kUnsupportedFormat, "not a prepared-data index");
    for (const json& s : doc.at("scenes")) {
      out.push_back({s.at("id").get<std::string>(), s.at("role").get<std::string>()});
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, std::string("prepared index: ") + e.what());
  }
  return out;
}

std::vector<SceneInput> scene_inputs(const PipelineConfig& config) {
  if (!config.prepare.scenes.empty()) {
    return config.prepare.scenes;
  }
  const fs::path index = config.run_dir / "synth" / "scenes.json";
  require(fs::exists(index), ErrorCode::kBadConfig,
          "no prepare.scenes configured and no synthetic scene index at '" + index.string() + "'");
  return read_scene_index(index);
}

void check_crs(const std::string& a, const std::string& b, const std::string& what) {
  require(normalize_crs_name(a) == normalize_crs_name(b), ErrorCode::kCrsMismatch,
          what + ": CRS '" + b + "' does not match the image CRS '" + a + "'");
}

}  // namespace

std::vector<SceneInput> cmd_synth(const PipelineConfig& config) {
  const fs::path dir = config.run_dir / "synth";
  const auto scenes = write_synthetic_dataset(config.synth, config.seed, dir);
  std::vector<fs::path> outputs = {dir / "scenes.json"};
  for (const SceneInput& s : scenes) {
    outputs.insert(outputs.end(), {s.image, s.delineation, s.cloud, s.landcover, s.aoi});
  }
  update_manifest(config, "synth", outputs);
  return scenes;
}

void cmd_prepare(const PipelineConfig& config) {
  const std::vector<SceneInput> scenes = scene_inputs(config);
  require(!scenes.empty(), ErrorCode::kEmptyDataset, "no scenes to prepare");
  for (const SceneInput& s : scenes) {
    require_file(s.image, "image");
    require_file(s.delineation, "delineation");
    require_file(s.cloud, "cloud mask");
    require_file(s.landcover, "land-cover map");
    require_file(s.aoi, "AOI");
  }

  const LandCoverScheme scheme = LandCoverScheme::world_cover();
  const ClipOptions clip{config.prepare.image_nodata};
  json index_scenes = json::array();
  std::vector<fs::path> outputs;
  for (const SceneInput& s : scenes) {
    const RasterGrid image = read_raster(s.image, RasterKind::kImage);
    require(image.bands() == config.model.in_channels, ErrorCode::kShapeError,
            "'" + s.image.string() + "' has " + std::to_string(image.bands()) + " bands, expected " +
                std::to_string(config.model.in_channels));
    const PolygonSet delineation = read_polygons(s.delineation);
    const RasterGrid cloud = read_raster(s.cloud, RasterKind::kBinaryMask);
    const RasterGrid lc = read_raster(s.landcover, RasterKind::kCategoryMap);
    const PolygonSet aoi = read_polygons(s.aoi);
    const std::string& crs = image.transform().crs_id;
    check_crs(crs, delineation.crs_id, s.delineation.string());
    check_crs(crs, cloud.transform().crs_id, s.cloud.string());
    check_crs(crs, lc.transform().crs_id, s.landcover.string());
    check_crs(crs, aoi.crs_id, s.aoi.string());

    const RasterGrid ba = subtract_cloud(binarize_delineation(delineation, image), cloud);
    const RasterGrid lc_fine = resample_nearest(lc, image.transform(), image.width(), image.height());
    const RasterGrid lc_idx = apply_lc_scheme(lc_fine, cloud, scheme);

    const RasterGrid image_c = clip_to_aoi(image, aoi, clip);
    const RasterGrid ba_c = clip_to_aoi(ba, aoi, clip);
    const RasterGrid lc_c = clip_to_aoi(lc_idx, aoi, clip);
    const RasterGrid cloud_c = clip_to_aoi(cloud, aoi, clip);

    const fs::path dir = scene_dir(config, s.id);
    fs::create_directories(dir);
    write_raster(image_c, dir / "image.tif");
    write_raster(ba_c, dir / "ba.tif");
    write_raster(lc_c, dir / "lc.tif");
    write_raster(cloud_c, dir / "cloud.tif");
    write_polygons(aoi, dir / "aoi.geojson");

    const double overlap = s.role == "predict" ? config.prepare.predict_overlap : config.prepare.train_overlap;
    const PatchSpec image_spec{config.prepare.patch_size, overlap, static_cast<float>(config.prepare.image_nodata)};
    const PatchSpec label_spec{config.prepare.patch_size, overlap, static_cast<float>(kMaskNodata)};
    const PatchSet image_patches = patchify(image_c, image_spec);
    write_patchset(image_patches, dir / "patches" / "image");
    write_patchset(patchify(ba_c, label_spec), dir / "patches" / "ba");
    write_patchset(patchify(lc_c, label_spec), dir / "patches" / "lc");
    write_patchset(patchify(cloud_c, label_spec), dir / "patches" / "cloud");

    index_scenes.push_back({{"id", s.id},
                            {"role", s.role},
                            {"width", image_c.width()},
                            {"height", image_c.height()},
                            {"overlap_fraction", overlap},
                            {"patches", image_patches.size()}});
    outputs.insert(outputs.end(), {dir / "image.tif", dir / "ba.tif", dir / "lc.tif", dir / "cloud.tif",
                                   dir / "aoi.geojson", dir / "patches"});
  }
  const json doc = {{"format", "burnseg-prepared"},
                    {"version", 1},
                    {"patch_size", config.prepare.patch_size},
                    {"scenes", index_scenes}};
  write_text(prepared_dir(config) / "index.json", doc.dump(1) + "\n");
  outputs.insert(outputs.begin(), prepared_dir(config) / "index.json");
  update_manifest(config, "prepare", outputs);
}

std::vector<SplitAssignment> cmd_split(const PipelineConfig& config) {
  const auto scenes = read_prepared_index(config);
  std::vector<SplitAssignment> assignments;
  std::ostringstream balance;
  balance << "aoi_id,split,blocks,patches,pixels,burned_pixels,burned_fraction\n";
  std::uint64_t scene_seed = config.seed;
  for (const PreparedScene& s : scenes) {
    if (s.role != "train") {
      continue;
    }
    const fs::path dir = scene_dir(config, s.id);
    const PolygonSet aoi = read_polygons(dir / "aoi.geojson");
    const BlockGrid grid = build_block_grid(aoi, config.split.block_size, s.id);
    const PatchSet ba = read_patchset(dir / "patches" / "ba");
    SplitAssignment a = assign_patches(ba, assign_splits(grid, config.split.fractions, scene_seed++));
    const SplitBalance b = split_balance(a, ba);
    const auto blocks = a.block_counts();
    std::array<std::size_t, 3> patches{};
    for (const auto& [i, split] : a.patch_to_split) {
      ++patches[static_cast<std::size_t>(split)];
    }
    for (Split split : {Split::kTrain, Split::kVal, Split::kTest}) {
      const auto k = static_cast<std::size_t>(split);
      char fraction[32];
      std::snprintf(fraction, sizeof fraction, "%.6f", b.burned_fraction(split));
      balance << s.id << "," << split_name(split) << "," << blocks[k] << "," << patches[k] << "," << b.pixels[k]
              << "," << b.burned[k] << "," << fraction << "\n";
    }
    assignments.push_back(std::move(a));
  }
  require(!assignments.empty(), ErrorCode::kEmptyDataset, "no training scenes to split");
  const fs::path dir = config.run_dir / "split";
  write_split_file(assignments, dir / "split.json");
  write_text(dir / "balance.csv", balance.str());
  update_manifest(config, "split", {dir / "split.json", dir / "balance.csv"});
  return assignments;
}

namespace {

struct SplitSets {
  TrainingSet train;
  TrainingSet val;
  TrainingSet test;
};

SplitSets load_split_sets(const PipelineConfig& config, bool with_lc) {
  const auto assignments = read_split_file(config.run_dir / "split" / "split.json");
  std::vector<TrainingSet> train, val, test;
  for (const SplitAssignment& a : assignments) {
    const fs::path dir = scene_dir(config, a.grid.aoi_id) / "patches";
    const PatchSet images = read_patchset(dir / "image");
    const PatchSet ba = read_patchset(dir / "ba");
    std::optional<PatchSet> lc;
    if (with_lc) {
      lc = read_patchset(dir / "lc");
    }
    std::array<std::vector<std::size_t>, 3> indices;
    for (const auto& [i, split] : a.patch_to_split) {
      indices[static_cast<std::size_t>(split)].push_back(i);
    }
    const PatchSet* lc_ptr = lc ? &*lc : nullptr;
    train.push_back(dataset_from_patches(images, ba, lc_ptr, indices[0]));
    val.push_back(dataset_from_patches(images, ba, lc_ptr, indices[1]));
    test.push_back(dataset_from_patches(images, ba, lc_ptr, indices[2]));
  }
  return {concat(train), concat(val), concat(test)};
}

}  // namespace

TrainResult cmd_train(const PipelineConfig& config) {
  require_file(config.run_dir / "split" / "split.json", "split file");
  const bool mtl = config.framework == Framework::kMTL;
  const SplitSets sets = load_split_sets(config, mtl);
  SegmentationModel model(config.model);
  TrainResult result = train(model, sets.train, sets.val, config.train, config.loss, config.framework);

  json summary = {{"framework", framework_name(config.framework)},
                  {"model", model_display_name(config.model.architecture)},
                  {"best_epoch", result.best_epoch},
                  {"best_val_dice", result.best_val_dice},
                  {"train_patches", sets.train.size()},
                  {"val_patches", sets.val.size()},
                  {"test_patches", sets.test.size()},
                  {"skipped_steps", result.skipped_steps},
                  {"final_loss_scale", result.final_loss_scale}};
  if (sets.test.size() > 0) {
    const EpochRecord test = evaluate_set(result.best_model, result.stats, sets.test, config.loss, config.framework,
                                          config.train.batch_size, config.train.mixed_precision);
    summary["test_dice"] = test.dice;
    summary["test_iou"] = test.iou;
  }

  const json metadata = {{"framework", framework_name(config.framework)},
                         {"model", model_display_name(config.model.architecture)},
                         {"band_stats", json::parse(result.stats.to_json())},
                         {"best_epoch", result.best_epoch},
                         {"best_val_dice", result.best_val_dice},
                         {"config_sha256", config.hash()},
                         {"tool_version", tool_version()}};
  const fs::path dir = config.run_dir / "train";
  save_checkpoint(result.best_model, metadata.dump(), dir / "best.ckpt");
  write_history_csv(result.history, dir / "history.csv");
  write_text(dir / "summary.json", summary.dump(1) + "\n");
  update_manifest(config, "train", {dir / "best.ckpt", dir / "history.csv", dir / "summary.json"});
  return result;
}

std::vector<PredictionRun> cmd_predict(const PipelineConfig& config) {
  const fs::path ckpt = checkpoint_path(config);
  require_file(ckpt, "checkpoint");
  const auto scenes = read_prepared_index(config);
  LoadedCheckpoint loaded = load_checkpoint(ckpt);
  const json metadata = json::parse(loaded.metadata_json);
  const BandStats stats = BandStats::from_json(metadata.at("band_stats").dump());
  SegmentationModel model = loaded.model.config().with_lc_head ? loaded.model.drop_lc_head() : loaded.model;

  std::vector<PredictionRun> runs;
  std::vector<fs::path> outputs;
  for (const PreparedScene& s : scenes) {
    if (s.role != "predict") {
      continue;
    }
    const PatchSet images = read_patchset(scene_dir(config, s.id) / "patches" / "image");
    PredictionRun run =
        predict_scene(model, stats, images, config.predict.tta, config.predict.mixed_precision, config.predict.batch_size);
    const fs::path dir = config.run_dir / "predict" / s.id;
    fs::create_directories(dir);
    write_raster(run.probability_map, dir / "probability.tif");
    write_raster(run.binary_map, dir / "binary.tif");
    json report = json::parse(prediction_report_json(run));
    report["framework"] = metadata.value("framework", "STL");
    report["model"] = metadata.value("model", model_display_name(model.config().architecture));
    write_text(dir / "report.json", report.dump(1) + "\n");
    outputs.insert(outputs.end(), {dir / "probability.tif", dir / "binary.tif", dir / "report.json"});
    runs.push_back(std::move(run));
  }
  require(!runs.empty(), ErrorCode::kEmptyDataset, "no prediction scenes were prepared");
  update_manifest(config, "predict", outputs);
  return runs;
}

std::vector<EvalReport> cmd_evaluate(const PipelineConfig& config) {
  const auto scenes = read_prepared_index(config);
  EvalReport total;
  bool any = false;
  for (const PreparedScene& s : scenes) {
    if (s.role != "predict") {
      continue;
    }
    const fs::path pdir = config.run_dir / "predict" / s.id;
    require_file(pdir / "binary.tif", "binary map");
    const json report = read_json(pdir / "report.json");
    const RasterGrid binary = read_raster(pdir / "binary.tif", RasterKind::kBinaryMask);
    const RasterGrid truth = read_raster(scene_dir(config, s.id) / "ba.tif", RasterKind::kBinaryMask);
    const RasterGrid cloud = read_raster(scene_dir(config, s.id) / "cloud.tif", RasterKind::kBinaryMask);

    std::string technique = config.evaluate.technique;
    if (technique.empty()) {
      const bool tta = report.value("tta_enabled", false);
      const bool mp = report.value("mixed_precision", false);
      technique = tta && mp ? "TTA+MP" : tta ? "TTA" : mp ? "MP" : "Baseline";
    }
    PredictionRun run{binary, binary, report.value("wall_clock_seconds", 0.0), report.value("patches_processed", 0),
                      report.value("model_invocations", 0), TtaConfig{}, report.value("mixed_precision", false)};
    const EvalReport r = evaluate_run(run, truth,
                                      {report.value("framework", "STL"), report.value("model", "UNet-RN34"), technique},
                                      &cloud);
    if (!any) {
      total = r;
      any = true;
    } else {
      total.counts += r.counts;
      total.inference_minutes += r.inference_minutes;
    }
  }
  require(any, ErrorCode::kEmptyDataset, "no prediction scenes to evaluate");
  total.dice = dice(total.counts);
  total.iou = iou(total.counts);
  const fs::path out = config.run_dir / "evaluate" / "report.csv";
  write_report_csv({total}, out);
  update_manifest(config, "evaluate", {out});
  return {total};
}

void run_command(std::string_view command, const PipelineConfig& config) {
  if (command == "synth") {
    cmd_synth(config);
  } else if (command == "prepare") {
    cmd_prepare(config);
  } else if (command == "split") {
    cmd_split(config);
  } else if (command == "train") {
    cmd_train(config);
  } else if (command == "predict") {
    cmd_predict(config);
  } else if (command == "evaluate") {
    cmd_evaluate(config);
  } else {
    fail(ErrorCode::kBadConfig, "unknown command '" + std::string(command) + "'");
  }
}

}  // namespace burnseg
