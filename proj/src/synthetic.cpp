// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

namespace guideval {

namespace fs = std::filesystem;

double GaussianNoise::next_uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianNoise::next_standard_normal() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Prediction> synthetic_predictions(const DatasetManifest& manifest,
                                              const std::vector<HumanAnnotation>& annotations,
                                              double noise_stddev, std::uint64_t seed,
                                              const std::string& method_name) {
  if (!(noise_stddev >= 0.0) || !std::isfinite(noise_stddev)) {
    throw ValidationError("noise standard deviation must be finite and >= 0");
  }
  std::unordered_map<std::string, const HumanAnnotation*> by_frame;
  for (const auto& a : annotations) by_frame.emplace(a.frame_id, &a);

  IssueList issues;
  std::vector<DirectionAngle> truth;
  truth.reserve(manifest.frames().size());
  for (const auto& f : manifest.frames()) {
    auto it = by_frame.find(f.frame_id);
    if (it == by_frame.end()) {
      issues.push_back({"frame '" + f.frame_id + "'", "no annotation"});
      continue;
    }
    if (!it->second->explicit_angle && !it->second->roi) {
      issues.push_back({"frame '" + f.frame_id + "'", "direction-only annotation has no angle"});
      continue;
    }
    truth.push_back(derive_gt_angle(*it->second, f));
  }
  if (!issues.empty()) {
    std::string msg = "cannot synthesize predictions: ground truth underivable";
    for (const auto& i : issues) msg += "\n  " + i.str();
    throw ValidationError(msg, std::move(issues));
  }

  GaussianNoise noise(seed);
  std::vector<Prediction> out;
  out.reserve(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double z = noise.next_standard_normal();
    const double angle = truth[i].degrees() + noise_stddev * z;
    out.push_back({manifest.frames()[i].frame_id, DirectionAngle::clamped(angle), method_name});
  }
  return out;
}

SyntheticDataset make_synthetic_dataset(const SyntheticDatasetOptions& options) {
  GaussianNoise rng(options.seed);
  std::vector<FrameRecord> frames;
  std::vector<HumanAnnotation> annotations;
  frames.reserve(options.frames);
  annotations.reserve(options.frames);
  const double w = options.width;
  const double h = options.height;
  const double roi_w = w / 10.0;
  const double roi_h = h / 10.0;
  const double rise = h / 2.0;
  const Timestamp created{std::chrono::sys_days{std::chrono::year{2024} / 1 / 1}};

  for (std::size_t i = 0; i < options.frames; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%s-%05zu", options.scene_kind.c_str(), i);
    frames.push_back({id,
                      {options.source_name, static_cast<std::int64_t>(i)},
                      options.width,
                      options.height,
                      options.scene_kind});

    const double alpha = (2.0 * rng.next_uniform() - 1.0) * options.max_abs_angle;
    HumanAnnotation a;
    a.frame_id = id;
    a.direction = quantize(DirectionAngle(alpha));
    a.annotator = "synthetic";
    a.created_at = created + std::chrono::milliseconds(static_cast<std::int64_t>(i) * 1000);
    const double offset = rise * std::tan(alpha * std::numbers::pi / 180.0);
    const double cx = w / 2.0 - offset;
    if (cx - roi_w / 2.0 >= 0.0 && cx + roi_w / 2.0 <= w) {
      a.roi = Roi{cx - roi_w / 2.0, h - rise - roi_h / 2.0, roi_w, roi_h};
      // Re-derive so direction agrees with the angle the ROI actually encodes.
      a.direction = quantize(derive_gt_angle(a, frames.back()));
    } else {
      a.explicit_angle = DirectionAngle(alpha);
    }
    annotations.push_back(std::move(a));
  }
  return {DatasetManifest("synthetic-" + options.scene_kind, std::move(frames)),
          std::move(annotations)};
}

fs::path write_synthetic_dataset(const SyntheticDataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  for (const auto& f : dataset.manifest.frames()) {
    const fs::path src = dir / f.source.path;
    if (fs::exists(src)) continue;
    std::ofstream out(src, std::ios::binary);
    if (!out) throw IoError("cannot write '" + src.string() + "'");
    out << "synthetic placeholder\n";
  }
  const fs::path manifest_path = dir / "manifest.json";
  save_dataset(DatasetManifest(dataset.manifest.dataset_id(), dataset.manifest.frames(), dir),
               manifest_path);
  save_annotations(dataset.annotations, dir / "annotations.jsonl");
  return manifest_path;
}

}  // namespace guideval
