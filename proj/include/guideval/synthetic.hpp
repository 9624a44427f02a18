// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "guideval/dataset.hpp"

namespace guideval {

/// Standard normal draws with a fully specified algorithm, so a seed gives
/// the same sequence on every conforming platform:
///   engine  std::mt19937_64 seeded with `seed` (output fixed by the standard)
///   uniform u = (next() >> 11) * 2^-53, in [0, 1)
///   normal  Box-Muller cosine branch, z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
/// Every call consumes exactly two engine outputs.
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}
  double next_uniform();
  double next_standard_normal();

 private:
  std::mt19937_64 engine_;
};

/// Ground-truth angle plus Gaussian noise, clamped to [-90, 90], one record
/// per manifest frame in manifest order. Throws ValidationError if any frame
/// lacks an annotation with a derivable angle, or noise_stddev < 0.
std::vector<Prediction> synthetic_predictions(const DatasetManifest& manifest,
                                              const std::vector<HumanAnnotation>& annotations,
                                              double noise_stddev, std::uint64_t seed,
                                              const std::string& method_name = "synthetic");

struct SyntheticDataset {
  DatasetManifest manifest;
  std::vector<HumanAnnotation> annotations;
};

struct SyntheticDatasetOptions {
  std::size_t frames = 500;
  std::uint64_t seed = 1;
  std::string scene_kind = "crosswalk";
  int width = 640;
  int height = 480;
  double max_abs_angle = 75.0;
  /// Placeholder file all frames point into, as indices of one "video".
  std::string source_name = "frames.bin";
};

/// Reference angles uniform in [-max_abs_angle, max_abs_angle]. Small
/// angles get an ROI-only annotation placed so its centroid ray has that
/// angle; the rest carry an explicit angle. All carry a direction.
SyntheticDataset make_synthetic_dataset(const SyntheticDatasetOptions& options);

/// Writes manifest.json, annotations.jsonl and the placeholder source into
/// `dir`. Returns the manifest path.
std::filesystem::path write_synthetic_dataset(const SyntheticDataset& dataset,
                                              const std::filesystem::path& dir);

}  // namespace guideval
