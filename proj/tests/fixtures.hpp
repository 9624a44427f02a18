// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

// Shared test fixtures.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "guideval/dataset.hpp"

namespace guideval::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("guideval-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Timestamp fixed_time(int seconds) {
  return Timestamp{std::chrono::sys_days{std::chrono::year{2024} / 3 / 1}} +
         std::chrono::seconds{seconds};
}

// Ten frames: nine predicted exactly, one straight frame (reference 0 deg)
// predicted at 25 deg. Expected aggregates, computed by hand:
//   levels {90, 10, 0, 0, 0} %, one-level split {<15: 0, >=15: 10} %,
//   mean soft = 100 * (9 + exp(-0.75)) / 10, mean delta = 2.5 deg.
inline constexpr double kGoldMeanSoft = 94.72366552741015;
inline constexpr double kGoldExp075 = 0.4723665527410147;  // exp(-0.75)

struct GoldFixture {
  DatasetManifest manifest;
  std::vector<HumanAnnotation> annotations;
  std::vector<Prediction> predictions;
};

inline GoldFixture gold_fixture(const fs::path& root = {}) {
  // (reference angle, direction token) chosen inside each direction's bin.
  const std::vector<std::pair<double, SimplifiedDirection>> truth = {
      {0.0, SimplifiedDirection::kStraight},      {10.0, SimplifiedDirection::kStraight},
      {-12.5, SimplifiedDirection::kStraight},    {30.0, SimplifiedDirection::kSlightLeft},
      {-35.0, SimplifiedDirection::kSlightRight}, {60.0, SimplifiedDirection::kSharpLeft},
      {-70.0, SimplifiedDirection::kSharpRight},  {45.0, SimplifiedDirection::kSlightLeft},
      {-55.0, SimplifiedDirection::kSharpRight},  {0.0, SimplifiedDirection::kStraight},
  };
  std::vector<FrameRecord> frames;
  GoldFixture g;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::string id = "f0" + std::to_string(i);
    frames.push_back({id, {"clip.bin", static_cast<std::int64_t>(i)}, 640, 480, "crosswalk"});
    HumanAnnotation a;
    a.frame_id = id;
    a.direction = truth[i].second;
    a.explicit_angle = DirectionAngle(truth[i].first);
    a.annotator = "gold";
    a.created_at = fixed_time(static_cast<int>(i));
    g.annotations.push_back(a);
    const double pred = (i == 9) ? 25.0 : truth[i].first;
    g.predictions.push_back({id, DirectionAngle(pred), "gold-method"});
  }
  g.manifest = DatasetManifest("gold", std::move(frames), root);
  return g;
}

struct GoldPaths {
  fs::path manifest, annotations, predictions;
};

/// Writes the gold fixture as manifest.json / annotations.jsonl /
/// predictions.jsonl plus the placeholder source file.
inline GoldPaths write_gold_fixture(const fs::path& dir) {
  const GoldFixture g = gold_fixture(dir);
  write_text(dir / "clip.bin", "placeholder\n");
  GoldPaths p{dir / "manifest.json", dir / "annotations.jsonl", dir / "predictions.jsonl"};
  save_dataset(g.manifest, p.manifest);
  save_annotations(g.annotations, p.annotations);
  save_predictions(g.predictions, p.predictions);
  return p;
}

}  // namespace guideval::testing
