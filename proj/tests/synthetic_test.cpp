// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "guideval/synthetic.hpp"

namespace guideval {
namespace {

TEST(GaussianNoise, EngineIsTheStandardMt19937_64) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ull);
}

TEST(GaussianNoise, MomentsAreStandardNormal) {
  GaussianNoise g(42);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = g.next_standard_normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(SyntheticPredictions, ZeroNoiseReproducesGroundTruth) {
  const SyntheticDataset ds = make_synthetic_dataset({.frames = 200, .seed = 4});
  const auto preds = synthetic_predictions(ds.manifest, ds.annotations, 0.0, 9);
  ASSERT_EQ(preds.size(), 200u);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const FrameRecord& f = ds.manifest.frames()[i];
    EXPECT_EQ(preds[i].frame_id, f.frame_id);
    EXPECT_EQ(preds[i].angle, derive_gt_angle(ds.annotations[i], f));
  }
}

TEST(SyntheticPredictions, SameSeedIsByteIdentical) {
  testing::TempDir dir;
  const SyntheticDataset ds = make_synthetic_dataset({.frames = 100, .seed = 4});
  save_predictions(synthetic_predictions(ds.manifest, ds.annotations, 6.0, 77), dir / "a.jsonl");
  save_predictions(synthetic_predictions(ds.manifest, ds.annotations, 6.0, 77), dir / "b.jsonl");
  save_predictions(synthetic_predictions(ds.manifest, ds.annotations, 6.0, 78), dir / "c.jsonl");
  EXPECT_EQ(testing::read_text(dir / "a.jsonl"), testing::read_text(dir / "b.jsonl"));
  EXPECT_NE(testing::read_text(dir / "a.jsonl"), testing::read_text(dir / "c.jsonl"));
}

TEST(SyntheticPredictions, NoiseMagnitudeMatchesHalfNormalMean) {
  // E|N(0, 6^2)| = 6 * sqrt(2 / pi) = 4.7873...
  const SyntheticDataset ds = make_synthetic_dataset({.frames = 500, .seed = 8});
  const auto preds = synthetic_predictions(ds.manifest, ds.annotations, 6.0, 123);
  double sum = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double gt = derive_gt_angle(ds.annotations[i], ds.manifest.frames()[i]).degrees();
    sum += std::fabs(preds[i].angle.degrees() - gt);
    EXPECT_GE(preds[i].angle.degrees(), -90.0);
    EXPECT_LE(preds[i].angle.degrees(), 90.0);
  }
  EXPECT_NEAR(sum / 500.0, 4.7873073648, 0.5);
}

TEST(SyntheticPredictions, ClampsIntoDomain) {
  const DatasetManifest m("d", {{"a", {"a.png", {}}, 10, 10, ""}});
  HumanAnnotation a;
  a.frame_id = "a";
  a.direction = SimplifiedDirection::kSharpLeft;
  a.explicit_angle = DirectionAngle(89.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = synthetic_predictions(m, {a}, 30.0, seed);
    EXPECT_LE(p[0].angle.degrees(), 90.0);
    EXPECT_GE(p[0].angle.degrees(), -90.0);
  }
}

TEST(SyntheticPredictions, UnderivableGroundTruthIsAnError) {
  const DatasetManifest m("d", {{"a", {"a.png", {}}, 10, 10, ""}, {"b", {"b.png", {}}, 10, 10, ""}});
  HumanAnnotation a;
  a.frame_id = "a";
  a.direction = SimplifiedDirection::kStraight;  // no angle, no roi
  try {
    synthetic_predictions(m, {a}, 1.0, 1);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.issues().size(), 2u);  // a: no angle, b: no annotation
  }
  EXPECT_THROW(synthetic_predictions(m, {}, -1.0, 1), ValidationError);
}

TEST(SyntheticDataset, WritesLoadableFixture) {
  testing::TempDir dir;
  const SyntheticDataset ds = make_synthetic_dataset({.frames = 50, .seed = 2, .scene_kind = "stairs"});
  const auto manifest_path = write_synthetic_dataset(ds, dir.path());
  const DatasetManifest m = load_dataset(manifest_path);
  EXPECT_EQ(m.frames(), ds.manifest.frames());
  const AnnotationSet a = load_annotations(dir / "annotations.jsonl");
  EXPECT_TRUE(a.report.ok());
  EXPECT_EQ(a.records, ds.annotations);
  std::size_t roi_only = 0;
  for (const auto& r : ds.annotations) {
    ASSERT_TRUE(r.direction);
    if (r.roi && !r.explicit_angle) ++roi_only;
  }
  EXPECT_GT(roi_only, 0u);
  EXPECT_LT(roi_only, ds.annotations.size());
}

}  // namespace
}  // namespace guideval
