// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "guideval/criterion.hpp"
#include "guideval/dataset.hpp"

namespace guideval {

struct FrameResult {
  std::string frame_id;
  SimplifiedDirection gt_direction = SimplifiedDirection::kStraight;
  std::optional<DirectionAngle> gt_angle;
  DirectionAngle pred_angle{0.0};
  SimplifiedDirection pred_direction = SimplifiedDirection::kStraight;
  std::optional<AngleDeviation> delta;  // only with gt_angle
  int level = 0;
  Accuracy soft{0.0};

  friend bool operator==(const FrameResult&, const FrameResult&) = default;
};

/// Scores one frame. Throws ValidationError when frame ids differ.
FrameResult evaluate_frame(const GroundTruth& gt, const Prediction& prediction,
                           const CriterionConfig& cfg = {});

/// Annotation overload for records that do not need the frame geometry
/// (explicit angle and/or direction). ROI-only records need the
/// FrameRecord overload.
FrameResult evaluate_frame(const HumanAnnotation& annotation, const Prediction& prediction,
                           const CriterionConfig& cfg = {});
FrameResult evaluate_frame(const HumanAnnotation& annotation, const FrameRecord& frame,
                           const Prediction& prediction, const CriterionConfig& cfg = {});

/// Upper edges of the deviation histogram. Edges e1 < e2 < ... < en give
/// bins [0,e1) [e1,e2) ... [en, inf).
struct HistogramBins {
  std::vector<double> edges{5.0, 10.0, 15.0};

  void validate() const;
  std::size_t size() const noexcept { return edges.size() + 1; }
  std::size_t bin_of(double delta) const noexcept;
  std::string label(std::size_t bin) const;
  friend bool operator==(const HistogramBins&, const HistogramBins&) = default;
};

struct AggregateReport {
  std::size_t n_frames = 0;
  std::size_t n_with_delta = 0;
  std::size_t n_without_gt_angle = 0;  // excluded from mean_delta
  std::optional<double> mean_delta;    // degrees
  std::array<std::size_t, 5> level_counts{};
  std::array<double, 5> level_distribution{};  // percent
  double split_threshold = 15.0;
  double one_level_below = 0.0;     // percent of all frames, level 1 and delta < threshold
  double one_level_at_or_above = 0.0;
  double one_level_no_delta = 0.0;  // level 1 without a reference angle
  HistogramBins bins;
  std::vector<std::size_t> delta_histogram;
  double mean_soft = 0.0;         // percent
  double exact_match_rate = 0.0;  // percent

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

/// Throws ValidationError on empty input. Sums run over sorted values so the
/// result does not depend on input order.
AggregateReport aggregate(const std::vector<FrameResult>& results, const HistogramBins& bins = {},
                          double split_threshold = 15.0);

struct EvaluationReport {
  std::string dataset_id;
  std::string method_name;
  CriterionConfig config;
  std::size_t n_missing_predictions = 0;  // annotated frames with no prediction
  std::size_t n_unannotated_predictions = 0;
  AggregateReport aggregate;
  std::vector<FrameResult> per_frame;  // manifest order
};

/// Joins annotations and predictions of one method over the manifest and
/// scores every annotated frame that has a prediction. Per-frame scoring
/// runs in parallel; results are in manifest order.
EvaluationReport evaluate_dataset(const DatasetManifest& manifest,
                                  const std::vector<HumanAnnotation>& annotations,
                                  const std::vector<Prediction>& predictions,
                                  const std::string& method_name, const CriterionConfig& cfg = {},
                                  const HistogramBins& bins = {});

}  // namespace guideval
