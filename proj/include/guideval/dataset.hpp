// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "guideval/criterion.hpp"
#include "guideval/error.hpp"
#include "guideval/types.hpp"

namespace guideval {

inline constexpr int kSchemaVersion = 1;

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// ISO-8601 UTC, "YYYY-MM-DDTHH:MM:SSZ" or with ".mmm" when sub-second.
std::string format_timestamp(Timestamp t);
/// Accepts the format above with 0-9 fractional digits (truncated to ms).
std::optional<Timestamp> parse_timestamp(std::string_view text);
Timestamp now_timestamp();

/// A human ground-truth decision for one frame. At least one of roi and
/// direction is present.
struct HumanAnnotation {
  std::string frame_id;
  std::optional<Roi> roi;
  std::optional<SimplifiedDirection> direction;
  std::optional<DirectionAngle> explicit_angle;
  std::string annotator;
  Timestamp created_at{};

  friend bool operator==(const HumanAnnotation&, const HumanAnnotation&) = default;
};

struct Prediction {
  std::string frame_id;
  DirectionAngle angle{0.0};
  std::string method_name;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

class DatasetManifest {
 public:
  DatasetManifest() = default;
  /// Throws ValidationError on duplicate ids or non-positive dimensions.
  DatasetManifest(std::string dataset_id, std::vector<FrameRecord> frames,
                  std::filesystem::path root = {});

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  const std::vector<FrameRecord>& frames() const noexcept { return frames_; }
  int schema_version() const noexcept { return kSchemaVersion; }
  /// Directory that relative frame sources resolve against.
  const std::filesystem::path& root() const noexcept { return root_; }

  const FrameRecord* find(const std::string& frame_id) const;
  std::filesystem::path resolve_source(const FrameRecord& frame) const;

 private:
  std::string dataset_id_;
  std::vector<FrameRecord> frames_;
  std::filesystem::path root_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads and validates a manifest. Missing manifest -> IoError; any record
/// problem (including a missing frame source) -> ValidationError carrying
/// one Issue per problem.
DatasetManifest load_dataset(const std::filesystem::path& manifest_path);
void save_dataset(const DatasetManifest& manifest, const std::filesystem::path& manifest_path);

struct LoadReport {
  std::size_t records_in = 0;  // non-blank lines
  std::size_t rejected = 0;    // records_in == accepted + rejected
  IssueList errors;
  IssueList warnings;

  bool ok() const noexcept { return errors.empty(); }
};

struct AnnotationSet {
  std::vector<HumanAnnotation> records;
  LoadReport report;
};

struct PredictionSet {
  std::vector<Prediction> records;
  LoadReport report;
};

/// Checks the invariants that hold without a manifest. Errors go to
/// `errors`; a direction that disagrees with quantize(explicit_angle) is a
/// warning.
void check_annotation(const HumanAnnotation& a, const std::string& context,
                      IssueList& errors, IssueList& warnings);

/// Checks frame references and ROI bounds against a manifest.
void check_against_manifest(const DatasetManifest& manifest,
                            const std::vector<HumanAnnotation>& annotations,
                            IssueList& errors);
void check_against_manifest(const DatasetManifest& manifest,
                            const std::vector<Prediction>& predictions, IssueList& errors);

/// Writes one JSON object per line, atomically (temp file + rename).
/// Throws ValidationError if any record is invalid, IoError on write failure.
void save_annotations(const std::vector<HumanAnnotation>& annotations,
                      const std::filesystem::path& path);
/// Throws IoError if the file cannot be read; record problems are returned
/// in the report, never dropped silently.
AnnotationSet load_annotations(const std::filesystem::path& path);

void save_predictions(const std::vector<Prediction>& predictions,
                      const std::filesystem::path& path);
PredictionSet load_predictions(const std::filesystem::path& path);

/// Explicit angle if present, otherwise the angle of the ray from the
/// frame's bottom-centre to the ROI centroid, measured from the vertical,
/// positive to the left. Out-of-domain geometry is clamped with a warning.
DirectionAngle derive_gt_angle(const HumanAnnotation& annotation, const FrameRecord& frame,
                               IssueList* warnings = nullptr);

/// Ground truth in the form the evaluator consumes.
struct GroundTruth {
  std::string frame_id;
  SimplifiedDirection direction = SimplifiedDirection::kStraight;
  std::optional<DirectionAngle> angle;
};

/// Direction comes from the annotation, or from quantize(angle) when the
/// annotator only drew an ROI.
GroundTruth resolve_ground_truth(const HumanAnnotation& annotation, const FrameRecord& frame,
                                 const CriterionConfig& cfg = {});

}  // namespace guideval
