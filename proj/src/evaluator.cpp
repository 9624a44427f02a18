// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "guideval/kernels.hpp"

namespace guideval {

FrameResult evaluate_frame(const GroundTruth& gt, const Prediction& prediction,
                           const CriterionConfig& cfg) {
  if (gt.frame_id != prediction.frame_id) {
    throw ValidationError("frame id mismatch: annotation '" + gt.frame_id + "' vs prediction '" +
                          prediction.frame_id + "'");
  }
  return kernels::score_one({&gt, &prediction}, cfg);
}

FrameResult evaluate_frame(const HumanAnnotation& annotation, const Prediction& prediction,
                           const CriterionConfig& cfg) {
  GroundTruth gt;
  gt.frame_id = annotation.frame_id;
  gt.angle = annotation.explicit_angle;
  if (annotation.direction) {
    gt.direction = *annotation.direction;
  } else if (gt.angle) {
    gt.direction = quantize(*gt.angle, cfg);
  } else {
    throw ValidationError("frame '" + annotation.frame_id +
                          "': direction needs the frame geometry to derive");
  }
  return evaluate_frame(gt, prediction, cfg);
}

FrameResult evaluate_frame(const HumanAnnotation& annotation, const FrameRecord& frame,
                           const Prediction& prediction, const CriterionConfig& cfg) {
  return evaluate_frame(resolve_ground_truth(annotation, frame, cfg), prediction, cfg);
}

void HistogramBins::validate() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i]) || edges[i] <= 0.0 || (i > 0 && edges[i] <= edges[i - 1])) {
      throw ValidationError("histogram edges must be positive, finite and strictly increasing");
    }
  }
}

std::size_t HistogramBins::bin_of(double delta) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), delta) -
                                  edges.begin());
}

std::string HistogramBins::label(std::size_t bin) const {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  const std::string lo = bin == 0 ? "0" : fmt(edges[bin - 1]);
  const std::string hi = bin < edges.size() ? fmt(edges[bin]) : "inf";
  return "[" + lo + ", " + hi + ")";
}

namespace {

double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

AggregateReport aggregate(const std::vector<FrameResult>& results, const HistogramBins& bins,
                          double split_threshold) {
  if (results.empty()) throw ValidationError("cannot aggregate an empty result set");
  bins.validate();
  AggregateReport r;
  r.n_frames = results.size();
  r.bins = bins;
  r.split_threshold = split_threshold;
  r.delta_histogram.assign(bins.size(), 0);

  std::vector<double> deltas, softs;
  softs.reserve(results.size());
  std::size_t below = 0, above = 0, no_delta = 0;
  for (const auto& f : results) {
    ++r.level_counts[static_cast<std::size_t>(f.level)];
    softs.push_back(f.soft.value());
    if (f.delta) {
      const double d = f.delta->degrees();
      deltas.push_back(d);
      ++r.delta_histogram[bins.bin_of(d)];
    }
    if (f.level == 1) {
      if (!f.delta) {
        ++no_delta;
      } else if (f.delta->degrees() < split_threshold) {
        ++below;
      } else {
        ++above;
      }
    }
  }
  const double n = static_cast<double>(r.n_frames);
  auto pct = [n](std::size_t count) { return 100.0 * static_cast<double>(count) / n; };
  for (std::size_t l = 0; l < 5; ++l) r.level_distribution[l] = pct(r.level_counts[l]);
  r.one_level_below = pct(below);
  r.one_level_at_or_above = pct(above);
  r.one_level_no_delta = pct(no_delta);
  r.n_with_delta = deltas.size();
  r.n_without_gt_angle = r.n_frames - r.n_with_delta;
  if (!deltas.empty()) r.mean_delta = sorted_sum(deltas) / static_cast<double>(deltas.size());
  r.mean_soft = 100.0 * sorted_sum(std::move(softs)) / n;
  r.exact_match_rate = r.level_distribution[0];
  return r;
}

EvaluationReport evaluate_dataset(const DatasetManifest& manifest,
                                  const std::vector<HumanAnnotation>& annotations,
                                  const std::vector<Prediction>& predictions,
                                  const std::string& method_name, const CriterionConfig& cfg,
                                  const HistogramBins& bins) {
  cfg.validate();
  bins.validate();
  std::unordered_map<std::string, const HumanAnnotation*> ann;
  for (const auto& a : annotations) ann.emplace(a.frame_id, &a);
  std::unordered_map<std::string, const Prediction*> pred;
  bool method_known = false;
  for (const auto& p : predictions) {
    if (p.method_name != method_name) continue;
    method_known = true;
    pred.emplace(p.frame_id, &p);
  }
  if (!method_known) throw ValidationError("no predictions for method '" + method_name + "'");

  EvaluationReport report;
  report.dataset_id = manifest.dataset_id();
  report.method_name = method_name;
  report.config = cfg;

  std::vector<GroundTruth> truths;
  std::vector<const Prediction*> matched;
  truths.reserve(manifest.frames().size());
  for (const auto& f : manifest.frames()) {
    auto a = ann.find(f.frame_id);
    if (a == ann.end()) continue;
    auto p = pred.find(f.frame_id);
    if (p == pred.end()) {
      ++report.n_missing_predictions;
      continue;
    }
    truths.push_back(resolve_ground_truth(*a->second, f, cfg));
    matched.push_back(p->second);
  }
  for (const auto& [id, p] : pred) {
    if (ann.find(id) == ann.end() || manifest.find(id) == nullptr) ++report.n_unannotated_predictions;
  }
  if (truths.empty()) {
    throw ValidationError("no annotated frames with predictions for method '" + method_name + "'");
  }

  std::vector<kernels::ScoringInput> inputs(truths.size());
  for (std::size_t i = 0; i < truths.size(); ++i) inputs[i] = {&truths[i], matched[i]};
  report.per_frame = kernels::score_frames(inputs, cfg);
  report.aggregate = aggregate(report.per_frame, bins, cfg.ramp_width);
  return report;
}

}  // namespace guideval
