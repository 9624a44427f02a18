// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/kernels.hpp"

#include <cassert>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace guideval::kernels {

FrameResult score_one(const ScoringInput& input, const CriterionConfig& cfg) {
  const GroundTruth& gt = *input.gt;
  const DirectionAngle pred = input.prediction->angle;
  FrameResult r;
  r.frame_id = gt.frame_id;
  r.gt_direction = gt.direction;
  r.gt_angle = gt.angle;
  r.pred_angle = pred;
  r.pred_direction = quantize(pred, cfg);
  if (gt.angle) r.delta = angle_deviation(*gt.angle, pred);
  r.level = ordinal_distance(gt.direction, r.pred_direction);
  r.soft = Accuracy(soft_accuracy_value(gt.direction, pred.degrees(), cfg));
  return r;
}

void soft_accuracy_sweep(SimplifiedDirection gt, std::span<const double> angles,
                         std::span<double> out, const CriterionConfig& cfg) {
  assert(angles.size() == out.size());
  const auto n = static_cast<std::ptrdiff_t>(angles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = soft_accuracy_value(gt, angles[i], cfg);
  }
}

std::vector<FrameResult> score_frames(std::span<const ScoringInput> inputs,
                                      const CriterionConfig& cfg) {
  std::vector<FrameResult> results(inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[i] = score_one(inputs[i], cfg);
  }
  return results;
}

namespace serial {

void soft_accuracy_sweep(SimplifiedDirection gt, std::span<const double> angles,
                         std::span<double> out, const CriterionConfig& cfg) {
  assert(angles.size() == out.size());
  for (std::size_t i = 0; i < angles.size(); ++i) out[i] = soft_accuracy_value(gt, angles[i], cfg);
}

std::vector<FrameResult> score_frames(std::span<const ScoringInput> inputs,
                                      const CriterionConfig& cfg) {
  std::vector<FrameResult> results;
  results.reserve(inputs.size());
  for (const auto& in : inputs) results.push_back(score_one(in, cfg));
  return results;
}

}  // namespace serial

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#if defined(_OPENMP)
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace guideval::kernels
