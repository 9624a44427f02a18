// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel loops. Each kernel has an OpenMP version and a serial
// reference in kernels::serial with identical results; tests compare the two
// and bench/ times them.

#pragma once

#include <span>
#include <vector>

#include "guideval/criterion.hpp"
#include "guideval/evaluator.hpp"

namespace guideval::kernels {

/// out[i] = soft accuracy of angles[i] against gt. Sizes must match.
void soft_accuracy_sweep(SimplifiedDirection gt, std::span<const double> angles,
                         std::span<double> out, const CriterionConfig& cfg);

struct ScoringInput {
  const GroundTruth* gt;
  const Prediction* prediction;
};

/// One frame, no id check. Shared by both score_frames variants.
FrameResult score_one(const ScoringInput& input, const CriterionConfig& cfg);

/// Scores pre-joined frames. Inputs must already be validated (matching
/// frame ids).
std::vector<FrameResult> score_frames(std::span<const ScoringInput> inputs,
                                      const CriterionConfig& cfg);

namespace serial {
void soft_accuracy_sweep(SimplifiedDirection gt, std::span<const double> angles,
                         std::span<double> out, const CriterionConfig& cfg);
std::vector<FrameResult> score_frames(std::span<const ScoringInput> inputs,
                                      const CriterionConfig& cfg);
}  // namespace serial

int max_threads();
void set_num_threads(int n);

}  // namespace guideval::kernels
