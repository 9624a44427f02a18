// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "guideval/types.hpp"

namespace guideval {

/// Shape of the soft criterion. Defaults give the standard five-curve
/// family; other values generalize it to different bin layouts.
struct CriterionConfig {
  double straight_halfwidth = 20.0;  // degrees
  double slight_outer = 50.0;        // degrees
  double full_range = 90.0;          // degrees, at most 90
  double ramp_width = 15.0;          // degrees
  double gaussian_k = 0.03;          // 1 / degrees^2

  /// Throws ValidationError listing every violated constraint.
  void validate() const;

  friend bool operator==(const CriterionConfig&, const CriterionConfig&) = default;
};

/// Closed angle interval on which a direction scores exactly 1.
struct Plateau {
  double lo;
  double hi;
};

Plateau plateau(SimplifiedDirection d, const CriterionConfig& cfg = {});

/// Half-open ascending bins; the top bin is closed at the domain edge.
SimplifiedDirection quantize(DirectionAngle alpha, const CriterionConfig& cfg = {});

AngleDeviation angle_deviation(DirectionAngle alpha_human, DirectionAngle alpha_computer);

/// Distance from alpha to the plateau of gt, 0 inside it.
double plateau_distance(SimplifiedDirection gt, double alpha, const CriterionConfig& cfg = {});

/// Unchecked scalar kernel used by the sweeps. alpha must lie in [-90, 90].
double soft_accuracy_value(SimplifiedDirection gt, double alpha,
                           const CriterionConfig& cfg = {}) noexcept;

/// 1 on the plateau, exp(-k d^2) within ramp_width of it, 0 from ramp_width on.
Accuracy soft_accuracy(SimplifiedDirection gt, DirectionAngle alpha,
                       const CriterionConfig& cfg = {});

struct CurveSample {
  double angle;
  double accuracy;
  friend bool operator==(const CurveSample&, const CurveSample&) = default;
};

/// Sample angles -R, -R+step, ... up to R (R = full_range), always ending at
/// R exactly. Throws ValidationError unless 0 < step <= 90.
std::vector<double> curve_angles(double step, const CriterionConfig& cfg = {});

std::vector<CurveSample> criterion_curve(SimplifiedDirection gt, double step,
                                         const CriterionConfig& cfg = {});

}  // namespace guideval
