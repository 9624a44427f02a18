// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/criterion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "guideval/error.hpp"
#include "guideval/kernels.hpp"

namespace guideval {

void CriterionConfig::validate() const {
  IssueList issues;
  auto require = [&](bool ok, const char* what) {
    if (!ok) issues.push_back({"criterion config", what});
  };
  require(std::isfinite(straight_halfwidth) && std::isfinite(slight_outer) &&
              std::isfinite(full_range) && std::isfinite(ramp_width) &&
              std::isfinite(gaussian_k),
          "all fields must be finite");
  require(straight_halfwidth > 0, "straight_halfwidth must be > 0");
  require(straight_halfwidth < slight_outer, "straight_halfwidth must be < slight_outer");
  require(slight_outer < full_range, "slight_outer must be < full_range");
  require(full_range <= DirectionAngle::kMax, "full_range must be <= 90");
  require(ramp_width > 0, "ramp_width must be > 0");
  require(ramp_width <= slight_outer - straight_halfwidth,
          "ramp_width must be <= slight_outer - straight_halfwidth");
  require(gaussian_k > 0, "gaussian_k must be > 0");
  if (!issues.empty()) {
    std::string msg = "invalid criterion config:";
    for (const auto& i : issues) msg += " " + i.message + ";";
    throw ValidationError(msg, std::move(issues));
  }
}

Plateau plateau(SimplifiedDirection d, const CriterionConfig& cfg) {
  switch (d) {
    case SimplifiedDirection::kSharpRight: return {-cfg.full_range, -cfg.slight_outer};
    case SimplifiedDirection::kSlightRight: return {-cfg.slight_outer, -cfg.straight_halfwidth};
    case SimplifiedDirection::kStraight: return {-cfg.straight_halfwidth, cfg.straight_halfwidth};
    case SimplifiedDirection::kSlightLeft: return {cfg.straight_halfwidth, cfg.slight_outer};
    case SimplifiedDirection::kSharpLeft: return {cfg.slight_outer, cfg.full_range};
  }
  return {0, 0};
}

SimplifiedDirection quantize(DirectionAngle alpha, const CriterionConfig& cfg) {
  const double a = alpha.degrees();
  if (a < -cfg.slight_outer) return SimplifiedDirection::kSharpRight;
  if (a < -cfg.straight_halfwidth) return SimplifiedDirection::kSlightRight;
  if (a < cfg.straight_halfwidth) return SimplifiedDirection::kStraight;
  if (a < cfg.slight_outer) return SimplifiedDirection::kSlightLeft;
  return SimplifiedDirection::kSharpLeft;
}

AngleDeviation angle_deviation(DirectionAngle alpha_human, DirectionAngle alpha_computer) {
  return AngleDeviation(std::fabs(alpha_human.degrees() - alpha_computer.degrees()));
}

double plateau_distance(SimplifiedDirection gt, double alpha, const CriterionConfig& cfg) {
  Plateau p = plateau(gt, cfg);
  // Outer plateaus run to the domain edge even when full_range < 90.
  if (gt == SimplifiedDirection::kSharpRight) p.lo = -std::numeric_limits<double>::infinity();
  if (gt == SimplifiedDirection::kSharpLeft) p.hi = std::numeric_limits<double>::infinity();
  if (alpha < p.lo) return p.lo - alpha;
  if (alpha > p.hi) return alpha - p.hi;
  return 0.0;
}

double soft_accuracy_value(SimplifiedDirection gt, double alpha,
                           const CriterionConfig& cfg) noexcept {
  // Branch on where alpha lies, not on the rounded distance, so the open ramp
  // keeps its exact extent next to the cutoff.
  const Plateau p = plateau(gt, cfg);
  const bool open_below = gt == SimplifiedDirection::kSharpRight;
  const bool open_above = gt == SimplifiedDirection::kSharpLeft;
  if ((open_below || alpha >= p.lo) && (open_above || alpha <= p.hi)) return 1.0;
  double d = 0.0;
  if (alpha < p.lo) {
    if (!(alpha > p.lo - cfg.ramp_width)) return 0.0;
    d = p.lo - alpha;
  } else {
    if (!(alpha < p.hi + cfg.ramp_width)) return 0.0;
    d = alpha - p.hi;
  }
  return std::exp(-(cfg.gaussian_k * d * d));
}

Accuracy soft_accuracy(SimplifiedDirection gt, DirectionAngle alpha, const CriterionConfig& cfg) {
  return Accuracy(soft_accuracy_value(gt, alpha.degrees(), cfg));
}

std::vector<double> curve_angles(double step, const CriterionConfig& cfg) {
  if (!(step > 0.0 && step <= 90.0)) {
    throw ValidationError("curve step must satisfy 0 < step <= 90, got " + std::to_string(step));
  }
  const double r = cfg.full_range;
  constexpr double kSnap = 1e-9;
  const auto n = static_cast<long>(std::floor(2.0 * r / step + kSnap));
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(n) + 2);
  for (long k = 0; k <= n; ++k) {
    // Computed from k, not accumulated, so long sweeps do not drift.
    double a = -r + static_cast<double>(k) * step;
    if (std::fabs(a - r) < kSnap) a = r;
    angles.push_back(std::min(a, r));
  }
  if (angles.back() < r) angles.push_back(r);
  return angles;
}

std::vector<CurveSample> criterion_curve(SimplifiedDirection gt, double step,
                                         const CriterionConfig& cfg) {
  const std::vector<double> angles = curve_angles(step, cfg);
  std::vector<double> values(angles.size());
  kernels::soft_accuracy_sweep(gt, angles, values, cfg);
  std::vector<CurveSample> out(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) out[i] = {angles[i], values[i]};
  return out;
}

}  // namespace guideval
