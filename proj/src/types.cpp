// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace guideval {

namespace {

constexpr std::array<std::string_view, 5> kTokens = {
    "sharp_right", "slight_right", "straight", "slight_left", "sharp_left"};
constexpr std::array<std::string_view, 5> kLabels = {
    "sharp right", "slight right", "straight", "slight left", "sharp left"};

}  // namespace

DirectionAngle::DirectionAngle(double degrees) : degrees_(degrees) {
  if (!std::isfinite(degrees) || degrees < kMin || degrees > kMax) {
    throw std::out_of_range("direction angle " + std::to_string(degrees) +
                            " outside [-90, 90]");
  }
}

DirectionAngle DirectionAngle::clamped(double degrees, bool* was_clamped) {
  if (!std::isfinite(degrees)) {
    throw std::out_of_range("direction angle is not finite");
  }
  const double c = std::clamp(degrees, kMin, kMax);
  if (was_clamped != nullptr) *was_clamped = (c != degrees);
  return DirectionAngle(c);
}

std::string_view to_token(SimplifiedDirection d) noexcept {
  return kTokens[static_cast<std::size_t>(d)];
}

std::string_view to_label(SimplifiedDirection d) noexcept {
  return kLabels[static_cast<std::size_t>(d)];
}

std::optional<SimplifiedDirection> direction_from_token(std::string_view token) noexcept {
  for (std::size_t i = 0; i < kTokens.size(); ++i) {
    if (kTokens[i] == token) return static_cast<SimplifiedDirection>(i);
  }
  return std::nullopt;
}

bool FrameRecord::contains(const Roi& roi) const noexcept {
  return roi.width > 0 && roi.height > 0 && roi.x >= 0 && roi.y >= 0 &&
         roi.x + roi.width <= width && roi.y + roi.height <= height;
}

AngleDeviation::AngleDeviation(double degrees) : degrees_(degrees) {
  if (!(degrees >= 0.0 && degrees <= 180.0)) {
    throw std::out_of_range("angle deviation " + std::to_string(degrees) +
                            " outside [0, 180]");
  }
}

Accuracy::Accuracy(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::out_of_range("accuracy " + std::to_string(value) + " outside [0, 1]");
  }
}

}  // namespace guideval
