// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace guideval {

/// Signed heading offset in degrees. Positive values lie to the left of
/// straight ahead. Always finite and within [-90, 90].
class DirectionAngle {
 public:
  static constexpr double kMin = -90.0;
  static constexpr double kMax = 90.0;

  /// Throws std::out_of_range for non-finite or out-of-domain input.
  explicit DirectionAngle(double degrees);

  /// Clamps finite input into the domain; sets *clamped when it had to.
  /// Non-finite input still throws.
  static DirectionAngle clamped(double degrees, bool* was_clamped = nullptr);

  double degrees() const noexcept { return degrees_; }

  friend bool operator==(DirectionAngle, DirectionAngle) = default;
  friend auto operator<=>(DirectionAngle, DirectionAngle) = default;

 private:
  double degrees_;
};

/// Five-step guidance instruction, ordered right to left so that a larger
/// angle never maps to a smaller ordinal.
enum class SimplifiedDirection : std::uint8_t {
  kSharpRight = 0,
  kSlightRight = 1,
  kStraight = 2,
  kSlightLeft = 3,
  kSharpLeft = 4,
};

inline constexpr std::array<SimplifiedDirection, 5> kAllDirections = {
    SimplifiedDirection::kSharpRight, SimplifiedDirection::kSlightRight,
    SimplifiedDirection::kStraight, SimplifiedDirection::kSlightLeft,
    SimplifiedDirection::kSharpLeft};

constexpr int ordinal(SimplifiedDirection d) noexcept { return static_cast<int>(d); }

/// Number of levels separating two instructions (0..4).
constexpr int ordinal_distance(SimplifiedDirection a, SimplifiedDirection b) noexcept {
  const int diff = ordinal(a) - ordinal(b);
  return diff < 0 ? -diff : diff;
}

/// Wire token, e.g. "slight_left".
std::string_view to_token(SimplifiedDirection d) noexcept;
std::optional<SimplifiedDirection> direction_from_token(std::string_view token) noexcept;
/// Human readable label, e.g. "slight left".
std::string_view to_label(SimplifiedDirection d) noexcept;

struct Roi {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double center_x() const noexcept { return x + width / 2.0; }
  double center_y() const noexcept { return y + height / 2.0; }

  friend bool operator==(const Roi&, const Roi&) = default;
};

/// Frame located either in a standalone image or at an index in a video.
struct FrameSource {
  std::string path;
  std::optional<std::int64_t> video_frame_index;

  bool is_video() const noexcept { return video_frame_index.has_value(); }
  friend bool operator==(const FrameSource&, const FrameSource&) = default;
};

struct FrameRecord {
  std::string frame_id;
  FrameSource source;
  int width = 0;
  int height = 0;
  std::string scene_kind;

  bool contains(const Roi& roi) const noexcept;
  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

/// Absolute difference between two direction angles, in [0, 180].
class AngleDeviation {
 public:
  explicit AngleDeviation(double degrees);
  double degrees() const noexcept { return degrees_; }
  friend bool operator==(AngleDeviation, AngleDeviation) = default;

 private:
  double degrees_;
};

/// Soft decision accuracy in [0, 1].
class Accuracy {
 public:
  explicit Accuracy(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(Accuracy, Accuracy) = default;

 private:
  double value_;
};

}  // namespace guideval
