// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>

#include <json.hpp>

#include "guideval/evaluator.hpp"

namespace guideval {

enum class Format { kText, kCsv, kJson, kSvg };

/// Throws ValidationError for tokens other than text, csv, json, svg.
Format parse_format(std::string_view token);
std::string_view format_extension(Format f) noexcept;

/// Order and captions of the five criterion panels.
inline constexpr std::array<SimplifiedDirection, 5> kCurveOrder = {
    SimplifiedDirection::kStraight, SimplifiedDirection::kSlightLeft,
    SimplifiedDirection::kSlightRight, SimplifiedDirection::kSharpLeft,
    SimplifiedDirection::kSharpRight};
std::string curve_caption(std::size_t panel);

/// JSON document shared by the CLI and the HTTP service:
/// {schema_version, dataset_id, method_name, config, aggregate, per_frame}.
nlohmann::json report_to_json(const EvaluationReport& report);

/// Deterministic rendering. Text mirrors the deviation-level table layout
/// with percentages to one decimal; csv and json carry full precision.
/// Throws ValidationError for Format::kSvg.
std::string render_report(const EvaluationReport& report, Format format);

nlohmann::json curves_to_json(const CriterionConfig& cfg, double step);

/// Five labelled curves as csv (one angle column, one column per curve),
/// svg (five stacked panels) or json. Throws ValidationError for text.
std::string render_criterion_curves(const CriterionConfig& cfg, double step, Format format);

}  // namespace guideval
