// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

// JSON encoding of the on-disk and over-the-wire records.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "guideval/criterion.hpp"
#include "guideval/dataset.hpp"

namespace guideval::codec {

using nlohmann::json;

json encode(const FrameRecord& frame);
json encode(const HumanAnnotation& annotation);
json encode(const Prediction& prediction);
json encode(const CriterionConfig& cfg);

// Decoders append to `errors` and return nullopt on failure. `context` is
// prefixed to every issue (e.g. "annotations.jsonl:12").
std::optional<FrameRecord> decode_frame(const json& j, const std::string& context,
                                        IssueList& errors);
std::optional<HumanAnnotation> decode_annotation(const json& j, const std::string& context,
                                                 IssueList& errors);
std::optional<Prediction> decode_prediction(const json& j, const std::string& context,
                                            IssueList& errors);

/// Missing fields keep their defaults. Throws ValidationError on wrong
/// types, unknown keys, or a config that fails validate().
CriterionConfig decode_config(const json& j);

}  // namespace guideval::codec
