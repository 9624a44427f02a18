// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/codec.hpp"

#include <array>

namespace guideval::codec {

namespace {

bool check_schema(const json& j, const std::string& context, IssueList& errors) {
  auto it = j.find("schema_version");
  if (it == j.end()) {
    errors.push_back({context, "missing schema_version"});
    return false;
  }
  if (!it->is_number_integer() || it->get<long long>() != kSchemaVersion) {
    errors.push_back({context, "unsupported schema_version " + it->dump()});
    return false;
  }
  return true;
}

std::optional<std::string> get_string(const json& j, const char* key, const std::string& context,
                                      IssueList& errors, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) errors.push_back({context, std::string("missing field '") + key + "'"});
    return std::nullopt;
  }
  if (!it->is_string()) {
    errors.push_back({context, std::string("field '") + key + "' must be a string"});
    return std::nullopt;
  }
  return it->get<std::string>();
}

std::optional<double> get_number(const json& j, const char* key, const std::string& context,
                                 IssueList& errors, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) errors.push_back({context, std::string("missing field '") + key + "'"});
    return std::nullopt;
  }
  if (!it->is_number()) {
    errors.push_back({context, std::string("field '") + key + "' must be a number"});
    return std::nullopt;
  }
  return it->get<double>();
}

}  // namespace

json encode(const FrameRecord& frame) {
  json source;
  if (frame.source.is_video()) {
    source = {{"path", frame.source.path}, {"frame_index", *frame.source.video_frame_index}};
  } else {
    source = frame.source.path;
  }
  return {{"frame_id", frame.frame_id},
          {"source", source},
          {"width", frame.width},
          {"height", frame.height},
          {"scene_kind", frame.scene_kind}};
}

json encode(const HumanAnnotation& a) {
  json j = {{"schema_version", kSchemaVersion},
            {"frame_id", a.frame_id},
            {"annotator", a.annotator},
            {"created_at", format_timestamp(a.created_at)}};
  if (a.roi) {
    j["roi"] = {{"x", a.roi->x}, {"y", a.roi->y}, {"w", a.roi->width}, {"h", a.roi->height}};
  }
  if (a.direction) j["direction"] = to_token(*a.direction);
  if (a.explicit_angle) j["explicit_angle"] = a.explicit_angle->degrees();
  return j;
}

json encode(const Prediction& p) {
  return {{"schema_version", kSchemaVersion},
          {"frame_id", p.frame_id},
          {"angle", p.angle.degrees()},
          {"method_name", p.method_name}};
}

json encode(const CriterionConfig& cfg) {
  return {{"straight_halfwidth", cfg.straight_halfwidth},
          {"slight_outer", cfg.slight_outer},
          {"full_range", cfg.full_range},
          {"ramp_width", cfg.ramp_width},
          {"gaussian_k", cfg.gaussian_k}};
}

std::optional<FrameRecord> decode_frame(const json& j, const std::string& context,
                                        IssueList& errors) {
  if (!j.is_object()) {
    errors.push_back({context, "frame record must be an object"});
    return std::nullopt;
  }
  const std::size_t before = errors.size();
  FrameRecord f;
  if (auto id = get_string(j, "frame_id", context, errors)) f.frame_id = *id;
  const std::string ctx = f.frame_id.empty() ? context : context + " frame '" + f.frame_id + "'";
  if (f.frame_id.empty() && errors.size() == before) errors.push_back({ctx, "empty frame_id"});

  auto src = j.find("source");
  if (src == j.end()) {
    errors.push_back({ctx, "missing field 'source'"});
  } else if (src->is_string()) {
    f.source.path = src->get<std::string>();
  } else if (src->is_object()) {
    if (auto p = get_string(*src, "path", ctx + " source", errors)) f.source.path = *p;
    auto idx = src->find("frame_index");
    if (idx == src->end() || !idx->is_number_integer() || idx->get<long long>() < 0) {
      errors.push_back({ctx, "video source needs a non-negative integer 'frame_index'"});
    } else {
      f.source.video_frame_index = idx->get<std::int64_t>();
    }
  } else {
    errors.push_back({ctx, "'source' must be a path string or {path, frame_index}"});
  }
  if (f.source.path.empty() && src != j.end()) errors.push_back({ctx, "empty source path"});

  for (auto [key, dst] : {std::pair{"width", &f.width}, std::pair{"height", &f.height}}) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer() || it->get<long long>() <= 0) {
      errors.push_back({ctx, std::string("'") + key + "' must be a positive integer"});
    } else {
      *dst = it->get<int>();
    }
  }
  if (auto k = get_string(j, "scene_kind", ctx, errors, false)) f.scene_kind = *k;
  if (errors.size() != before) return std::nullopt;
  return f;
}

std::optional<HumanAnnotation> decode_annotation(const json& j, const std::string& context,
                                                 IssueList& errors) {
  if (!j.is_object()) {
    errors.push_back({context, "annotation record must be an object"});
    return std::nullopt;
  }
  const std::size_t before = errors.size();
  check_schema(j, context, errors);
  HumanAnnotation a;
  if (auto id = get_string(j, "frame_id", context, errors)) {
    a.frame_id = *id;
    if (id->empty()) errors.push_back({context, "empty frame_id"});
  }
  const std::string ctx = a.frame_id.empty() ? context : context + " frame '" + a.frame_id + "'";

  if (auto roi = j.find("roi"); roi != j.end() && !roi->is_null()) {
    if (!roi->is_object()) {
      errors.push_back({ctx, "'roi' must be an object {x, y, w, h}"});
    } else {
      auto x = get_number(*roi, "x", ctx + " roi", errors);
      auto y = get_number(*roi, "y", ctx + " roi", errors);
      auto w = get_number(*roi, "w", ctx + " roi", errors);
      auto h = get_number(*roi, "h", ctx + " roi", errors);
      if (x && y && w && h) a.roi = Roi{*x, *y, *w, *h};
    }
  }
  if (auto dir = j.find("direction"); dir != j.end() && !dir->is_null()) {
    if (!dir->is_string()) {
      errors.push_back({ctx, "'direction' must be a string token"});
    } else if (auto d = direction_from_token(dir->get<std::string>())) {
      a.direction = *d;
    } else {
      errors.push_back({ctx, "unknown direction token '" + dir->get<std::string>() + "'"});
    }
  }
  if (auto angle = get_number(j, "explicit_angle", ctx, errors, false)) {
    try {
      a.explicit_angle = DirectionAngle(*angle);
    } catch (const std::out_of_range& e) {
      errors.push_back({ctx, std::string("explicit_angle: ") + e.what()});
    }
  }
  if (auto who = get_string(j, "annotator", ctx, errors, false)) a.annotator = *who;
  if (auto ts = get_string(j, "created_at", ctx, errors)) {
    if (auto t = parse_timestamp(*ts)) {
      a.created_at = *t;
    } else {
      errors.push_back({ctx, "created_at '" + *ts + "' is not an ISO-8601 UTC timestamp"});
    }
  }
  if (errors.size() != before) return std::nullopt;
  return a;
}

std::optional<Prediction> decode_prediction(const json& j, const std::string& context,
                                            IssueList& errors) {
  if (!j.is_object()) {
    errors.push_back({context, "prediction record must be an object"});
    return std::nullopt;
  }
  const std::size_t before = errors.size();
  check_schema(j, context, errors);
  Prediction p;
  if (auto id = get_string(j, "frame_id", context, errors)) {
    p.frame_id = *id;
    if (id->empty()) errors.push_back({context, "empty frame_id"});
  }
  const std::string ctx = p.frame_id.empty() ? context : context + " frame '" + p.frame_id + "'";
  if (auto m = get_string(j, "method_name", ctx, errors)) {
    p.method_name = *m;
    if (m->empty()) errors.push_back({ctx, "empty method_name"});
  }
  if (auto angle = get_number(j, "angle", ctx, errors)) {
    try {
      p.angle = DirectionAngle(*angle);
    } catch (const std::out_of_range& e) {
      errors.push_back({ctx, std::string("angle: ") + e.what()});
    }
  }
  if (errors.size() != before) return std::nullopt;
  return p;
}

CriterionConfig decode_config(const json& j) {
  if (!j.is_object()) throw ValidationError("criterion config must be a JSON object");
  CriterionConfig cfg;
  const std::array<std::pair<const char*, double*>, 5> fields = {{
      {"straight_halfwidth", &cfg.straight_halfwidth},
      {"slight_outer", &cfg.slight_outer},
      {"full_range", &cfg.full_range},
      {"ramp_width", &cfg.ramp_width},
      {"gaussian_k", &cfg.gaussian_k},
  }};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, dst] : fields) {
      if (key != name) continue;
      known = true;
      if (!value.is_number()) {
        throw ValidationError("criterion config field '" + key + "' must be a number");
      }
      *dst = value.get<double>();
    }
    if (!known) throw ValidationError("unknown criterion config field '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

}  // namespace guideval::codec
