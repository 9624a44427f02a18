// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "guideval/codec.hpp"

namespace guideval {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Timestamps

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> tod{t - day};
  char buf[40];
  const int ms = static_cast<int>(tod.subseconds().count());
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()), ms);
  }
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS[.f+]Z
  if (s.size() < 20 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't') ||
      s[13] != ':' || s[16] != ':' || (s.back() != 'Z' && s.back() != 'z')) {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || p != s.data() + pos + len) return std::nullopt;
    return v;
  };
  auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2),
       se = num(17, 2);
  if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
  int millis = 0;
  const std::string_view frac = s.substr(19, s.size() - 20);
  if (!frac.empty()) {
    if (frac[0] != '.' || frac.size() < 2 || frac.size() > 10) return std::nullopt;
    int scale = 100;
    for (std::size_t i = 1; i < frac.size(); ++i) {
      if (frac[i] < '0' || frac[i] > '9') return std::nullopt;
      millis += (frac[i] - '0') * scale;
      scale /= 10;
    }
  }
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *se > 59) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{*h} + minutes{*mi} + seconds{*se} +
         milliseconds{millis};
}

Timestamp now_timestamp() {
  return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

// ---------------------------------------------------------------------------
// Manifest

DatasetManifest::DatasetManifest(std::string dataset_id, std::vector<FrameRecord> frames,
                                 fs::path root)
    : dataset_id_(std::move(dataset_id)), frames_(std::move(frames)), root_(std::move(root)) {
  IssueList issues;
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const FrameRecord& f = frames_[i];
    if (f.width <= 0 || f.height <= 0) {
      issues.push_back({"frame '" + f.frame_id + "'", "width and height must be positive"});
    }
    if (!index_.emplace(f.frame_id, i).second) {
      issues.push_back({"frame '" + f.frame_id + "'", "duplicate frame_id '" + f.frame_id + "'"});
    }
  }
  if (!issues.empty()) throw ValidationError("invalid dataset manifest", std::move(issues));
}

const FrameRecord* DatasetManifest::find(const std::string& frame_id) const {
  auto it = index_.find(frame_id);
  return it == index_.end() ? nullptr : &frames_[it->second];
}

fs::path DatasetManifest::resolve_source(const FrameRecord& frame) const {
  const fs::path p(frame.source.path);
  return p.is_absolute() ? p : root_ / p;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw IoError("error writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace '" + path.string() + "': " + ec.message());
}

std::string join_issues(const std::string& head, const IssueList& issues) {
  std::string msg = head;
  for (const auto& i : issues) msg += "\n  " + i.str();
  return msg;
}

// Parses JSON Lines, calling `on_record(json, context)` per non-blank line.
template <typename OnRecord>
void for_each_json_line(const fs::path& path, LoadReport& report, OnRecord on_record) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  const std::string name = path.filename().string();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++report.records_in;
    const std::string context = name + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      report.errors.push_back({context, std::string("malformed JSON: ") + e.what()});
      ++report.rejected;
      continue;
    }
    if (!on_record(j, context)) ++report.rejected;
  }
}

}  // namespace

DatasetManifest load_dataset(const fs::path& manifest_path) {
  const std::string text = read_file(manifest_path);
  const std::string name = manifest_path.filename().string();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(name + ": malformed JSON: " + e.what());
  }
  IssueList issues;
  if (!j.is_object()) throw ValidationError(name + ": manifest must be a JSON object");
  auto sv = j.find("schema_version");
  if (sv == j.end() || !sv->is_number_integer() || sv->get<long long>() != kSchemaVersion) {
    throw ValidationError(name + ": unsupported schema_version " +
                          (sv == j.end() ? std::string("(missing)") : sv->dump()));
  }
  std::string dataset_id;
  if (auto id = j.find("dataset_id"); id != j.end() && id->is_string()) {
    dataset_id = id->get<std::string>();
  } else {
    issues.push_back({name, "missing string field 'dataset_id'"});
  }
  auto frames_json = j.find("frames");
  if (frames_json == j.end() || !frames_json->is_array()) {
    issues.push_back({name, "missing array field 'frames'"});
    throw ValidationError(join_issues("invalid dataset manifest", issues), issues);
  }

  const fs::path root = manifest_path.parent_path();
  std::vector<FrameRecord> frames;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < frames_json->size(); ++i) {
    const std::string ctx = name + " frames[" + std::to_string(i) + "]";
    auto f = codec::decode_frame((*frames_json)[i], ctx, issues);
    if (!f) continue;
    if (!seen.insert(f->frame_id).second) {
      issues.push_back({ctx, "duplicate frame_id '" + f->frame_id + "'"});
      continue;
    }
    const fs::path src = fs::path(f->source.path).is_absolute() ? fs::path(f->source.path)
                                                                 : root / f->source.path;
    std::error_code ec;
    if (!fs::is_regular_file(src, ec)) {
      issues.push_back({ctx + " frame '" + f->frame_id + "'",
                        "missing source file '" + src.string() + "'"});
      continue;
    }
    frames.push_back(std::move(*f));
  }
  if (!issues.empty()) throw ValidationError(join_issues("invalid dataset manifest", issues), issues);
  return DatasetManifest(std::move(dataset_id), std::move(frames), root);
}

void save_dataset(const DatasetManifest& manifest, const fs::path& manifest_path) {
  json frames = json::array();
  for (const auto& f : manifest.frames()) frames.push_back(codec::encode(f));
  const json j = {{"schema_version", kSchemaVersion},
                  {"dataset_id", manifest.dataset_id()},
                  {"frames", std::move(frames)}};
  write_file_atomic(manifest_path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Annotations and predictions

void check_annotation(const HumanAnnotation& a, const std::string& context, IssueList& errors,
                      IssueList& warnings) {
  if (a.frame_id.empty()) errors.push_back({context, "empty frame_id"});
  if (!a.roi && !a.direction) {
    errors.push_back({context, "annotation needs an roi or a direction"});
  }
  if (a.roi && !(a.roi->width > 0 && a.roi->height > 0)) {
    errors.push_back({context, "roi width and height must be positive"});
  }
  if (a.explicit_angle && a.direction) {
    const SimplifiedDirection q = quantize(*a.explicit_angle);
    if (q != *a.direction) {
      std::ostringstream msg;
      msg << "explicit_angle " << a.explicit_angle->degrees() << " quantizes to '" << to_token(q)
          << "' but direction is '" << to_token(*a.direction) << "'";
      warnings.push_back({context, msg.str()});
    }
  }
}

void check_against_manifest(const DatasetManifest& manifest,
                            const std::vector<HumanAnnotation>& annotations, IssueList& errors) {
  for (const auto& a : annotations) {
    const FrameRecord* f = manifest.find(a.frame_id);
    const std::string ctx = "frame '" + a.frame_id + "'";
    if (f == nullptr) {
      errors.push_back({ctx, "annotation references unknown frame"});
    } else if (a.roi && !f->contains(*a.roi)) {
      errors.push_back({ctx, "roi lies outside the " + std::to_string(f->width) + "x" +
                                 std::to_string(f->height) + " frame"});
    }
  }
}

void check_against_manifest(const DatasetManifest& manifest,
                            const std::vector<Prediction>& predictions, IssueList& errors) {
  for (const auto& p : predictions) {
    if (manifest.find(p.frame_id) == nullptr) {
      errors.push_back({"frame '" + p.frame_id + "'",
                        "prediction of method '" + p.method_name + "' references unknown frame"});
    }
  }
}

void save_annotations(const std::vector<HumanAnnotation>& annotations, const fs::path& path) {
  IssueList errors, warnings;
  std::set<std::string> seen;
  for (const auto& a : annotations) {
    const std::string ctx = "frame '" + a.frame_id + "'";
    check_annotation(a, ctx, errors, warnings);
    if (!seen.insert(a.frame_id).second) errors.push_back({ctx, "duplicate annotation"});
  }
  if (!errors.empty()) throw ValidationError(join_issues("refusing to save annotations", errors), errors);
  std::string out;
  for (const auto& a : annotations) out += codec::encode(a).dump() + "\n";
  write_file_atomic(path, out);
}

AnnotationSet load_annotations(const fs::path& path) {
  AnnotationSet set;
  std::set<std::string> seen;
  for_each_json_line(path, set.report, [&](const json& j, const std::string& ctx) {
    auto a = codec::decode_annotation(j, ctx, set.report.errors);
    if (!a) return false;
    const std::size_t before = set.report.errors.size();
    check_annotation(*a, ctx, set.report.errors, set.report.warnings);
    if (!seen.insert(a->frame_id).second) {
      set.report.errors.push_back({ctx, "duplicate annotation for frame '" + a->frame_id + "'"});
    }
    if (set.report.errors.size() != before) return false;
    set.records.push_back(std::move(*a));
    return true;
  });
  return set;
}

void save_predictions(const std::vector<Prediction>& predictions, const fs::path& path) {
  std::string out;
  for (const auto& p : predictions) out += codec::encode(p).dump() + "\n";
  write_file_atomic(path, out);
}

PredictionSet load_predictions(const fs::path& path) {
  PredictionSet set;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_json_line(path, set.report, [&](const json& j, const std::string& ctx) {
    auto p = codec::decode_prediction(j, ctx, set.report.errors);
    if (!p) return false;
    if (!seen.emplace(p->frame_id, p->method_name).second) {
      set.report.errors.push_back({ctx, "duplicate prediction for frame '" + p->frame_id +
                                            "' and method '" + p->method_name + "'"});
      return false;
    }
    set.records.push_back(std::move(*p));
    return true;
  });
  return set;
}

// ---------------------------------------------------------------------------
// Ground truth

DirectionAngle derive_gt_angle(const HumanAnnotation& annotation, const FrameRecord& frame,
                               IssueList* warnings) {
  if (annotation.explicit_angle) return *annotation.explicit_angle;
  if (!annotation.roi) {
    throw ValidationError("frame '" + annotation.frame_id +
                          "': no explicit_angle or roi to derive a reference angle from");
  }
  const double origin_x = frame.width / 2.0;
  const double origin_y = static_cast<double>(frame.height);
  const double left = origin_x - annotation.roi->center_x();
  const double rise = origin_y - annotation.roi->center_y();
  const double degrees = std::atan2(left, rise) * 180.0 / std::numbers::pi;
  bool clamped = false;
  DirectionAngle angle = DirectionAngle::clamped(degrees, &clamped);
  if (clamped && warnings != nullptr) {
    warnings->push_back({"frame '" + annotation.frame_id + "'",
                         "roi-derived angle " + std::to_string(degrees) + " clamped to [-90, 90]"});
  }
  return angle;
}

GroundTruth resolve_ground_truth(const HumanAnnotation& annotation, const FrameRecord& frame,
                                 const CriterionConfig& cfg) {
  GroundTruth gt;
  gt.frame_id = annotation.frame_id;
  if (annotation.explicit_angle || annotation.roi) gt.angle = derive_gt_angle(annotation, frame);
  if (annotation.direction) {
    gt.direction = *annotation.direction;
  } else if (gt.angle) {
    gt.direction = quantize(*gt.angle, cfg);
  } else {
    throw ValidationError("frame '" + annotation.frame_id + "': no direction can be derived");
  }
  return gt;
}

}  // namespace guideval
