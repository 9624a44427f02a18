// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/service.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <httplib.h>

#include "guideval/codec.hpp"
#include "guideval/report.hpp"

namespace guideval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json issues_json(const IssueList& issues) {
  json out = json::array();
  for (const auto& i : issues) out.push_back(i.str());
  return out;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const IssueList& issues = {}) {
  json body = {{"error", message}};
  if (!issues.empty()) body["issues"] = issues_json(issues);
  send_json(res, status, body);
}

std::string content_type_for(const fs::path& p) {
  std::string ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  if (ext == ".tif" || ext == ".tiff") return "image/tiff";
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return "image/x-portable-anymap";
  return "application/octet-stream";
}

bool is_within(const fs::path& root, const fs::path& p) {
  const fs::path rel = p.lexically_relative(root);
  return !rel.empty() && *rel.begin() != "..";
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    send_error(res, 400, std::string("malformed JSON body: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

Service::Service(ServiceConfig config)
    : config_(std::move(config)), manifest_(load_dataset(config_.manifest_path)) {
  config_.criterion.validate();
  config_.bins.validate();
  std::error_code ec;
  root_ = fs::weakly_canonical(fs::absolute(manifest_.root()), ec);
  if (ec) throw IoError("cannot resolve dataset root: " + ec.message());

  if (!config_.annotations_path.empty() && fs::exists(config_.annotations_path)) {
    AnnotationSet set = load_annotations(config_.annotations_path);
    check_against_manifest(manifest_, set.records, set.report.errors);
    if (!set.report.ok()) {
      throw ValidationError("annotation file failed validation", set.report.errors);
    }
    for (auto& a : set.records) {
      std::string id = a.frame_id;
      state_.annotations.emplace(std::move(id), SessionState::Entry{std::move(a), 0});
    }
  }
  for (const auto& path : config_.prediction_paths) {
    PredictionSet set = load_predictions(path);
    check_against_manifest(manifest_, set.records, set.report.errors);
    if (!set.report.ok()) {
      throw ValidationError("prediction file '" + path.string() + "' failed validation",
                            set.report.errors);
    }
    for (auto& p : set.records) {
      std::string method = p.method_name;
      state_.predictions[method].push_back(std::move(p));
    }
  }
  server_ = std::make_unique<httplib::Server>();
  register_routes();
}

Service::~Service() {
  try {
    stop();
  } catch (...) {
    // Nothing sensible to do with a flush failure during destruction.
  }
}

int Service::bind() {
  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
    if (port < 0) throw IoError("cannot bind " + config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    throw IoError("cannot bind " + config_.host + ":" + std::to_string(port));
  }
  bound_ = true;
  return port;
}

void Service::listen() {
  if (!bound_) throw IoError("listen() before bind()");
  server_->listen_after_bind();
}

void Service::stop() {
  if (stopped_) return;
  stopped_ = true;
  server_->stop();
  flush();
}

bool Service::flush() {
  std::unique_lock lock(mutex_);
  if (!state_.dirty || config_.annotations_path.empty()) return false;
  std::vector<HumanAnnotation> all;
  all.reserve(state_.annotations.size());
  for (const auto& [id, entry] : state_.annotations) all.push_back(entry.annotation);
  save_annotations(all, config_.annotations_path);
  state_.dirty = false;
  return true;
}

json Service::evaluate(const std::string& method_name, const CriterionConfig& cfg,
                       const HistogramBins& bins) const {
  std::vector<HumanAnnotation> annotations;
  std::vector<Prediction> predictions;
  {
    std::shared_lock lock(mutex_);
    auto it = state_.predictions.find(method_name);
    if (it == state_.predictions.end()) {
      throw ValidationError("unknown method '" + method_name + "'");
    }
    predictions = it->second;
    annotations.reserve(state_.annotations.size());
    for (const auto& [id, entry] : state_.annotations) annotations.push_back(entry.annotation);
  }
  return report_to_json(evaluate_dataset(manifest_, annotations, predictions, method_name, cfg, bins));
}

void Service::register_routes() {
  httplib::Server& s = *server_;

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                             std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const ValidationError& e) {
      send_error(res, 422, e.what(), e.issues());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });

  s.Get("/api/frames", [this](const httplib::Request&, httplib::Response& res) {
    json frames = json::array();
    for (const auto& f : manifest_.frames()) frames.push_back(codec::encode(f));
    send_json(res, 200, frames);
  });

  s.Get(R"(/api/frames/([^/]+)/image)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    const FrameRecord* f = manifest_.find(req.matches[1]);
    if (f == nullptr) return send_error(res, 404, "unknown frame '" + std::string(req.matches[1]) + "'");
    if (f->source.is_video()) {
      return send_error(res, 415, "frame '" + f->frame_id + "' is a video frame; extract it first");
    }
    std::error_code ec;
    const fs::path path = fs::weakly_canonical(fs::absolute(manifest_.resolve_source(*f)), ec);
    if (ec || !is_within(root_, path)) {
      return send_error(res, 403, "frame source lies outside the dataset root");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return send_error(res, 404, "cannot read source of frame '" + f->frame_id + "'");
    std::ostringstream bytes;
    bytes << in.rdbuf();
    res.status = 200;
    res.set_content(bytes.str(), content_type_for(path));
  });

  s.Get("/api/annotations", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    std::shared_lock lock(mutex_);
    for (const auto& [id, entry] : state_.annotations) out.push_back(codec::encode(entry.annotation));
    lock.unlock();
    send_json(res, 200, out);
  });

  s.Get(R"(/api/annotations/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    const std::string id = req.matches[1];
    std::shared_lock lock(mutex_);
    auto it = state_.annotations.find(id);
    if (it == state_.annotations.end()) {
      lock.unlock();
      return send_error(res, 404, "no annotation for frame '" + id + "'");
    }
    const json body = codec::encode(it->second.annotation);
    const std::uint64_t revision = it->second.revision;
    lock.unlock();
    res.set_header("X-Revision", std::to_string(revision));
    send_json(res, 200, body);
  });

  s.Put(R"(/api/annotations/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    const std::string id = req.matches[1];
    const FrameRecord* frame = manifest_.find(id);
    if (frame == nullptr) return send_error(res, 404, "unknown frame '" + id + "'");
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->is_object()) return send_error(res, 400, "annotation body must be a JSON object");
    if (!body->contains("schema_version")) (*body)["schema_version"] = kSchemaVersion;
    if (!body->contains("frame_id")) (*body)["frame_id"] = id;
    if (!body->contains("created_at")) (*body)["created_at"] = format_timestamp(now_timestamp());

    IssueList errors, warnings;
    auto a = codec::decode_annotation(*body, "annotation", errors);
    if (a) {
      if (a->frame_id != id) {
        return send_error(res, 400, "body frame_id '" + a->frame_id + "' does not match path");
      }
      check_annotation(*a, "frame '" + id + "'", errors, warnings);
      check_against_manifest(manifest_, std::vector<HumanAnnotation>{*a}, errors);
    }
    if (!errors.empty()) return send_error(res, 422, "annotation failed validation", errors);

    std::uint64_t revision = 0;
    {
      std::unique_lock lock(mutex_);
      SessionState::Entry& entry = state_.annotations[id];
      entry.annotation = std::move(*a);
      revision = ++entry.revision;
      state_.dirty = true;
    }
    send_json(res, 200, {{"revision", revision}, {"warnings", issues_json(warnings)}});
  });

  s.Post(R"(/api/predictions/([^/]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    const std::string method = req.matches[1];
    auto body = parse_body(req, res);
    if (!body) return;
    if (body->is_object() && body->contains("predictions")) body = (*body)["predictions"];
    if (!body->is_array()) return send_error(res, 400, "expected an array of prediction records");

    IssueList errors;
    std::vector<Prediction> records;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < body->size(); ++i) {
      json record = (*body)[i];
      const std::string ctx = "predictions[" + std::to_string(i) + "]";
      if (record.is_object()) {
        if (!record.contains("schema_version")) record["schema_version"] = kSchemaVersion;
        if (!record.contains("method_name")) record["method_name"] = method;
      }
      auto p = codec::decode_prediction(record, ctx, errors);
      if (!p) continue;
      if (p->method_name != method) {
        errors.push_back({ctx, "method_name '" + p->method_name + "' does not match path"});
      } else if (!seen.insert(p->frame_id).second) {
        errors.push_back({ctx, "duplicate prediction for frame '" + p->frame_id + "'"});
      } else {
        records.push_back(std::move(*p));
      }
    }
    check_against_manifest(manifest_, records, errors);
    if (!errors.empty()) return send_error(res, 422, "predictions failed validation", errors);
    const std::size_t count = records.size();
    {
      std::unique_lock lock(mutex_);
      state_.predictions[method] = std::move(records);
    }
    send_json(res, 200, {{"method_name", method}, {"count", count}});
  });

  s.Post("/api/evaluate", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->is_object() || !body->contains("method_name") ||
        !(*body)["method_name"].is_string()) {
      return send_error(res, 400, "body must be {method_name, config?, bins?}");
    }
    const std::string method = (*body)["method_name"];
    CriterionConfig cfg = config_.criterion;
    HistogramBins bins = config_.bins;
    if (auto c = body->find("config"); c != body->end() && !c->is_null()) {
      cfg = codec::decode_config(*c);
    }
    if (auto b = body->find("bins"); b != body->end() && !b->is_null()) {
      if (!b->is_array()) return send_error(res, 400, "'bins' must be an array of edges");
      bins.edges.clear();
      for (const auto& e : *b) {
        if (!e.is_number()) return send_error(res, 400, "'bins' must be an array of edges");
        bins.edges.push_back(e.get<double>());
      }
    }
    {
      std::shared_lock lock(mutex_);
      if (state_.predictions.find(method) == state_.predictions.end()) {
        json methods = json::array();
        for (const auto& [name, set] : state_.predictions) methods.push_back(name);
        lock.unlock();
        return send_json(res, 404, {{"error", "unknown method '" + method + "'"},
                                    {"methods", methods}});
      }
    }
    send_json(res, 200, evaluate(method, cfg, bins));
  });

  s.Get("/api/criterion/curves", [this](const httplib::Request& req, httplib::Response& res) {
    double step = 1.0;
    if (req.has_param("step")) {
      const std::string text = req.get_param_value("step");
      char* end = nullptr;
      step = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size()) {
        return send_error(res, 400, "step must be a number");
      }
    }
    if (!(step > 0.0 && step <= 90.0)) return send_error(res, 400, "step must satisfy 0 < step <= 90");
    send_json(res, 200, curves_to_json(config_.criterion, step));
  });

  s.Get("/api/config", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, codec::encode(config_.criterion));
  });
}

}  // namespace guideval
