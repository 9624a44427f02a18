// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "guideval/dataset.hpp"
#include "guideval/evaluator.hpp"

namespace httplib {
class Server;
}

namespace guideval {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path manifest_path;
  /// Loaded at start if present; unsaved changes are written here on stop().
  std::filesystem::path annotations_path;
  std::vector<std::filesystem::path> prediction_paths;
  CriterionConfig criterion;
  HistogramBins bins;
};

/// Annotation working set plus loaded prediction sets. Writers take the
/// lock exclusively, one at a time; readers copy a snapshot under a shared
/// lock.
struct SessionState {
  struct Entry {
    HumanAnnotation annotation;
    std::uint64_t revision = 0;
  };
  std::map<std::string, Entry> annotations;
  std::map<std::string, std::vector<Prediction>> predictions;
  bool dirty = false;
};

/// HTTP + JSON backend for the labelling and review front end.
///
///   GET  /api/frames                      frame records
///   GET  /api/frames/{id}/image           original image bytes
///   GET  /api/annotations                 full working set
///   GET  /api/annotations/{id}            one record, revision in X-Revision
///   PUT  /api/annotations/{id}            upsert, responds {revision, warnings}
///   POST /api/predictions/{method}        replace one method's prediction set
///   POST /api/evaluate                    {method_name, config?, bins?} -> report
///   GET  /api/criterion/curves?step=      five labelled sample arrays
///   GET  /api/config                      active criterion config
class Service {
 public:
  /// Loads the dataset, annotations and predictions. Throws IoError or
  /// ValidationError before any socket is bound.
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the port. Throws IoError.
  int bind();
  /// Serves until stop(). Requires bind().
  void listen();
  /// Stops serving and flushes unsaved annotations. Idempotent.
  void stop();
  /// Writes the working set if it changed. Returns true if it wrote.
  bool flush();

  const DatasetManifest& manifest() const noexcept { return manifest_; }

  /// Same document the CLI writes for --format json. Throws
  /// ValidationError for evaluation problems.
  nlohmann::json evaluate(const std::string& method_name, const CriterionConfig& cfg,
                          const HistogramBins& bins) const;

 private:
  void register_routes();

  ServiceConfig config_;
  DatasetManifest manifest_;
  std::filesystem::path root_;  // canonical dataset root
  mutable std::shared_mutex mutex_;
  SessionState state_;
  std::unique_ptr<httplib::Server> server_;
  bool bound_ = false;
  bool stopped_ = false;
};

}  // namespace guideval
