// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <mutex>
#include <set>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "fixtures.hpp"
#include "guideval/codec.hpp"
#include "guideval/report.hpp"
#include "guideval/service.hpp"

namespace guideval {
namespace {

using nlohmann::json;

// Runs a Service on a free loopback port for the lifetime of the object.
class RunningService {
 public:
  explicit RunningService(ServiceConfig cfg) : service_(std::make_unique<Service>(std::move(cfg))) {
    port_ = service_->bind();
    thread_ = std::thread([this] { service_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  ~RunningService() { stop(); }

  void stop() {
    if (!thread_.joinable()) return;
    service_->stop();
    thread_.join();
  }
  httplib::Client& client() { return *client_; }
  Service& service() { return *service_; }
  int port() const { return port_; }

 private:
  std::unique_ptr<Service> service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

ServiceConfig gold_config(const testing::GoldPaths& p, bool with_predictions = true) {
  ServiceConfig cfg;
  cfg.port = 0;
  cfg.manifest_path = p.manifest;
  cfg.annotations_path = p.annotations;
  if (with_predictions) cfg.prediction_paths = {p.predictions};
  return cfg;
}

TEST(Service, ListsFrames) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  auto res = s.client().Get("/api/frames");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json frames = json::parse(res->body);
  ASSERT_EQ(frames.size(), 10u);
  EXPECT_EQ(frames[0]["frame_id"], "f00");
  EXPECT_EQ(frames[0]["source"]["frame_index"], 0);
}

TEST(Service, MissingManifestRefusesToStart) {
  testing::TempDir dir;
  ServiceConfig cfg;
  cfg.port = 0;
  cfg.manifest_path = dir / "missing.json";
  EXPECT_THROW(Service{cfg}, IoError);
}

TEST(Service, AnnotationPutGetRoundTrip) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  const json record = {{"schema_version", 1},
                       {"frame_id", "f03"},
                       {"roi", {{"x", 100.0}, {"y", 50.0}, {"w", 40.0}, {"h", 30.0}}},
                       {"direction", "sharp_left"},
                       {"annotator", "ana"},
                       {"created_at", "2024-05-01T10:00:00.250Z"}};
  auto put = s.client().Put("/api/annotations/f03", record.dump(), "application/json");
  ASSERT_TRUE(put);
  ASSERT_EQ(put->status, 200) << put->body;
  EXPECT_EQ(json::parse(put->body)["revision"], 1);

  auto get = s.client().Get("/api/annotations/f03");
  ASSERT_TRUE(get);
  EXPECT_EQ(get->status, 200);
  EXPECT_EQ(json::parse(get->body), record);
  EXPECT_EQ(get->get_header_value("X-Revision"), "1");

  put = s.client().Put("/api/annotations/f03", record.dump(), "application/json");
  EXPECT_EQ(json::parse(put->body)["revision"], 2);

  const json all = json::parse(s.client().Get("/api/annotations")->body);
  EXPECT_EQ(all.size(), 10u);
}

TEST(Service, AnnotationValidation) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  auto bad_token = s.client().Put("/api/annotations/f01", R"({"direction":"left"})", "application/json");
  EXPECT_EQ(bad_token->status, 422);
  EXPECT_NE(bad_token->body.find("'left'"), std::string::npos);

  auto empty = s.client().Put("/api/annotations/f01", R"({"annotator":"x"})", "application/json");
  EXPECT_EQ(empty->status, 422);

  auto outside = s.client().Put("/api/annotations/f01",
                                R"({"roi":{"x":630,"y":0,"w":20,"h":20}})", "application/json");
  EXPECT_EQ(outside->status, 422);

  auto unknown = s.client().Put("/api/annotations/nope", R"({"direction":"straight"})", "application/json");
  EXPECT_EQ(unknown->status, 404);

  auto mismatch = s.client().Put("/api/annotations/f01",
                                 R"({"frame_id":"f02","direction":"straight"})", "application/json");
  EXPECT_EQ(mismatch->status, 400);

  auto malformed = s.client().Put("/api/annotations/f01", "{", "application/json");
  EXPECT_EQ(malformed->status, 400);

  // Direction alone is a complete decision.
  auto direction_only = s.client().Put("/api/annotations/f01", R"({"direction":"straight"})", "application/json");
  EXPECT_EQ(direction_only->status, 200) << direction_only->body;
  EXPECT_EQ(s.client().Get("/api/annotations/missing")->status, 404);
}

TEST(Service, ConcurrentWritesGetDistinctRevisions) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  std::mutex m;
  std::set<int> revisions;
  std::vector<std::thread> threads;
  const int kWriters = 8, kEach = 10;
  for (int t = 0; t < kWriters; ++t) {
    threads.emplace_back([&, t] {
      httplib::Client client("127.0.0.1", s.port());
      for (int i = 0; i < kEach; ++i) {
        const json body = {{"direction", "slight_left"}, {"annotator", "w" + std::to_string(t)}};
        auto res = client.Put("/api/annotations/f05", body.dump(), "application/json");
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200);
        std::lock_guard lock(m);
        revisions.insert(json::parse(res->body)["revision"].get<int>());
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(revisions.size(), static_cast<std::size_t>(kWriters * kEach));
  EXPECT_EQ(*revisions.rbegin(), kWriters * kEach);
  EXPECT_EQ(s.client().Get("/api/annotations/f05")->get_header_value("X-Revision"),
            std::to_string(kWriters * kEach));
}

TEST(Service, FlushesOnStop) {
  testing::TempDir dir;
  const auto paths = testing::write_gold_fixture(dir.path());
  {
    RunningService s(gold_config(paths));
    auto res = s.client().Put("/api/annotations/f02",
                              R"({"direction":"sharp_right","annotator":"late","created_at":"2024-06-01T00:00:00Z"})",
                              "application/json");
    ASSERT_EQ(res->status, 200);
    s.stop();
  }
  const AnnotationSet saved = load_annotations(paths.annotations);
  ASSERT_TRUE(saved.report.ok());
  auto it = std::find_if(saved.records.begin(), saved.records.end(),
                         [](const HumanAnnotation& a) { return a.frame_id == "f02"; });
  ASSERT_NE(it, saved.records.end());
  EXPECT_EQ(it->annotator, "late");
  EXPECT_EQ(it->direction, SimplifiedDirection::kSharpRight);
}

TEST(Service, ServesImagesInsideRootOnly) {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "data");
  testing::write_text(dir / "data" / "a.png", std::string("\x89PNG\r\n\x1a\n", 8) + "rest");
  testing::write_text(dir / "secret.png", "top secret");
  testing::write_text(dir / "data" / "v.mp4", "v");
  testing::write_text(dir / "data" / "m.json", R"({"schema_version":1,"dataset_id":"img","frames":[
    {"frame_id":"a","source":"a.png","width":10,"height":10},
    {"frame_id":"escape","source":"../secret.png","width":10,"height":10},
    {"frame_id":"vid","source":{"path":"v.mp4","frame_index":0},"width":10,"height":10}]})");
  ServiceConfig cfg;
  cfg.port = 0;
  cfg.manifest_path = dir / "data" / "m.json";
  cfg.annotations_path = dir / "data" / "ann.jsonl";
  RunningService s(cfg);

  auto img = s.client().Get("/api/frames/a/image");
  ASSERT_TRUE(img);
  EXPECT_EQ(img->status, 200);
  EXPECT_EQ(img->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(img->body, testing::read_text(dir / "data" / "a.png"));

  EXPECT_EQ(s.client().Get("/api/frames/escape/image")->status, 403);
  EXPECT_EQ(s.client().Get("/api/frames/vid/image")->status, 415);
  EXPECT_EQ(s.client().Get("/api/frames/nope/image")->status, 404);
  EXPECT_EQ(s.client().Get("/api/frames/..%2Fsecret.png/image")->status, 404);
}

TEST(Service, EvaluateMatchesLibraryReport) {
  testing::TempDir dir;
  const auto paths = testing::write_gold_fixture(dir.path());
  RunningService s(gold_config(paths));
  auto res = s.client().Post("/api/evaluate", R"({"method_name":"gold-method"})", "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const json got = json::parse(res->body);
  const auto g = testing::gold_fixture();
  const json expected =
      report_to_json(evaluate_dataset(g.manifest, g.annotations, g.predictions, "gold-method"));
  EXPECT_EQ(got["aggregate"], expected["aggregate"]);
  EXPECT_EQ(got["per_frame"], expected["per_frame"]);
  EXPECT_NEAR(got["aggregate"]["mean_soft"].get<double>(), testing::kGoldMeanSoft, 1e-9);
}

TEST(Service, EvaluateErrors) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  auto unknown = s.client().Post("/api/evaluate", R"({"method_name":"nope"})", "application/json");
  ASSERT_EQ(unknown->status, 404);
  EXPECT_EQ(json::parse(unknown->body)["methods"], json::array({"gold-method"}));

  auto bad_cfg = s.client().Post(
      "/api/evaluate", R"({"method_name":"gold-method","config":{"ramp_width":-1}})", "application/json");
  EXPECT_EQ(bad_cfg->status, 422);
  EXPECT_EQ(s.client().Post("/api/evaluate", R"({"x":1})", "application/json")->status, 400);
}

TEST(Service, PredictionUploadThenEvaluate) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path()), false));
  json preds = json::array();
  for (int i = 0; i < 10; ++i) {
    preds.push_back({{"frame_id", "f0" + std::to_string(i)}, {"angle", 0.0}});
  }
  auto up = s.client().Post("/api/predictions/zero", preds.dump(), "application/json");
  ASSERT_EQ(up->status, 200) << up->body;
  EXPECT_EQ(json::parse(up->body)["count"], 10);

  auto res = s.client().Post("/api/evaluate", R"({"method_name":"zero","bins":[1,2]})", "application/json");
  ASSERT_EQ(res->status, 200) << res->body;
  const json agg = json::parse(res->body)["aggregate"];
  EXPECT_EQ(agg["histogram"]["counts"].size(), 3u);
  EXPECT_EQ(agg["n_frames"], 10);

  json bad = json::array({{{"frame_id", "zz"}, {"angle", 1.0}}, {{"frame_id", "f00"}, {"angle", 100.0}}});
  EXPECT_EQ(s.client().Post("/api/predictions/zero", bad.dump(), "application/json")->status, 422);
}

TEST(Service, PerfectPredictionsScoreHundred) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path()), false));
  const auto g = testing::gold_fixture();
  json preds = json::array();
  for (const auto& a : g.annotations) {
    preds.push_back({{"frame_id", a.frame_id}, {"angle", a.explicit_angle->degrees()}});
  }
  ASSERT_EQ(s.client().Post("/api/predictions/perfect", preds.dump(), "application/json")->status, 200);
  auto res = s.client().Post("/api/evaluate", R"({"method_name":"perfect"})", "application/json");
  EXPECT_EQ(json::parse(res->body)["aggregate"]["mean_soft"], 100.0);
}

TEST(Service, CurvesAndConfig) {
  testing::TempDir dir;
  RunningService s(gold_config(testing::write_gold_fixture(dir.path())));
  auto res = s.client().Get("/api/criterion/curves?step=1");
  ASSERT_EQ(res->status, 200);
  const json j = json::parse(res->body);
  ASSERT_EQ(j["curves"].size(), 5u);
  EXPECT_EQ(j["curves"][0]["label"], "a) straight");
  EXPECT_EQ(j["curves"][4]["direction"], "sharp_right");
  EXPECT_EQ(j["curves"][0]["samples"].size(), 181u);
  EXPECT_EQ(j["curves"][0]["samples"][90], json::array({0.0, 1.0}));
  EXPECT_EQ(s.client().Get("/api/criterion/curves?step=0")->status, 400);
  EXPECT_EQ(s.client().Get("/api/criterion/curves?step=abc")->status, 400);

  const json cfg = json::parse(s.client().Get("/api/config")->body);
  EXPECT_EQ(cfg, codec::encode(CriterionConfig{}));
}

}  // namespace
}  // namespace guideval
