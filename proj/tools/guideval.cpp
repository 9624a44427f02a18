// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

// guideval: score direction-angle predictions against human guidance
// decisions, emit criterion curves, synthesize fixtures, and serve the
// labelling backend.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "guideval/codec.hpp"
#include "guideval/dataset.hpp"
#include "guideval/evaluator.hpp"
#include "guideval/report.hpp"
#include "guideval/service.hpp"
#include "guideval/synthetic.hpp"

namespace fs = std::filesystem;
using namespace guideval;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

void print_issues(const IssueList& issues, const char* kind) {
  for (const auto& i : issues) std::cerr << kind << ": " << i.str() << "\n";
}

CriterionConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw IoError("cannot open criterion config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("criterion config '" + path + "': " + e.what());
  }
  return codec::decode_config(j);
}

void write_output(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<HumanAnnotation> load_checked_annotations(const DatasetManifest& manifest,
                                                      const fs::path& path) {
  AnnotationSet set = load_annotations(path);
  check_against_manifest(manifest, set.records, set.report.errors);
  print_issues(set.report.warnings, "warning");
  if (!set.report.ok()) {
    print_issues(set.report.errors, "error");
    throw ValidationError(path.string() + ": " + std::to_string(set.report.errors.size()) +
                          " validation error(s), " + std::to_string(set.report.rejected) +
                          " of " + std::to_string(set.report.records_in) + " records rejected");
  }
  return std::move(set.records);
}

struct EvaluateArgs {
  std::string dataset, annotations, predictions, config, out_dir, method;
  std::string format = "text";
  std::vector<double> bins;
};

void run_evaluate(const EvaluateArgs& args) {
  const Format format = parse_format(args.format);
  if (format == Format::kSvg) throw ValidationError("evaluate supports text, csv or json");
  const CriterionConfig cfg = load_config(args.config);
  HistogramBins bins;
  if (!args.bins.empty()) bins.edges = args.bins;
  bins.validate();

  const DatasetManifest manifest = load_dataset(args.dataset);
  const auto annotations = load_checked_annotations(manifest, args.annotations);
  PredictionSet preds = load_predictions(args.predictions);
  check_against_manifest(manifest, preds.records, preds.report.errors);
  if (!preds.report.ok()) {
    print_issues(preds.report.errors, "error");
    throw ValidationError(args.predictions + ": prediction file failed validation");
  }

  std::string method = args.method;
  if (method.empty()) {
    std::set<std::string> methods;
    for (const auto& p : preds.records) methods.insert(p.method_name);
    if (methods.size() != 1) {
      std::string names;
      for (const auto& m : methods) names += " " + m;
      throw ValidationError("prediction file holds " + std::to_string(methods.size()) +
                            " methods; pick one with --method:" + names);
    }
    method = *methods.begin();
  }

  const EvaluationReport report =
      evaluate_dataset(manifest, annotations, preds.records, method, cfg, bins);
  const fs::path out = fs::path(args.out_dir) / ("report." + std::string(format_extension(format)));
  write_output(out, render_report(report, format));
  std::cout << "wrote " << out.string() << "\n";
}

int run_serve(ServiceConfig config) {
  const std::string host = config.host;
  Service service(std::move(config));
  const int port = service.bind();
  std::cout << "serving " << service.manifest().dataset_id() << " ("
            << service.manifest().frames().size() << " frames) on http://" << host
            << ":" << port << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&service] {
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });
  service.listen();
  g_interrupted = true;
  watcher.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate computer-vision guidance decisions against human ground truth"};
  app.require_subcommand(1);

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions and write a report");
  evaluate->add_option("--dataset", eval.dataset, "Dataset manifest (JSON)")->required();
  evaluate->add_option("--annotations", eval.annotations, "Annotation file (JSON Lines)")->required();
  evaluate->add_option("--predictions", eval.predictions, "Prediction file (JSON Lines)")->required();
  evaluate->add_option("--config", eval.config, "Criterion config (JSON)");
  evaluate->add_option("--bins", eval.bins, "Histogram edges in degrees, e.g. 5,10,15")
      ->delimiter(',');
  evaluate->add_option("--method", eval.method, "Method to score when the file holds several");
  evaluate->add_option("--out-dir", eval.out_dir, "Output directory")->required();
  evaluate->add_option("--format", eval.format, "text|csv|json")->capture_default_str();

  std::string curves_config, curves_format = "csv", curves_out;
  double curves_step = 1.0;
  auto* curves = app.add_subcommand("curves", "Write the five criterion curves");
  curves->add_option("--config", curves_config, "Criterion config (JSON)");
  curves->add_option("--step", curves_step, "Sample spacing in degrees")->required();
  curves->add_option("--format", curves_format, "csv|svg|json")->capture_default_str();
  curves->add_option("--out", curves_out, "Output path")->required();

  std::string synth_dataset, synth_annotations, synth_out, synth_method = "synthetic";
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Noisy predictions from ground truth");
  synth->add_option("--dataset", synth_dataset, "Dataset manifest")->required();
  synth->add_option("--annotations", synth_annotations, "Annotation file")->required();
  synth->add_option("--noise", synth_noise, "Noise standard deviation in degrees")->required();
  synth->add_option("--seed", synth_seed, "Random seed")->required();
  synth->add_option("--method", synth_method, "method_name to record")->capture_default_str();
  synth->add_option("--out", synth_out, "Prediction file to write")->required();

  SyntheticDatasetOptions fixture_opts;
  std::string fixture_dir;
  auto* fixture = app.add_subcommand("make-fixture", "Write a synthetic dataset and annotations");
  fixture->add_option("--frames", fixture_opts.frames)->capture_default_str();
  fixture->add_option("--seed", fixture_opts.seed)->capture_default_str();
  fixture->add_option("--scene", fixture_opts.scene_kind)->capture_default_str();
  fixture->add_option("--out-dir", fixture_dir)->required();

  ServiceConfig serve_cfg;
  std::string serve_config_path;
  std::vector<std::string> serve_predictions;
  std::string serve_manifest, serve_annotations;
  auto* serve = app.add_subcommand("serve", "Run the labelling and evaluation HTTP service");
  serve->add_option("--dataset", serve_manifest, "Dataset manifest")->required();
  serve->add_option("--annotations", serve_annotations,
                    "Annotation file, loaded if present and written on shutdown")
      ->required();
  serve->add_option("--predictions", serve_predictions, "Prediction files to preload");
  serve->add_option("--config", serve_config_path, "Criterion config (JSON)");
  serve->add_option("--host", serve_cfg.host)->capture_default_str();
  serve->add_option("--port", serve_cfg.port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (evaluate->parsed()) {
      run_evaluate(eval);
    } else if (curves->parsed()) {
      const Format format = parse_format(curves_format);
      write_output(curves_out,
                   render_criterion_curves(load_config(curves_config), curves_step, format));
      std::cout << "wrote " << curves_out << "\n";
    } else if (synth->parsed()) {
      const DatasetManifest manifest = load_dataset(synth_dataset);
      const auto annotations = load_checked_annotations(manifest, synth_annotations);
      const auto preds =
          synthetic_predictions(manifest, annotations, synth_noise, synth_seed, synth_method);
      save_predictions(preds, synth_out);
      std::cout << "wrote " << preds.size() << " predictions to " << synth_out << "\n";
    } else if (fixture->parsed()) {
      const fs::path manifest = write_synthetic_dataset(make_synthetic_dataset(fixture_opts), fixture_dir);
      std::cout << "wrote " << manifest.string() << "\n";
    } else if (serve->parsed()) {
      serve_cfg.manifest_path = serve_manifest;
      serve_cfg.annotations_path = serve_annotations;
      for (const auto& p : serve_predictions) serve_cfg.prediction_paths.emplace_back(p);
      serve_cfg.criterion = load_config(serve_config_path);
      return run_serve(std::move(serve_cfg));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_issues(e.issues(), "  issue");
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
