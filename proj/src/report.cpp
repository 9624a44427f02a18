// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#include "guideval/report.hpp"

#include <cstdarg>
#include <cstdlib>
#include <cstdio>

#include "guideval/codec.hpp"

namespace guideval {

using nlohmann::json;

namespace {

std::string printf_string(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string printf_string(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int n = std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (n < 0) return {};
  if (static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, static_cast<std::size_t>(n));
  std::string big(static_cast<std::size_t>(n) + 1, '\0');
  va_start(args, fmt);
  std::vsnprintf(big.data(), big.size(), fmt, args);
  va_end(args);
  big.resize(static_cast<std::size_t>(n));
  return big;
}

// Shortest text that parses back to the same double.
std::string exact(double v) {
  for (int precision = 15; precision <= 17; ++precision) {
    std::string s = printf_string("%.*g", precision, v);
    if (std::strtod(s.c_str(), nullptr) == v) return s;
  }
  return printf_string("%.17g", v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* level_label(std::size_t level) {
  static constexpr std::array<const char*, 5> kLabels = {"Without deviation", "1 level",
                                                         "2 levels", "3 levels", "4 levels"};
  return kLabels[level];
}

std::string render_text(const EvaluationReport& rep) {
  const AggregateReport& a = rep.aggregate;
  std::string out;
  out += "Guidance decision evaluation\n";
  out += "dataset: " + rep.dataset_id + "\n";
  out += "method:  " + rep.method_name + "\n";
  out += printf_string("frames evaluated: %zu (annotated without prediction: %zu, "
                       "predictions without annotation: %zu)\n\n",
                       a.n_frames, rep.n_missing_predictions, rep.n_unannotated_predictions);

  out += printf_string("%-36s%s\n", "Levels of deviation", "Percentage of decisions");
  out += printf_string("%-36s%6.1f %%\n", level_label(0), a.level_distribution[0]);
  out += printf_string("%-12s%-24s%6.1f %%\n", level_label(1), "Overall", a.level_distribution[1]);
  const std::string t = printf_string("%g", a.split_threshold);
  out += printf_string("%-12s%-24s%6.1f %%\n", "", ("deviation < " + t + " deg").c_str(),
                       a.one_level_below);
  out += printf_string("%-12s%-24s%6.1f %%\n", "", ("deviation >= " + t + " deg").c_str(),
                       a.one_level_at_or_above);
  if (a.one_level_no_delta > 0.0) {
    out += printf_string("%-12s%-24s%6.1f %%\n", "", "no reference angle", a.one_level_no_delta);
  }
  for (std::size_t l = 2; l < 5; ++l) {
    out += printf_string("%-36s%6.1f %%\n", level_label(l), a.level_distribution[l]);
  }
  out += "\n";
  if (a.mean_delta) {
    out += printf_string("Mean angle deviation: %.2f deg (%zu frames with a reference angle, "
                         "%zu excluded)\n",
                         *a.mean_delta, a.n_with_delta, a.n_without_gt_angle);
  } else {
    out += printf_string("Mean angle deviation: n/a (%zu frames without a reference angle)\n",
                         a.n_without_gt_angle);
  }
  out += printf_string("Mean soft accuracy:   %.2f %%\n", a.mean_soft);
  out += printf_string("Exact match rate:     %.1f %%\n\n", a.exact_match_rate);

  out += printf_string("%-24s%s\n", "Deviation (deg)", "Frames");
  for (std::size_t b = 0; b < a.delta_histogram.size(); ++b) {
    out += printf_string("%-24s%zu\n", a.bins.label(b).c_str(), a.delta_histogram[b]);
  }
  out += "\nPer-frame results\n";
  out += printf_string("%-20s %-13s %9s %10s %-13s %8s %5s %9s\n", "frame_id", "gt_direction",
                       "gt_angle", "pred_angle", "pred_dir", "delta", "level", "soft");
  for (const auto& f : rep.per_frame) {
    const std::string gt_angle = f.gt_angle ? printf_string("%.2f", f.gt_angle->degrees()) : "-";
    const std::string delta = f.delta ? printf_string("%.2f", f.delta->degrees()) : "-";
    out += printf_string("%-20s %-13s %9s %10.2f %-13s %8s %5d %9.6f\n", f.frame_id.c_str(),
                         std::string(to_token(f.gt_direction)).c_str(), gt_angle.c_str(),
                         f.pred_angle.degrees(), std::string(to_token(f.pred_direction)).c_str(),
                         delta.c_str(), f.level, f.soft.value());
  }
  return out;
}

std::string render_csv(const EvaluationReport& rep) {
  const AggregateReport& a = rep.aggregate;
  std::string out = "metric,key,value\n";
  auto row = [&](const std::string& metric, const std::string& key, const std::string& value) {
    out += csv_field(metric) + "," + csv_field(key) + "," + csv_field(value) + "\n";
  };
  row("dataset_id", "", rep.dataset_id);
  row("method_name", "", rep.method_name);
  row("n_frames", "", std::to_string(a.n_frames));
  row("n_with_delta", "", std::to_string(a.n_with_delta));
  row("n_without_gt_angle", "", std::to_string(a.n_without_gt_angle));
  row("n_missing_predictions", "", std::to_string(rep.n_missing_predictions));
  row("n_unannotated_predictions", "", std::to_string(rep.n_unannotated_predictions));
  row("mean_delta", "", a.mean_delta ? exact(*a.mean_delta) : "");
  for (std::size_t l = 0; l < 5; ++l) row("level_pct", std::to_string(l), exact(a.level_distribution[l]));
  row("one_level_pct", "below", exact(a.one_level_below));
  row("one_level_pct", "at_or_above", exact(a.one_level_at_or_above));
  row("one_level_pct", "no_delta", exact(a.one_level_no_delta));
  row("split_threshold", "", exact(a.split_threshold));
  for (std::size_t b = 0; b < a.delta_histogram.size(); ++b) {
    row("histogram", a.bins.label(b), std::to_string(a.delta_histogram[b]));
  }
  row("mean_soft_pct", "", exact(a.mean_soft));
  row("exact_match_pct", "", exact(a.exact_match_rate));
  out += "\nframe_id,gt_direction,gt_angle,pred_angle,pred_direction,delta,level,soft\n";
  for (const auto& f : rep.per_frame) {
    out += csv_field(f.frame_id) + "," + std::string(to_token(f.gt_direction)) + "," +
           (f.gt_angle ? exact(f.gt_angle->degrees()) : "") + "," + exact(f.pred_angle.degrees()) +
           "," + std::string(to_token(f.pred_direction)) + "," +
           (f.delta ? exact(f.delta->degrees()) : "") + "," + std::to_string(f.level) + "," +
           exact(f.soft.value()) + "\n";
  }
  return out;
}

std::string render_curves_csv(const CriterionConfig& cfg, double step) {
  const std::vector<double> angles = curve_angles(step, cfg);
  std::array<std::vector<CurveSample>, 5> curves;
  for (std::size_t i = 0; i < 5; ++i) curves[i] = criterion_curve(kCurveOrder[i], step, cfg);
  std::string out = "angle";
  for (auto d : kCurveOrder) out += "," + std::string(to_token(d));
  out += "\n";
  for (std::size_t k = 0; k < angles.size(); ++k) {
    out += exact(angles[k]);
    for (const auto& c : curves) out += "," + exact(c[k].accuracy);
    out += "\n";
  }
  return out;
}

std::string render_curves_svg(const CriterionConfig& cfg, double step) {
  constexpr double kWidth = 640, kPanelH = 170, kLeft = 50, kRight = 20, kTop = 30, kPlotH = 110;
  const double plot_w = kWidth - kLeft - kRight;
  const double r = cfg.full_range;
  std::string out = printf_string(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kPanelH * 5);
  out += printf_string("<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", kWidth,
                       kPanelH * 5);
  for (std::size_t i = 0; i < 5; ++i) {
    const double y0 = kPanelH * static_cast<double>(i) + kTop;
    auto px = [&](double angle) { return kLeft + (angle + r) / (2 * r) * plot_w; };
    auto py = [&](double acc) { return y0 + (1.0 - acc) * kPlotH; };
    out += printf_string("<g id=\"%s\">\n", std::string(to_token(kCurveOrder[i])).c_str());
    out += printf_string("<text x=\"%.1f\" y=\"%.1f\">%s</text>\n", kLeft, y0 - 10,
                         curve_caption(i).c_str());
    out += printf_string("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                         "fill=\"none\" stroke=\"#888\"/>\n",
                         kLeft, y0, plot_w, kPlotH);
    for (double tick : {-r, -r / 2, 0.0, r / 2, r}) {
      out += printf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%g</text>\n",
                           px(tick), y0 + kPlotH + 14, tick);
    }
    out += printf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1</text>\n",
                         kLeft - 4, py(1.0) + 4);
    out += printf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">0</text>\n",
                         kLeft - 4, py(0.0) + 4);
    out += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    const auto samples = criterion_curve(kCurveOrder[i], step, cfg);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (k > 0) out += " ";
      out += printf_string("%.2f,%.2f", px(samples[k].angle), py(samples[k].accuracy));
    }
    out += "\"/>\n</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

Format parse_format(std::string_view token) {
  if (token == "text") return Format::kText;
  if (token == "csv") return Format::kCsv;
  if (token == "json") return Format::kJson;
  if (token == "svg") return Format::kSvg;
  throw ValidationError("unknown format '" + std::string(token) + "'");
}

std::string_view format_extension(Format f) noexcept {
  switch (f) {
    case Format::kText: return "txt";
    case Format::kCsv: return "csv";
    case Format::kJson: return "json";
    case Format::kSvg: return "svg";
  }
  return "";
}

std::string curve_caption(std::size_t panel) {
  return std::string(1, static_cast<char>('a' + panel)) + ") " +
         std::string(to_label(kCurveOrder[panel]));
}

json report_to_json(const EvaluationReport& rep) {
  const AggregateReport& a = rep.aggregate;
  json hist_labels = json::array();
  for (std::size_t b = 0; b < a.delta_histogram.size(); ++b) hist_labels.push_back(a.bins.label(b));
  json agg = {
      {"n_frames", a.n_frames},
      {"n_with_delta", a.n_with_delta},
      {"n_without_gt_angle", a.n_without_gt_angle},
      {"n_missing_predictions", rep.n_missing_predictions},
      {"n_unannotated_predictions", rep.n_unannotated_predictions},
      {"mean_delta", a.mean_delta ? json(*a.mean_delta) : json(nullptr)},
      {"level_counts", a.level_counts},
      {"level_distribution", a.level_distribution},
      {"one_level_split",
       {{"threshold", a.split_threshold},
        {"below", a.one_level_below},
        {"at_or_above", a.one_level_at_or_above},
        {"no_delta", a.one_level_no_delta}}},
      {"histogram", {{"edges", a.bins.edges}, {"labels", hist_labels}, {"counts", a.delta_histogram}}},
      {"mean_soft", a.mean_soft},
      {"exact_match_rate", a.exact_match_rate},
  };
  json frames = json::array();
  for (const auto& f : rep.per_frame) {
    frames.push_back({
        {"frame_id", f.frame_id},
        {"gt_direction", to_token(f.gt_direction)},
        {"gt_angle", f.gt_angle ? json(f.gt_angle->degrees()) : json(nullptr)},
        {"pred_angle", f.pred_angle.degrees()},
        {"pred_direction", to_token(f.pred_direction)},
        {"delta", f.delta ? json(f.delta->degrees()) : json(nullptr)},
        {"level", f.level},
        {"soft", f.soft.value()},
    });
  }
  return {{"schema_version", kSchemaVersion},
          {"dataset_id", rep.dataset_id},
          {"method_name", rep.method_name},
          {"config", codec::encode(rep.config)},
          {"aggregate", std::move(agg)},
          {"per_frame", std::move(frames)}};
}

std::string render_report(const EvaluationReport& report, Format format) {
  switch (format) {
    case Format::kText: return render_text(report);
    case Format::kCsv: return render_csv(report);
    case Format::kJson: return report_to_json(report).dump(2) + "\n";
    case Format::kSvg: break;
  }
  throw ValidationError("reports render as text, csv or json");
}

json curves_to_json(const CriterionConfig& cfg, double step) {
  json curves = json::array();
  for (std::size_t i = 0; i < kCurveOrder.size(); ++i) {
    json samples = json::array();
    for (const auto& s : criterion_curve(kCurveOrder[i], step, cfg)) {
      samples.push_back({s.angle, s.accuracy});
    }
    curves.push_back({{"direction", to_token(kCurveOrder[i])},
                      {"label", curve_caption(i)},
                      {"samples", std::move(samples)}});
  }
  return {{"step", step}, {"config", codec::encode(cfg)}, {"curves", std::move(curves)}};
}

std::string render_criterion_curves(const CriterionConfig& cfg, double step, Format format) {
  cfg.validate();
  switch (format) {
    case Format::kCsv: return render_curves_csv(cfg, step);
    case Format::kSvg: return render_curves_svg(cfg, step);
    case Format::kJson: return curves_to_json(cfg, step).dump(2) + "\n";
    case Format::kText: break;
  }
  throw ValidationError("criterion curves render as csv, svg or json");
}

}  // namespace guideval
