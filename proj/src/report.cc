/* Copyright 2026 The Whatif Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "whatif/report.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "whatif/format.h"

#ifndef WHATIF_VERSION
#define WHATIF_VERSION "0.0.0"
#endif

namespace whatif {
namespace {

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string Coord(double v) { return fmt::format("{:.2f}", v); }

std::string TickLabel(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    return fmt::format("{:.0f}", v);
  }
  return fmt::format("{:g}", v);
}

double AxisValue(const SweepRow& row, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBandwidth:
      return row.bandwidth_bps / kGbps;
    case SweepAxis::kWorkers:
      return row.n_workers;
    case SweepAxis::kRatio:
      return row.compression_ratio;
  }
  return 0.0;
}

}  // namespace

std::string_view ToolVersion() { return WHATIF_VERSION; }

std::string ConfigDigest(std::string_view canonical_config) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(canonical_config.data(), canonical_config.size(), md.data(), &len,
             EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    fmt::format_to(std::back_inserter(hex), "{:02x}", md[i]);
  }
  return hex;
}

std::string RenderReportCsv(const ReportBundle& bundle) {
  std::string out;
  StrAppend(&out, "# tool_version: ", bundle.metadata.tool_version, "\n");
  StrAppend(&out, "# config_digest: ", bundle.metadata.config_digest,
                  "\n");
  StrAppend(&out, "# timestamp: ", bundle.metadata.timestamp, "\n");
  StrAppend(&out, SweepRowsToCsv(bundle.rows));
  return out;
}

std::string CsvBody(std::string_view csv) {
  std::string out;
  for (std::string_view line : SplitLines(csv)) {
    if (!line.empty() && line.front() == '#') continue;
    StrAppend(&out, line, "\n");
  }
  return out;
}

absl::StatusOr<SweepAxis> SweepAxisFromName(std::string_view name) {
  if (name == "bandwidth") return SweepAxis::kBandwidth;
  if (name == "workers") return SweepAxis::kWorkers;
  if (name == "ratio") return SweepAxis::kRatio;
  return absl::InvalidArgumentError(StrCat(
      "axis: unknown axis \"", name, "\" (expected bandwidth, workers or ratio)"));
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBandwidth:
      return "bandwidth";
    case SweepAxis::kWorkers:
      return "workers";
    case SweepAxis::kRatio:
      return "ratio";
  }
  return "";
}

std::string RenderSvg(const LineChart& chart) {
  constexpr double kWidth = 760, kHeight = 480;
  constexpr double kLeft = 70, kRight = 200, kTop = 50, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::set<double> xs;
  for (const ChartSeries& s : chart.series) {
    for (const ChartPoint& p : s.line) xs.insert(p.x);
    for (const ChartPoint& p : s.markers) xs.insert(p.x);
  }
  const bool log_x = chart.log_x && !xs.empty() && *xs.begin() > 0;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  double x_min = xs.empty() ? 0.0 : tx(*xs.begin());
  double x_max = xs.empty() ? 1.0 : tx(*xs.rbegin());
  if (x_max <= x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  auto px = [&](double x) {
    return kLeft + (tx(x) - x_min) / (x_max - x_min) * plot_w;
  };
  // Scaling factors live in [0, 1].
  auto py = [&](double y) {
    return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * plot_h;
  };

  std::string svg;
  StrAppend(
      &svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", Coord(kWidth),
      "\" height=\"", Coord(kHeight), "\" viewBox=\"0 0 ", Coord(kWidth), " ",
      Coord(kHeight), "\" font-family=\"sans-serif\" font-size=\"12\">\n");
  StrAppend(&svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  StrAppend(&svg, "<text x=\"", Coord(kLeft + plot_w / 2), "\" y=\"",
                  Coord(kTop / 2 + 5),
                  "\" text-anchor=\"middle\" font-size=\"15\">",
                  XmlEscape(chart.title), "</text>\n");

  // Grid and y ticks.
  for (int i = 0; i <= 10; i += 2) {
    const double y = i / 10.0;
    StrAppend(&svg, "<line x1=\"", Coord(kLeft), "\" y1=\"",
                    Coord(py(y)), "\" x2=\"", Coord(kLeft + plot_w),
                    "\" y2=\"", Coord(py(y)), "\" stroke=\"#dddddd\"/>\n");
    StrAppend(&svg, "<text x=\"", Coord(kLeft - 8), "\" y=\"",
                    Coord(py(y) + 4), "\" text-anchor=\"end\">",
                    fmt::format("{:.1f}", y), "</text>\n");
  }
  for (double x : xs) {
    StrAppend(&svg, "<line x1=\"", Coord(px(x)), "\" y1=\"",
                    Coord(kTop + plot_h), "\" x2=\"", Coord(px(x)), "\" y2=\"",
                    Coord(kTop + plot_h + 5), "\" stroke=\"black\"/>\n");
    StrAppend(&svg, "<text x=\"", Coord(px(x)), "\" y=\"",
                    Coord(kTop + plot_h + 20), "\" text-anchor=\"middle\">",
                    TickLabel(x), "</text>\n");
  }
  StrAppend(&svg, "<rect x=\"", Coord(kLeft), "\" y=\"", Coord(kTop),
                  "\" width=\"", Coord(plot_w), "\" height=\"", Coord(plot_h),
                  "\" fill=\"none\" stroke=\"black\"/>\n");
  StrAppend(&svg, "<text x=\"", Coord(kLeft + plot_w / 2), "\" y=\"",
                  Coord(kHeight - 15), "\" text-anchor=\"middle\">",
                  XmlEscape(chart.x_label), "</text>\n");
  StrAppend(&svg, "<text x=\"18\" y=\"", Coord(kTop + plot_h / 2),
                  "\" text-anchor=\"middle\" transform=\"rotate(-90 18 ",
                  Coord(kTop + plot_h / 2), ")\">", XmlEscape(chart.y_label),
                  "</text>\n");

  for (size_t i = 0; i < chart.series.size(); ++i) {
    const ChartSeries& s = chart.series[i];
    const std::string_view color = kPalette[i % kPalette.size()];
    std::string points;
    for (const ChartPoint& p : s.line) {
      StrAppend(&points, points.empty() ? "" : " ", Coord(px(p.x)), ",",
                      Coord(py(p.y)));
    }
    StrAppend(&svg, "<polyline fill=\"none\" stroke=\"", color,
                    "\" stroke-width=\"2\" points=\"", points, "\"/>\n");
    for (const ChartPoint& p : s.line) {
      StrAppend(&svg, "<circle cx=\"", Coord(px(p.x)), "\" cy=\"",
                      Coord(py(p.y)), "\" r=\"3\" fill=\"", color, "\"/>\n");
    }
    for (const ChartPoint& p : s.markers) {
      const double cx = px(p.x), cy = py(p.y);
      StrAppend(&svg, "<rect x=\"", Coord(cx - 5), "\" y=\"",
                      Coord(cy - 5), "\" width=\"10\" height=\"10\" fill=\"none\" "
                      "stroke=\"", color, "\" stroke-width=\"2\"/>\n");
    }
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    StrAppend(&svg, "<line x1=\"", Coord(kLeft + plot_w + 15),
                    "\" y1=\"", Coord(ly), "\" x2=\"",
                    Coord(kLeft + plot_w + 40), "\" y2=\"", Coord(ly),
                    "\" stroke=\"", color, "\" stroke-width=\"2\"/>\n");
    StrAppend(&svg, "<text x=\"", Coord(kLeft + plot_w + 45), "\" y=\"",
                    Coord(ly + 4), "\">", XmlEscape(s.label), "</text>\n");
  }
  bool any_markers = false;
  for (const ChartSeries& s : chart.series) {
    any_markers = any_markers || !s.markers.empty();
  }
  if (any_markers) {
    const double ly =
        kTop + 10 + 20.0 * static_cast<double>(chart.series.size());
    StrAppend(&svg, "<rect x=\"", Coord(kLeft + plot_w + 22), "\" y=\"",
                    Coord(ly - 5),
                    "\" width=\"10\" height=\"10\" fill=\"none\" "
                    "stroke=\"black\" stroke-width=\"2\"/>\n");
    StrAppend(&svg, "<text x=\"", Coord(kLeft + plot_w + 45), "\" y=\"",
                    Coord(ly + 4), "\">measured</text>\n");
  }
  StrAppend(&svg, "</svg>\n");
  return svg;
}

std::vector<std::pair<std::string, LineChart>> BuildSweepCharts(
    std::span<const SweepRow> rows, SweepAxis axis) {
  // Chart key: the parameters that are neither the axis nor the worker count.
  using ChartKey = std::tuple<double, double>;  // (bandwidth, ratio)
  auto chart_key = [axis](const SweepRow& r) -> ChartKey {
    switch (axis) {
      case SweepAxis::kBandwidth:
        return {0.0, r.compression_ratio};
      case SweepAxis::kRatio:
        return {r.bandwidth_bps, 0.0};
      case SweepAxis::kWorkers:
        return {r.bandwidth_bps, r.compression_ratio};
    }
    return {};
  };
  auto series_label = [axis](const SweepRow& r) {
    return axis == SweepAxis::kWorkers
               ? r.model
               : StrCat(r.model, " N=", r.n_workers);
  };

  std::vector<ChartKey> keys;
  std::set<double> bandwidths, ratios;
  for (const SweepRow& r : rows) {
    const ChartKey k = chart_key(r);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    bandwidths.insert(std::get<0>(k));
    ratios.insert(std::get<1>(k));
  }
  std::sort(keys.begin(), keys.end());

  std::vector<std::pair<std::string, LineChart>> charts;
  for (const ChartKey& key : keys) {
    const auto [bw, ratio] = key;
    LineChart chart;
    chart.y_label = "scaling factor";
    std::string suffix, context;
    if (axis != SweepAxis::kBandwidth) {
      if (bandwidths.size() > 1) {
        StrAppend(&suffix, "_bw", FormatDouble(bw / kGbps), "g");
      }
      StrAppend(&context, FormatDouble(bw / kGbps), " Gbps");
    }
    if (axis != SweepAxis::kRatio) {
      if (ratios.size() > 1) {
        StrAppend(&suffix, "_r", FormatDouble(ratio));
      }
      if (ratio != 1.0) {
        StrAppend(&context, context.empty() ? "" : ", ",
                        FormatDouble(ratio), "x compression");
      }
    }
    switch (axis) {
      case SweepAxis::kBandwidth:
        chart.x_label = "bandwidth (Gbps)";
        chart.title = "Simulated scaling factor vs bandwidth";
        chart.log_x = true;
        break;
      case SweepAxis::kWorkers:
        chart.x_label = "workers (GPUs)";
        chart.title = "Simulated scaling factor vs workers";
        break;
      case SweepAxis::kRatio:
        chart.x_label = "compression ratio";
        chart.title = "Simulated scaling factor vs compression ratio";
        chart.log_x = true;
        break;
    }
    if (!context.empty()) StrAppend(&chart.title, " (", context, ")");

    for (const SweepRow& r : rows) {
      if (chart_key(r) != key) continue;
      const std::string label = series_label(r);
      auto it = std::find_if(
          chart.series.begin(), chart.series.end(),
          [&](const ChartSeries& s) { return s.label == label; });
      if (it == chart.series.end()) {
        chart.series.push_back(ChartSeries{label, {}, {}});
        it = std::prev(chart.series.end());
      }
      const double x = AxisValue(r, axis);
      it->line.push_back({x, r.f_sim});
      if (r.reference_f) it->markers.push_back({x, *r.reference_f});
    }
    for (ChartSeries& s : chart.series) {
      auto by_x = [](const ChartPoint& a, const ChartPoint& b) {
        return a.x < b.x;
      };
      std::stable_sort(s.line.begin(), s.line.end(), by_x);
      std::stable_sort(s.markers.begin(), s.markers.end(), by_x);
    }
    charts.emplace_back(std::move(suffix), std::move(chart));
  }
  return charts;
}

}  // namespace whatif
