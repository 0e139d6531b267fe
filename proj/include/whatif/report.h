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

#ifndef WHATIF_REPORT_H_
#define WHATIF_REPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "whatif/sweep.h"

namespace whatif {

std::string_view ToolVersion();

struct ReportMetadata {
  std::string timestamp;  // UTC, RFC 3339
  std::string config_digest;
  std::string tool_version;
};

struct ReportBundle {
  std::vector<SweepRow> rows;
  ReportMetadata metadata;
};

// Lowercase hex SHA-256 of `canonical_config`.
std::string ConfigDigest(std::string_view canonical_config);

// Metadata as '#' lines, then the SweepRowsToCsv body. Only the '#' lines
// depend on the clock.
std::string RenderReportCsv(const ReportBundle& bundle);

// Drops '#' lines.
std::string CsvBody(std::string_view csv);

enum class SweepAxis { kBandwidth, kWorkers, kRatio };

absl::StatusOr<SweepAxis> SweepAxisFromName(std::string_view name);
std::string_view SweepAxisName(SweepAxis axis);

struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
};

struct ChartSeries {
  std::string label;
  std::vector<ChartPoint> line;
  std::vector<ChartPoint> markers;  // measured reference values
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<ChartSeries> series;
};

std::string RenderSvg(const LineChart& chart);

// Splits sweep rows into charts of f_sim against `axis`. Every parameter
// other than the axis and the worker count selects a chart; each (model,
// workers) pair is one series. Returns (file-name suffix, chart) pairs; the
// suffix is empty when there is a single chart.
std::vector<std::pair<std::string, LineChart>> BuildSweepCharts(
    std::span<const SweepRow> rows, SweepAxis axis);

}  // namespace whatif

#endif  // WHATIF_REPORT_H_
