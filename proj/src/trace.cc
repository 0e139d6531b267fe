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

#include "whatif/trace.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "bundled_data.h"
#include "json.hpp"
#include "whatif/format.h"

namespace whatif {
namespace {

using ordered_json = nlohmann::ordered_json;

absl::Status LineError(size_t line, std::string_view field,
                       std::string_view what) {
  if (field.empty()) {
    return absl::InvalidArgumentError(StrCat("line ", line, ": ", what));
  }
  return absl::InvalidArgumentError(
      StrCat("line ", line, ": field \"", field, "\": ", what));
}

absl::StatusOr<double> GetSeconds(const nlohmann::json& obj,
                                  std::string_view key, size_t line) {
  const auto& v = obj.at(std::string(key));
  if (!v.is_number()) return LineError(line, key, "expected a number");
  const double seconds = v.get<double>();
  if (!std::isfinite(seconds)) return LineError(line, key, "not finite");
  if (seconds < 0) return LineError(line, key, "negative time");
  return seconds;
}

absl::StatusOr<uint64_t> GetByteCount(const nlohmann::json& obj,
                                      std::string_view key, size_t line) {
  const auto& v = obj.at(std::string(key));
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer()) {
    return LineError(line, key, "negative size");
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d < 0) return LineError(line, key, "negative size");
    if (d == std::floor(d) && d <= 9007199254740992.0) {
      return static_cast<uint64_t>(d);
    }
  }
  return LineError(line, key, "expected a non-negative integer");
}

absl::Status CheckKeys(const nlohmann::json& obj,
                       std::initializer_list<std::string_view> allowed,
                       size_t line) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return LineError(line, key, "unknown field");
    }
  }
  return absl::OkStatus();
}

absl::Status RequireKeys(const nlohmann::json& obj,
                         std::initializer_list<std::string_view> required,
                         size_t line) {
  for (std::string_view key : required) {
    if (!obj.contains(std::string(key))) {
      return LineError(line, key, "missing");
    }
  }
  return absl::OkStatus();
}

}  // namespace

bool EventOrder(const GradientEvent& a, const GradientEvent& b) {
  if (a.ready_time != b.ready_time) return a.ready_time < b.ready_time;
  return a.layer_index < b.layer_index;
}

absl::StatusOr<ModelTrace> ModelTrace::Create(std::string name,
                                              std::vector<GradientEvent> events,
                                              double t_batch) {
  if (events.empty()) {
    return absl::InvalidArgumentError("trace has no gradient events");
  }
  uint64_t total = 0;
  double t_back = 0.0;
  for (const GradientEvent& e : events) {
    if (!std::isfinite(e.ready_time) || e.ready_time < 0) {
      return absl::InvalidArgumentError(StrCat(
          "layer ", e.layer_index, ": ready_time must be finite and >= 0"));
    }
    if (e.size_bytes > std::numeric_limits<uint64_t>::max() - total) {
      return absl::InvalidArgumentError("total gradient bytes overflow");
    }
    total += e.size_bytes;
    t_back = std::max(t_back, e.ready_time);
  }
  if (total == 0) {
    return absl::InvalidArgumentError("trace total_bytes must be > 0");
  }
  if (!(t_back > 0)) {
    return absl::InvalidArgumentError(
        "t_back (largest ready_time) must be > 0");
  }
  if (!std::isfinite(t_batch)) {
    return absl::InvalidArgumentError("t_batch must be finite");
  }
  if (t_batch < t_back) {
    return absl::InvalidArgumentError(
        StrCat("t_batch < t_back (", FormatDouble(t_batch), " < ",
                     FormatDouble(t_back), ")"));
  }
  std::stable_sort(events.begin(), events.end(), EventOrder);

  ModelTrace trace;
  trace.name_ = std::move(name);
  trace.events_ = std::move(events);
  trace.t_batch_ = t_batch;
  trace.t_back_ = t_back;
  trace.total_bytes_ = total;
  return trace;
}

absl::StatusOr<ModelTrace> ParseTrace(std::string_view document) {
  std::optional<std::string> name;
  double t_batch = 0.0;
  std::optional<double> declared_t_back;
  size_t header_line = 0;
  std::vector<GradientEvent> events;

  const std::vector<std::string_view> lines = SplitLines(document);
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t lineno = i + 1;
    std::string_view text = StripWhitespace(lines[i]);
    if (text.empty() || text.front() == '#') continue;

    nlohmann::json obj = nlohmann::json::parse(text, nullptr,
                                               /*allow_exceptions=*/false);
    if (obj.is_discarded()) return LineError(lineno, "", "malformed JSON");
    if (!obj.is_object()) return LineError(lineno, "", "expected an object");

    if (!name.has_value()) {
      if (auto s = CheckKeys(obj, {"name", "t_batch_s", "t_back_s"}, lineno);
          !s.ok()) {
        return s;
      }
      if (auto s = RequireKeys(obj, {"name", "t_batch_s"}, lineno); !s.ok()) {
        return s;
      }
      if (!obj["name"].is_string()) {
        return LineError(lineno, "name", "expected a string");
      }
      name = obj["name"].get<std::string>();
      absl::StatusOr<double> tb = GetSeconds(obj, "t_batch_s", lineno);
      if (!tb.ok()) return tb.status();
      t_batch = *tb;
      if (obj.contains("t_back_s")) {
        absl::StatusOr<double> tk = GetSeconds(obj, "t_back_s", lineno);
        if (!tk.ok()) return tk.status();
        declared_t_back = *tk;
      }
      header_line = lineno;
      continue;
    }

    if (auto s = CheckKeys(obj, {"layer", "bytes", "ready_s"}, lineno);
        !s.ok()) {
      return s;
    }
    if (auto s = RequireKeys(obj, {"layer", "bytes", "ready_s"}, lineno);
        !s.ok()) {
      return s;
    }
    GradientEvent event;
    if (!obj["layer"].is_number_integer()) {
      return LineError(lineno, "layer", "expected an integer");
    }
    event.layer_index = obj["layer"].get<int64_t>();
    if (event.layer_index < 0) {
      return LineError(lineno, "layer", "negative layer index");
    }
    absl::StatusOr<uint64_t> bytes = GetByteCount(obj, "bytes", lineno);
    if (!bytes.ok()) return bytes.status();
    event.size_bytes = *bytes;
    absl::StatusOr<double> ready = GetSeconds(obj, "ready_s", lineno);
    if (!ready.ok()) return ready.status();
    event.ready_time = *ready;
    events.push_back(event);
  }

  if (!name.has_value()) {
    return absl::InvalidArgumentError("trace has no header line");
  }
  if (events.empty()) {
    return absl::InvalidArgumentError(
        StrCat("line ", header_line, ": trace has no gradient events"));
  }
  absl::StatusOr<ModelTrace> trace =
      ModelTrace::Create(*std::move(name), std::move(events), t_batch);
  if (!trace.ok()) {
    return absl::InvalidArgumentError(StrCat(
        "line ", header_line, ": ", std::string(trace.status().message())));
  }
  if (declared_t_back.has_value() && *declared_t_back != trace->t_back()) {
    return LineError(header_line, "t_back_s",
                     StrCat("declared ", FormatDouble(*declared_t_back),
                                  " but largest ready_s is ",
                                  FormatDouble(trace->t_back())));
  }
  return trace;
}

std::string SerializeTrace(const ModelTrace& trace) {
  std::string out;
  ordered_json header;
  header["name"] = trace.name();
  header["t_batch_s"] = trace.t_batch();
  header["t_back_s"] = trace.t_back();
  StrAppend(&out, header.dump(), "\n");
  for (const GradientEvent& e : trace.events()) {
    ordered_json record;
    record["layer"] = e.layer_index;
    record["bytes"] = e.size_bytes;
    record["ready_s"] = e.ready_time;
    StrAppend(&out, record.dump(), "\n");
  }
  return out;
}

absl::StatusOr<BundledModel> BundledModelFromName(std::string_view name) {
  const std::string lower = ToLower(name);
  if (lower == "resnet50") return BundledModel::kResNet50;
  if (lower == "resnet101") return BundledModel::kResNet101;
  if (lower == "vgg16") return BundledModel::kVgg16;
  return absl::InvalidArgumentError(StrCat(
      "unknown model \"", name, "\" (expected resnet50, resnet101 or vgg16)"));
}

std::string_view BundledModelName(BundledModel model) {
  switch (model) {
    case BundledModel::kResNet50:
      return "resnet50";
    case BundledModel::kResNet101:
      return "resnet101";
    case BundledModel::kVgg16:
      return "vgg16";
  }
  return "";
}

std::vector<BundledModel> AllBundledModels() {
  return {BundledModel::kResNet50, BundledModel::kResNet101,
          BundledModel::kVgg16};
}

absl::StatusOr<ReadySpacing> ReadySpacingFromName(std::string_view name) {
  if (name == "compute") return ReadySpacing::kComputeWeighted;
  if (name == "size") return ReadySpacing::kSizeProportional;
  return absl::InvalidArgumentError(StrCat(
      "unknown spacing \"", name, "\" (expected compute or size)"));
}

absl::StatusOr<LayerTable> ParseLayerTable(std::string_view csv) {
  LayerTable table;
  bool seen_header = false;
  const std::vector<std::string_view> lines = SplitLines(csv);
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t lineno = i + 1;
    std::string_view text = StripWhitespace(lines[i]);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string_view comment = text.substr(1);
      const size_t colon = comment.find(':');
      if (colon == std::string_view::npos) continue;
      std::string_view key = StripWhitespace(comment.substr(0, colon));
      std::string_view value = StripWhitespace(comment.substr(colon + 1));
      if (key == "model") {
        table.model = std::string(value);
      } else if (key == "total_bytes") {
        std::optional<long long> v = ParseInt(value);
        if (!v || *v <= 0) return LineError(lineno, key, "bad value");
        table.total_bytes = static_cast<uint64_t>(*v);
      } else if (key == "default_t_batch_s" || key == "default_t_back_s") {
        std::optional<double> v = ParseDouble(value);
        if (!v || !(*v > 0)) return LineError(lineno, key, "bad value");
        (key == "default_t_batch_s" ? table.default_t_batch
                                    : table.default_t_back) = *v;
      }
      continue;
    }
    if (!seen_header) {
      if (text != "layer,name,params,bytes,backward_weight") {
        return LineError(lineno, "", "unexpected layer table header");
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string_view> cols = Split(text, ',');
    if (cols.size() != 5) return LineError(lineno, "", "expected 5 columns");
    std::optional<long long> layer = ParseInt(cols[0]);
    std::optional<long long> params = ParseInt(cols[2]);
    std::optional<long long> bytes = ParseInt(cols[3]);
    std::optional<long long> weight = ParseInt(cols[4]);
    if (!layer || !params || !bytes || !weight || *layer < 0 || *params < 0 ||
        *bytes < 0 || *weight < 0) {
      return LineError(lineno, "", "bad numeric column");
    }
    if (*layer != static_cast<long long>(table.rows.size())) {
      return LineError(lineno, "layer", "layers must be numbered 0, 1, ...");
    }
    table.rows.push_back(LayerRow{*layer, std::string(cols[1]),
                                  static_cast<uint64_t>(*params),
                                  static_cast<uint64_t>(*bytes),
                                  static_cast<uint64_t>(*weight)});
  }
  if (table.rows.empty()) {
    return absl::InvalidArgumentError("layer table has no rows");
  }
  uint64_t sum = 0;
  for (const LayerRow& row : table.rows) sum += row.size_bytes;
  if (table.total_bytes != 0 && sum != table.total_bytes) {
    return absl::InvalidArgumentError(
        StrCat("layer bytes sum to ", sum, ", header says ",
                     table.total_bytes));
  }
  table.total_bytes = sum;
  return table;
}

const LayerTable& BundledLayerTable(BundledModel model) {
  static const auto* const tables = [] {
    auto* t = new std::vector<LayerTable>();
    for (BundledModel m : AllBundledModels()) {
      absl::StatusOr<LayerTable> table = ParseLayerTable(
          internal::BundledProfileCsv(BundledModelName(m)));
      // The tables are compiled in; a parse failure is a build defect.
      if (!table.ok()) std::abort();
      t->push_back(*std::move(table));
    }
    return t;
  }();
  return (*tables)[static_cast<size_t>(model)];
}

absl::StatusOr<ModelTrace> SynthProfile(BundledModel model, double t_batch,
                                        double t_back, ReadySpacing spacing) {
  if (!std::isfinite(t_back) || !(t_back > 0)) {
    return absl::InvalidArgumentError("t_back must be > 0");
  }
  if (!std::isfinite(t_batch) || !(t_batch > 0)) {
    return absl::InvalidArgumentError("t_batch must be > 0");
  }
  if (t_batch < t_back) {
    return absl::InvalidArgumentError("t_batch < t_back");
  }
  const LayerTable& table = BundledLayerTable(model);

  auto weight_of = [spacing](const LayerRow& row) -> uint64_t {
    return spacing == ReadySpacing::kComputeWeighted ? row.backward_weight
                                                     : row.size_bytes;
  };
  uint64_t total_weight = 0;
  for (const LayerRow& row : table.rows) total_weight += weight_of(row);

  std::vector<GradientEvent> events;
  events.reserve(table.rows.size());
  uint64_t cumulative = 0;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const LayerRow& row = table.rows[i];
    cumulative += weight_of(row);
    double ready = t_back * (static_cast<double>(cumulative) /
                             static_cast<double>(total_weight));
    if (i + 1 == table.rows.size()) ready = t_back;
    events.push_back(GradientEvent{row.layer_index, row.size_bytes,
                                   std::min(ready, t_back)});
  }
  return ModelTrace::Create(std::string(BundledModelName(model)),
                            std::move(events), t_batch);
}

absl::StatusOr<ModelTrace> SynthProfile(std::string_view model_name,
                                        double t_batch, double t_back,
                                        ReadySpacing spacing) {
  absl::StatusOr<BundledModel> model = BundledModelFromName(model_name);
  if (!model.ok()) return model.status();
  return SynthProfile(*model, t_batch, t_back, spacing);
}

ModelTrace DefaultProfile(BundledModel model) {
  const LayerTable& table = BundledLayerTable(model);
  return *SynthProfile(model, table.default_t_batch, table.default_t_back);
}

absl::StatusOr<std::vector<ReferencePoint>> ParseReferenceCsv(
    std::string_view csv) {
  std::vector<ReferencePoint> points;
  bool seen_header = false;
  const std::vector<std::string_view> lines = SplitLines(csv);
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t lineno = i + 1;
    std::string_view text = StripWhitespace(lines[i]);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_header) {
      if (text != "model,servers,bandwidth_bps,scaling_factor") {
        return LineError(lineno, "", "unexpected reference CSV header");
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string_view> cols = Split(text, ',');
    if (cols.size() != 4) return LineError(lineno, "", "expected 4 columns");
    std::optional<long long> servers = ParseInt(cols[1]);
    std::optional<double> bw = ParseDouble(cols[2]);
    std::optional<double> f = ParseDouble(cols[3]);
    if (cols[0].empty()) return LineError(lineno, "model", "empty");
    if (!servers || *servers < 1) {
      return LineError(lineno, "servers", "expected a positive integer");
    }
    if (!bw || !(*bw > 0)) {
      return LineError(lineno, "bandwidth_bps", "expected a positive number");
    }
    if (!f || *f < 0 || *f > 1) {
      return LineError(lineno, "scaling_factor", "expected a value in [0,1]");
    }
    points.push_back(ReferencePoint{std::string(cols[0]),
                                    static_cast<int>(*servers), *bw, *f});
  }
  if (!seen_header) {
    return absl::InvalidArgumentError("reference CSV has no header");
  }
  return points;
}

std::string SerializeReferenceCsv(const std::vector<ReferencePoint>& points) {
  std::string out = "model,servers,bandwidth_bps,scaling_factor\n";
  for (const ReferencePoint& p : points) {
    StrAppend(&out, p.model, ",", p.servers, ",",
                    FormatDouble(p.bandwidth_bps), ",",
                    FormatDouble(p.measured_scaling_factor), "\n");
  }
  return out;
}

std::vector<ReferencePoint> LoadReferenceData() {
  absl::StatusOr<std::vector<ReferencePoint>> points =
      ParseReferenceCsv(internal::BundledReferenceCsv());
  if (!points.ok()) std::abort();
  return *std::move(points);
}

std::optional<double> LookupReference(
    const std::vector<ReferencePoint>& points, std::string_view model,
    int servers, double bandwidth_bps) {
  for (const ReferencePoint& p : points) {
    if (p.model == model && p.servers == servers &&
        p.bandwidth_bps == bandwidth_bps) {
      return p.measured_scaling_factor;
    }
  }
  return std::nullopt;
}

}  // namespace whatif
