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

#ifndef WHATIF_TRACE_H_
#define WHATIF_TRACE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace whatif {

// One gradient becoming ready during the backward pass. Layer 0 is the layer
// closest to the output, i.e. the first gradient produced.
struct GradientEvent {
  int64_t layer_index = 0;
  uint64_t size_bytes = 0;
  double ready_time = 0.0;  // seconds since backward start

  friend bool operator==(const GradientEvent&, const GradientEvent&) = default;
};

// Ordering used inside a ModelTrace: ready_time ascending, ties broken by
// layer_index ascending.
bool EventOrder(const GradientEvent& a, const GradientEvent& b);

// Per-layer gradient-ready events of one training iteration plus the
// single-device timing baselines.
//
// Instances are only produced through ModelTrace::Create (and the parsers and
// synthesizer built on it), so every live value satisfies:
//   * events is non-empty and sorted by EventOrder,
//   * t_back == max ready_time,
//   * t_batch >= t_back > 0,
//   * total_bytes() > 0.
class ModelTrace {
 public:
  static absl::StatusOr<ModelTrace> Create(std::string name,
                                           std::vector<GradientEvent> events,
                                           double t_batch);

  const std::string& name() const { return name_; }
  const std::vector<GradientEvent>& events() const { return events_; }
  double t_batch() const { return t_batch_; }
  double t_back() const { return t_back_; }
  uint64_t total_bytes() const { return total_bytes_; }

  friend bool operator==(const ModelTrace&, const ModelTrace&) = default;

 private:
  ModelTrace() = default;

  std::string name_;
  std::vector<GradientEvent> events_;
  double t_batch_ = 0.0;
  double t_back_ = 0.0;
  uint64_t total_bytes_ = 0;
};

// Trace documents are line-oriented JSON:
//
//   {"name":"resnet50","t_batch_s":0.089,"t_back_s":0.059}
//   {"layer":0,"bytes":8196000,"ready_s":0.0005}
//   ...
//
// The header comes first. "t_back_s" is optional; when present it must equal
// the largest ready_s. Blank lines and lines starting with '#' are skipped.
// Errors carry the 1-based line number and field name.
absl::StatusOr<ModelTrace> ParseTrace(std::string_view document);

// Inverse of ParseTrace. Doubles are written in shortest round-trip form so
// ParseTrace(SerializeTrace(t)) == t.
std::string SerializeTrace(const ModelTrace& trace);

enum class BundledModel { kResNet50, kResNet101, kVgg16 };

absl::StatusOr<BundledModel> BundledModelFromName(std::string_view name);
std::string_view BundledModelName(BundledModel model);
std::vector<BundledModel> AllBundledModels();

// How synthetic ready times are spread over [0, t_back].
enum class ReadySpacing {
  // Gap before each layer proportional to its forward multiply-accumulates.
  kComputeWeighted,
  // Gap before each layer proportional to its gradient bytes.
  kSizeProportional,
};

absl::StatusOr<ReadySpacing> ReadySpacingFromName(std::string_view name);

// One row of a bundled per-layer table.
struct LayerRow {
  int64_t layer_index = 0;
  std::string name;
  uint64_t params = 0;
  uint64_t size_bytes = 0;
  uint64_t backward_weight = 0;
};

struct LayerTable {
  std::string model;
  uint64_t total_bytes = 0;
  double default_t_batch = 0.0;
  double default_t_back = 0.0;
  std::vector<LayerRow> rows;  // output-most layer first
};

absl::StatusOr<LayerTable> ParseLayerTable(std::string_view csv);
const LayerTable& BundledLayerTable(BundledModel model);

// Builds a trace for one of the bundled models. Sizes come straight from the
// layer table; layer k becomes ready at t_back * (w_0 + ... + w_k) / sum(w),
// where w is chosen by `spacing`. The last layer lands exactly on t_back.
absl::StatusOr<ModelTrace> SynthProfile(
    BundledModel model, double t_batch, double t_back,
    ReadySpacing spacing = ReadySpacing::kComputeWeighted);
absl::StatusOr<ModelTrace> SynthProfile(
    std::string_view model_name, double t_batch, double t_back,
    ReadySpacing spacing = ReadySpacing::kComputeWeighted);

// SynthProfile with the timings documented in the layer table.
ModelTrace DefaultProfile(BundledModel model);

// A measured scaling factor (multi-server run on 100 Gbps).
struct ReferencePoint {
  std::string model;
  int servers = 0;
  double bandwidth_bps = 0.0;
  double measured_scaling_factor = 0.0;

  friend bool operator==(const ReferencePoint&, const ReferencePoint&) =
      default;
};

// CSV with header "model,servers,bandwidth_bps,scaling_factor".
absl::StatusOr<std::vector<ReferencePoint>> ParseReferenceCsv(
    std::string_view csv);
std::string SerializeReferenceCsv(const std::vector<ReferencePoint>& points);

// The nine bundled measurements (3 models x {2, 4, 8} servers).
std::vector<ReferencePoint> LoadReferenceData();

std::optional<double> LookupReference(
    const std::vector<ReferencePoint>& points, std::string_view model,
    int servers, double bandwidth_bps);

}  // namespace whatif

#endif  // WHATIF_TRACE_H_
