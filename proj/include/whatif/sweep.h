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

#ifndef WHATIF_SWEEP_H_
#define WHATIF_SWEEP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "whatif/costmodel.h"
#include "whatif/fusion.h"
#include "whatif/trace.h"

namespace whatif {

// Measured reference points were taken on servers with this many GPUs.
inline constexpr int kGpusPerServer = 8;
inline constexpr double kReferenceBandwidthBps = 100 * kGbps;

std::vector<double> DefaultRatioGrid();

struct SweepSpec {
  ModelTrace trace;
  std::vector<double> bandwidths_bps;
  std::vector<int> worker_counts;
  std::vector<double> compression_ratios = {1.0};
  FusionConfig fusion;
  AddCostModel add_model = AddCostModel::Default();

  // Errors name the offending field.
  absl::Status Validate() const;
};

struct SweepRow {
  std::string model;
  int n_workers = 1;
  double bandwidth_bps = 0.0;
  double compression_ratio = 1.0;
  double f_sim = 1.0;
  double t_overhead = 0.0;
  std::optional<double> reference_f;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Simulates every (workers, bandwidth, ratio) combination. Points are
// evaluated on up to `max_threads` threads (0 = hardware concurrency); rows
// come back sorted by (n_workers, bandwidth_bps, compression_ratio) whatever
// the evaluation order. reference_f is set where `references` has an exact
// (model, n_workers / kGpusPerServer, bandwidth) match.
absl::StatusOr<std::vector<SweepRow>> RunSweep(
    const SweepSpec& spec, std::span<const ReferencePoint> references = {},
    unsigned max_threads = 0);

// Smallest ratio on `ratio_grid` (ascending) whose f_sim reaches target_f;
// nullopt if none does.
absl::StatusOr<std::optional<double>> MinRatioForTarget(
    const ModelTrace& trace, const ClusterConfig& cluster,
    const FusionConfig& fusion, const AddCostModel& add_model, double target_f,
    std::span<const double> ratio_grid);

// Columns: model,n_workers,bandwidth_bps,compression_ratio,f_sim,
// t_overhead_s,reference_f (empty when absent).
std::string SweepRowsToCsv(std::span<const SweepRow> rows);

}  // namespace whatif

#endif  // WHATIF_SWEEP_H_
