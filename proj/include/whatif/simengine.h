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

#ifndef WHATIF_SIMENGINE_H_
#define WHATIF_SIMENGINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "whatif/costmodel.h"
#include "whatif/fusion.h"
#include "whatif/trace.h"

namespace whatif {

struct SimConfig {
  ClusterConfig cluster;
  FusionConfig fusion;
  CompressionModel compression;
  AddCostModel add_model = AddCostModel::Default();

  absl::Status Validate() const;
};

struct FlushRecord {
  double flush_time = 0.0;
  double start_time = 0.0;
  double end_time = 0.0;
  uint64_t bytes = 0;
  double transmission = 0.0;  // wire part of end_time - start_time

  friend bool operator==(const FlushRecord&, const FlushRecord&) = default;
};

struct SimResult {
  double t_batch = 0.0;
  double t_back = 0.0;
  double t_sync = 0.0;
  double t_overhead = 0.0;  // t_sync - t_back
  double f_sim = 1.0;
  double mean_utilization = 0.0;  // wire-busy time / t_sync
  std::vector<FlushRecord> flush_log;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// Returns t_batch / (t_batch + t_overhead). Rejects t_batch <= 0 and negative
// overhead.
absl::StatusOr<double> ScalingFactor(double t_batch, double t_overhead);

// Replays one iteration: the backward pass releases fused batches at their
// flush times and a single all-reduce server drains them FIFO. A batch
// starts at max(flush_time, previous end) and occupies the network for
// AllReduceCost(bytes). t_sync is the end of the last batch.
absl::StatusOr<SimResult> Simulate(const ModelTrace& trace,
                                   const SimConfig& config);

// "key: value" lines; doubles in shortest round-trip form.
std::string FormatSimReport(const ModelTrace& trace, const SimConfig& config,
                            const SimResult& result);

// "flush_time_s,start_s,end_s,bytes".
std::string FlushLogToCsv(const SimResult& result);

}  // namespace whatif

#endif  // WHATIF_SIMENGINE_H_
