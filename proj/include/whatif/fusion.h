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

#ifndef WHATIF_FUSION_H_
#define WHATIF_FUSION_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "whatif/trace.h"

namespace whatif {

// Gradient fusion buffer settings. Defaults follow Horovod: 5 ms cycle and a
// 64 MiB buffer.
struct FusionConfig {
  double timeout = 5e-3;  // seconds; +inf disables the timer
  uint64_t buffer_cap_bytes = uint64_t{64} << 20;

  static FusionConfig Unbounded() {
    return {std::numeric_limits<double>::infinity(),
            std::numeric_limits<uint64_t>::max()};
  }

  absl::Status Validate() const;
};

// One all-reduce request handed to the network.
struct FlushBatch {
  double flush_time = 0.0;
  uint64_t total_bytes = 0;
  std::vector<int64_t> member_layers;  // in arrival order

  friend bool operator==(const FlushBatch&, const FlushBatch&) = default;
};

// Two instants closer than this are the same instant.
inline constexpr double kTimeEpsilon = 1e-12;

// Groups the trace's gradients into all-reduce flushes, in flush order.
//
// Rules, applied to events in trace order:
//  1. The timer starts when a gradient enters an empty buffer. When it
//     expires (start + timeout) everything buffered is flushed at that
//     instant. An expiry that coincides with an arrival fires first.
//  2. If an arriving gradient would push the buffer past the cap, the buffer
//     is flushed at the arrival time before the gradient is added.
//  3. Once the buffer holds at least buffer_cap_bytes it is flushed at once;
//     a single gradient at or above the cap therefore goes out alone.
//  4. After the last gradient has arrived the residue is flushed at t_back.
std::vector<FlushBatch> Fuse(const ModelTrace& trace,
                             const FusionConfig& config);

// "flush_time_s,bytes,layers" with layers separated by ';'.
std::string FlushBatchesToCsv(const std::vector<FlushBatch>& batches);

}  // namespace whatif

#endif  // WHATIF_FUSION_H_
