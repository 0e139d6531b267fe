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

#ifndef WHATIF_COSTMODEL_H_
#define WHATIF_COSTMODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace whatif {

// Sizes are decimal bytes, bandwidth decimal bits per second, time seconds.
inline constexpr double kGbps = 1e9;

struct ClusterConfig {
  int n_workers = 1;
  double bandwidth_bps = 100 * kGbps;  // per worker; +inf is allowed

  absl::Status Validate() const;
};

// Gradient compression applied to the transmitted bytes only.
struct CompressionModel {
  double ratio = 1.0;  // 1 = uncompressed

  absl::Status Validate() const;
};

// Piecewise-linear estimate of the time to element-wise add two vectors of a
// given byte size. Anchored at (0, 0); beyond the last sample the final
// segment's slope is extended.
class AddCostModel {
 public:
  struct Sample {
    uint64_t size_bytes = 0;
    double seconds = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
  };

  // Requires samples[0] == (0, 0), strictly increasing sizes and
  // non-decreasing finite durations.
  static absl::StatusOr<AddCostModel> Create(std::vector<Sample> samples);

  // Adds cost nothing.
  static AddCostModel Zero();

  // A vector add streams three bytes (two reads, one write) per byte of
  // vector, so cost(x) = 3x / memory_bandwidth.
  static AddCostModel Linear(double memory_bytes_per_second);

  // Linear(kDefaultMemoryBandwidth).
  static AddCostModel Default();

  // V100-class HBM2 streaming rate, bytes per second.
  static constexpr double kDefaultMemoryBandwidth = 800e9;

  const std::vector<Sample>& samples() const { return samples_; }

  friend bool operator==(const AddCostModel&, const AddCostModel&) = default;

 private:
  explicit AddCostModel(std::vector<Sample> samples)
      : samples_(std::move(samples)) {}

  std::vector<Sample> samples_;
};

// Two columns "size_bytes,seconds"; an optional header line and '#' comment
// lines are skipped.
absl::StatusOr<AddCostModel> ParseAddCostCsv(std::string_view csv);
std::string SerializeAddCostCsv(const AddCostModel& model);

double AddEst(const AddCostModel& model, uint64_t size_bytes);

// Ring all-reduce wire time: (2 * S * 8 * (N-1)/N) / bw, divided by the
// compression ratio. Zero for N == 1 or S == 0.
double TransmissionTime(uint64_t size_bytes, const ClusterConfig& cluster,
                        const CompressionModel& compression);

// round-half-up(S / N).
uint64_t ShardBytes(uint64_t size_bytes, int n_workers);

// (N-1) * AddEst(round(S / N)); not affected by compression.
double ReductionTime(uint64_t size_bytes, const ClusterConfig& cluster,
                     const AddCostModel& add_model);

// TransmissionTime + ReductionTime.
double AllReduceCost(uint64_t size_bytes, const ClusterConfig& cluster,
                     const AddCostModel& add_model,
                     const CompressionModel& compression);

}  // namespace whatif

#endif  // WHATIF_COSTMODEL_H_
