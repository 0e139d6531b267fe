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

#include "whatif/fusion.h"

#include <cmath>
#include <utility>

#include "whatif/format.h"

namespace whatif {
namespace {

class FusionBuffer {
 public:
  explicit FusionBuffer(std::vector<FlushBatch>* out) : out_(out) {}

  bool empty() const { return batch_.member_layers.empty(); }
  uint64_t bytes() const { return batch_.total_bytes; }
  double opened_at() const { return opened_at_; }

  void Add(const GradientEvent& event) {
    if (empty()) opened_at_ = event.ready_time;
    batch_.member_layers.push_back(event.layer_index);
    batch_.total_bytes += event.size_bytes;
  }

  void Flush(double at) {
    if (empty()) return;
    batch_.flush_time = at;
    out_->push_back(std::move(batch_));
    batch_ = FlushBatch{};
  }

 private:
  std::vector<FlushBatch>* out_;
  FlushBatch batch_;
  double opened_at_ = 0.0;
};

}  // namespace

absl::Status FusionConfig::Validate() const {
  if (std::isnan(timeout) || !(timeout > 0)) {
    return absl::InvalidArgumentError(
        StrCat("fusion timeout must be > 0, got ", FormatDouble(timeout)));
  }
  if (buffer_cap_bytes == 0) {
    return absl::InvalidArgumentError("fusion buffer cap must be > 0");
  }
  return absl::OkStatus();
}

std::vector<FlushBatch> Fuse(const ModelTrace& trace,
                             const FusionConfig& config) {
  std::vector<FlushBatch> batches;
  FusionBuffer buffer(&batches);

  for (const GradientEvent& event : trace.events()) {
    if (!buffer.empty()) {
      const double deadline = buffer.opened_at() + config.timeout;
      if (deadline <= event.ready_time + kTimeEpsilon) buffer.Flush(deadline);
    }
    if (!buffer.empty() &&
        event.size_bytes > config.buffer_cap_bytes - buffer.bytes()) {
      buffer.Flush(event.ready_time);
    }
    buffer.Add(event);
    if (buffer.bytes() >= config.buffer_cap_bytes) {
      buffer.Flush(event.ready_time);
    }
  }
  // The final arrival is at t_back, so any pending timer expires no earlier.
  buffer.Flush(trace.t_back());
  return batches;
}

std::string FlushBatchesToCsv(const std::vector<FlushBatch>& batches) {
  std::string out = "flush_time_s,bytes,layers\n";
  for (const FlushBatch& b : batches) {
    StrAppend(&out, FormatDouble(b.flush_time), ",", b.total_bytes, ",",
                    StrJoin(b.member_layers, ";"), "\n");
  }
  return out;
}

}  // namespace whatif
