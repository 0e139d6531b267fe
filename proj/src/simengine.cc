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

#include "whatif/simengine.h"

#include <algorithm>
#include <cmath>
#include <deque>

#include "whatif/format.h"

namespace whatif {
namespace {

// The all-reduce side of the simulation: a single server consuming a FIFO
// message queue on a virtual clock.
class AllReduceServer {
 public:
  explicit AllReduceServer(const SimConfig& config) : config_(config) {}

  void Enqueue(const FlushBatch& batch) { queue_.push_back(&batch); }

  // Serves everything queued; returns the clock at the end.
  double Drain(std::vector<FlushRecord>* log) {
    while (!queue_.empty()) {
      const FlushBatch& batch = *queue_.front();
      queue_.pop_front();
      FlushRecord rec;
      rec.flush_time = batch.flush_time;
      rec.bytes = batch.total_bytes;
      rec.start_time = std::max(batch.flush_time, clock_);
      rec.transmission = TransmissionTime(batch.total_bytes, config_.cluster,
                                          config_.compression);
      rec.end_time =
          rec.start_time +
          (rec.transmission +
           ReductionTime(batch.total_bytes, config_.cluster,
                         config_.add_model));
      clock_ = rec.end_time;
      log->push_back(rec);
    }
    return clock_;
  }

 private:
  const SimConfig& config_;
  std::deque<const FlushBatch*> queue_;
  double clock_ = 0.0;
};

}  // namespace

absl::Status SimConfig::Validate() const {
  if (auto s = cluster.Validate(); !s.ok()) return s;
  if (auto s = fusion.Validate(); !s.ok()) return s;
  return compression.Validate();
}

absl::StatusOr<double> ScalingFactor(double t_batch, double t_overhead) {
  if (std::isnan(t_batch) || !(t_batch > 0)) {
    return absl::InvalidArgumentError(
        StrCat("t_batch must be > 0, got ", FormatDouble(t_batch)));
  }
  if (std::isnan(t_overhead) || t_overhead < 0) {
    return absl::InvalidArgumentError(StrCat(
        "t_overhead must be >= 0, got ", FormatDouble(t_overhead)));
  }
  return t_batch / (t_batch + t_overhead);
}

absl::StatusOr<SimResult> Simulate(const ModelTrace& trace,
                                   const SimConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;

  // Batches are produced in flush order, so enqueueing them in sequence is
  // the backward process posting to the message queue.
  const std::vector<FlushBatch> batches = Fuse(trace, config.fusion);
  AllReduceServer server(config);
  for (const FlushBatch& batch : batches) server.Enqueue(batch);

  SimResult result;
  result.t_batch = trace.t_batch();
  result.t_back = trace.t_back();
  result.flush_log.reserve(batches.size());
  const double last_end = server.Drain(&result.flush_log);

  // The final flush happens at t_back, so last_end >= t_back.
  result.t_sync = std::max(last_end, trace.t_back());
  result.t_overhead = result.t_sync - result.t_back;
  absl::StatusOr<double> f = ScalingFactor(trace.t_batch(), result.t_overhead);
  if (!f.ok()) return f.status();
  result.f_sim = *f;

  double busy = 0.0;
  for (const FlushRecord& rec : result.flush_log) busy += rec.transmission;
  result.mean_utilization = std::min(1.0, busy / result.t_sync);
  return result;
}

std::string FormatSimReport(const ModelTrace& trace, const SimConfig& config,
                            const SimResult& result) {
  std::string out;
  StrAppend(&out, "model: ", trace.name(), "\n");
  StrAppend(&out, "total_bytes: ", trace.total_bytes(), "\n");
  StrAppend(&out, "n_workers: ", config.cluster.n_workers, "\n");
  StrAppend(&out, "bandwidth_bps: ",
                  FormatDouble(config.cluster.bandwidth_bps), "\n");
  StrAppend(&out, "compression_ratio: ",
                  FormatDouble(config.compression.ratio), "\n");
  StrAppend(&out, "fusion_timeout_s: ",
                  FormatDouble(config.fusion.timeout), "\n");
  StrAppend(&out, "fusion_buffer_bytes: ",
                  config.fusion.buffer_cap_bytes, "\n");
  StrAppend(&out, "flushes: ", result.flush_log.size(), "\n");
  StrAppend(&out, "t_batch_s: ", FormatDouble(result.t_batch), "\n");
  StrAppend(&out, "t_back_s: ", FormatDouble(result.t_back), "\n");
  StrAppend(&out, "t_sync_s: ", FormatDouble(result.t_sync), "\n");
  StrAppend(&out, "t_overhead_s: ", FormatDouble(result.t_overhead),
                  "\n");
  StrAppend(&out, "mean_utilization: ",
                  FormatDouble(result.mean_utilization), "\n");
  StrAppend(&out, "f_sim: ", FormatDouble(result.f_sim), "\n");
  StrAppend(&out, fmt::format("f_sim = {:.3f}\n", result.f_sim));
  return out;
}

std::string FlushLogToCsv(const SimResult& result) {
  std::string out = "flush_time_s,start_s,end_s,bytes\n";
  for (const FlushRecord& rec : result.flush_log) {
    StrAppend(&out, FormatDouble(rec.flush_time), ",",
                    FormatDouble(rec.start_time), ",",
                    FormatDouble(rec.end_time), ",", rec.bytes, "\n");
  }
  return out;
}

}  // namespace whatif
