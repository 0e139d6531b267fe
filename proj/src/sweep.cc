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

#include "whatif/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "whatif/format.h"
#include "whatif/simengine.h"

namespace whatif {
namespace {

struct SweepPoint {
  int n_workers;
  double bandwidth_bps;
  double ratio;
};

std::string Describe(const SweepPoint& p) {
  return StrCat("n_workers=", p.n_workers,
                      " bandwidth_bps=", FormatDouble(p.bandwidth_bps),
                      " ratio=", FormatDouble(p.ratio));
}

}  // namespace

std::vector<double> DefaultRatioGrid() {
  return {1, 2, 3, 4, 5, 10, 20, 50, 100};
}

absl::Status SweepSpec::Validate() const {
  if (bandwidths_bps.empty()) {
    return absl::InvalidArgumentError("bandwidths_bps: list is empty");
  }
  if (worker_counts.empty()) {
    return absl::InvalidArgumentError("worker_counts: list is empty");
  }
  if (compression_ratios.empty()) {
    return absl::InvalidArgumentError("compression_ratios: list is empty");
  }
  for (double bw : bandwidths_bps) {
    if (auto s = ClusterConfig{1, bw}.Validate(); !s.ok()) {
      return absl::InvalidArgumentError(
          StrCat("bandwidths_bps: ", std::string(s.message())));
    }
  }
  for (int n : worker_counts) {
    if (auto s = ClusterConfig{n, 1.0}.Validate(); !s.ok()) {
      return absl::InvalidArgumentError(
          StrCat("worker_counts: ", std::string(s.message())));
    }
  }
  for (double r : compression_ratios) {
    if (auto s = CompressionModel{r}.Validate(); !s.ok()) {
      return absl::InvalidArgumentError(
          StrCat("compression_ratios: ", std::string(s.message())));
    }
  }
  if (auto s = fusion.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat("fusion: ", std::string(s.message())));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(
    const SweepSpec& spec, std::span<const ReferencePoint> references,
    unsigned max_threads) {
  if (auto s = spec.Validate(); !s.ok()) return s;

  std::vector<SweepPoint> points;
  for (int n : spec.worker_counts) {
    for (double bw : spec.bandwidths_bps) {
      for (double r : spec.compression_ratios) points.push_back({n, bw, r});
    }
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const SweepPoint& a, const SweepPoint& b) {
                     return std::tie(a.n_workers, a.bandwidth_bps, a.ratio) <
                            std::tie(b.n_workers, b.bandwidth_bps, b.ratio);
                   });

  std::vector<absl::StatusOr<SweepRow>> results(
      points.size(), absl::UnknownError("not evaluated"));
  auto evaluate = [&](size_t i) {
    const SweepPoint& p = points[i];
    SimConfig config{ClusterConfig{p.n_workers, p.bandwidth_bps}, spec.fusion,
                     CompressionModel{p.ratio}, spec.add_model};
    absl::StatusOr<SimResult> sim = Simulate(spec.trace, config);
    if (!sim.ok()) {
      results[i] = absl::Status(
          sim.status().code(),
          StrCat(Describe(p), ": ", std::string(sim.status().message())));
      return;
    }
    SweepRow row;
    row.model = spec.trace.name();
    row.n_workers = p.n_workers;
    row.bandwidth_bps = p.bandwidth_bps;
    row.compression_ratio = p.ratio;
    row.f_sim = sim->f_sim;
    row.t_overhead = sim->t_overhead;
    if (p.n_workers % kGpusPerServer == 0) {
      for (const ReferencePoint& ref : references) {
        if (ref.model == row.model &&
            ref.servers == p.n_workers / kGpusPerServer &&
            ref.bandwidth_bps == p.bandwidth_bps) {
          row.reference_f = ref.measured_scaling_factor;
          break;
        }
      }
    }
    results[i] = std::move(row);
  };

  unsigned threads = max_threads == 0 ? std::thread::hardware_concurrency()
                                      : max_threads;
  threads = std::clamp<unsigned>(threads, 1,
                                 static_cast<unsigned>(points.size()));
  if (threads == 1) {
    for (size_t i = 0; i < points.size(); ++i) evaluate(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < points.size(); i = next++) evaluate(i);
      });
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(results.size());
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    rows.push_back(*std::move(r));
  }
  return rows;
}

absl::StatusOr<std::optional<double>> MinRatioForTarget(
    const ModelTrace& trace, const ClusterConfig& cluster,
    const FusionConfig& fusion, const AddCostModel& add_model, double target_f,
    std::span<const double> ratio_grid) {
  if (ratio_grid.empty()) {
    return absl::InvalidArgumentError("ratio grid is empty");
  }
  if (!std::is_sorted(ratio_grid.begin(), ratio_grid.end())) {
    return absl::InvalidArgumentError("ratio grid must be sorted ascending");
  }
  if (std::isnan(target_f) || !(target_f > 0) || !(target_f < 1)) {
    return absl::InvalidArgumentError(StrCat(
        "target scaling factor must be in (0, 1), got ",
        FormatDouble(target_f)));
  }
  for (double ratio : ratio_grid) {
    SimConfig config{cluster, fusion, CompressionModel{ratio}, add_model};
    absl::StatusOr<SimResult> sim = Simulate(trace, config);
    if (!sim.ok()) {
      return absl::Status(sim.status().code(),
                          StrCat("ratio=", FormatDouble(ratio), ": ",
                                       std::string(sim.status().message())));
    }
    if (sim->f_sim >= target_f) return ratio;
  }
  return std::nullopt;
}

std::string SweepRowsToCsv(std::span<const SweepRow> rows) {
  std::string out =
      "model,n_workers,bandwidth_bps,compression_ratio,f_sim,t_overhead_s,"
      "reference_f\n";
  for (const SweepRow& row : rows) {
    StrAppend(&out, row.model, ",", row.n_workers, ",",
                    FormatDouble(row.bandwidth_bps), ",",
                    FormatDouble(row.compression_ratio), ",",
                    FormatDouble(row.f_sim), ",", FormatDouble(row.t_overhead),
                    ",",
                    row.reference_f ? FormatDouble(*row.reference_f) : "",
                    "\n");
  }
  return out;
}

}  // namespace whatif
