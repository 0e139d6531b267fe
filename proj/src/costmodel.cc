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

#include "whatif/costmodel.h"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "whatif/format.h"

namespace whatif {

absl::Status ClusterConfig::Validate() const {
  if (n_workers < 1) {
    return absl::InvalidArgumentError(
        StrCat("n_workers must be >= 1, got ", n_workers));
  }
  if (std::isnan(bandwidth_bps) || !(bandwidth_bps > 0)) {
    return absl::InvalidArgumentError(StrCat(
        "bandwidth_bps must be > 0, got ", FormatDouble(bandwidth_bps)));
  }
  return absl::OkStatus();
}

absl::Status CompressionModel::Validate() const {
  if (std::isnan(ratio) || ratio < 1) {
    return absl::InvalidArgumentError(StrCat(
        "compression ratio must be >= 1, got ", FormatDouble(ratio)));
  }
  return absl::OkStatus();
}

absl::StatusOr<AddCostModel> AddCostModel::Create(
    std::vector<Sample> samples) {
  if (samples.empty() || samples.front().size_bytes != 0 ||
      samples.front().seconds != 0.0) {
    return absl::InvalidArgumentError(
        "add cost model must start at (0 bytes, 0 s)");
  }
  for (size_t i = 1; i < samples.size(); ++i) {
    const Sample& prev = samples[i - 1];
    const Sample& cur = samples[i];
    if (cur.size_bytes <= prev.size_bytes) {
      return absl::InvalidArgumentError(StrCat(
          "add cost sample ", i, ": sizes must be strictly increasing"));
    }
    if (!std::isfinite(cur.seconds) || cur.seconds < prev.seconds) {
      return absl::InvalidArgumentError(StrCat(
          "add cost sample ", i, ": durations must be non-decreasing"));
    }
  }
  return AddCostModel(std::move(samples));
}

AddCostModel AddCostModel::Zero() { return AddCostModel({{0, 0.0}}); }

AddCostModel AddCostModel::Linear(double memory_bytes_per_second) {
  constexpr uint64_t kAnchor = 1'000'000'000;
  return AddCostModel(
      {{0, 0.0},
       {kAnchor, 3.0 * static_cast<double>(kAnchor) / memory_bytes_per_second}});
}

AddCostModel AddCostModel::Default() {
  return Linear(kDefaultMemoryBandwidth);
}

absl::StatusOr<AddCostModel> ParseAddCostCsv(std::string_view csv) {
  std::vector<AddCostModel::Sample> samples;
  const std::vector<std::string_view> lines = SplitLines(csv);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view text = StripWhitespace(lines[i]);
    if (text.empty() || text.front() == '#') continue;
    if (samples.empty() && text == "size_bytes,seconds") continue;
    std::vector<std::string_view> cols = Split(text, ',');
    std::optional<long long> size =
        cols.size() == 2 ? ParseInt(StripWhitespace(cols[0]))
                         : std::nullopt;
    std::optional<double> seconds =
        cols.size() == 2 ? ParseDouble(StripWhitespace(cols[1]))
                         : std::nullopt;
    if (!size || !seconds || *size < 0) {
      return absl::InvalidArgumentError(StrCat(
          "line ", i + 1, ": expected \"size_bytes,seconds\""));
    }
    samples.push_back({static_cast<uint64_t>(*size), *seconds});
  }
  return AddCostModel::Create(std::move(samples));
}

std::string SerializeAddCostCsv(const AddCostModel& model) {
  std::string out = "size_bytes,seconds\n";
  for (const auto& s : model.samples()) {
    StrAppend(&out, s.size_bytes, ",", FormatDouble(s.seconds), "\n");
  }
  return out;
}

double AddEst(const AddCostModel& model, uint64_t size_bytes) {
  const auto& samples = model.samples();
  if (samples.size() == 1) return 0.0;

  // First sample whose size is >= the query.
  auto upper = std::lower_bound(
      samples.begin(), samples.end(), size_bytes,
      [](const AddCostModel::Sample& s, uint64_t v) { return s.size_bytes < v; });
  if (upper != samples.end() && upper->size_bytes == size_bytes) {
    return upper->seconds;
  }
  if (upper == samples.end()) upper = std::prev(samples.end());
  auto lower = std::prev(upper);

  const double x0 = static_cast<double>(lower->size_bytes);
  const double x1 = static_cast<double>(upper->size_bytes);
  const double slope = (upper->seconds - lower->seconds) / (x1 - x0);
  const double est =
      lower->seconds + slope * (static_cast<double>(size_bytes) - x0);
  return std::max(est, 0.0);
}

double TransmissionTime(uint64_t size_bytes, const ClusterConfig& cluster,
                        const CompressionModel& compression) {
  if (cluster.n_workers <= 1 || size_bytes == 0) return 0.0;
  const double n = cluster.n_workers;
  const double bits = 2.0 * static_cast<double>(size_bytes) * 8.0 * (n - 1) / n;
  return (bits / cluster.bandwidth_bps) / compression.ratio;
}

uint64_t ShardBytes(uint64_t size_bytes, int n_workers) {
  const uint64_t n = static_cast<uint64_t>(n_workers);
  return size_bytes / n + (2 * (size_bytes % n) >= n ? 1 : 0);
}

double ReductionTime(uint64_t size_bytes, const ClusterConfig& cluster,
                     const AddCostModel& add_model) {
  if (cluster.n_workers <= 1) return 0.0;
  return static_cast<double>(cluster.n_workers - 1) *
         AddEst(add_model, ShardBytes(size_bytes, cluster.n_workers));
}

double AllReduceCost(uint64_t size_bytes, const ClusterConfig& cluster,
                     const AddCostModel& add_model,
                     const CompressionModel& compression) {
  return TransmissionTime(size_bytes, cluster, compression) +
         ReductionTime(size_bytes, cluster, add_model);
}

}  // namespace whatif
