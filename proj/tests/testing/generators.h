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

// Random inputs for property tests. Everything is driven by an explicit
// std::mt19937_64 so failures replay from the seed.

#ifndef WHATIF_TESTS_TESTING_GENERATORS_H_
#define WHATIF_TESTS_TESTING_GENERATORS_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "whatif/costmodel.h"
#include "whatif/trace.h"

namespace whatif::testing {

struct TraceShape {
  int max_events = 100;
  int64_t max_tick = 20'000;  // ready times are whole microseconds
  uint64_t min_bytes = 0;
  uint64_t max_bytes = 50'000'000;
  // Chance that an event reuses the previous event's ready tick.
  double tie_probability = 0.1;
};

inline constexpr double kTick = 1e-6;

// Events with integer-microsecond ready times and shuffled layer indices.
inline ModelTrace RandomTrace(std::mt19937_64& rng,
                              const TraceShape& shape = {}) {
  std::uniform_int_distribution<int> count(1, shape.max_events);
  std::uniform_int_distribution<int64_t> tick(0, shape.max_tick);
  std::uniform_int_distribution<uint64_t> bytes(shape.min_bytes,
                                                shape.max_bytes);
  std::bernoulli_distribution tie(shape.tie_probability);

  const int n = count(rng);
  std::vector<int64_t> layers(n);
  std::iota(layers.begin(), layers.end(), 0);
  std::shuffle(layers.begin(), layers.end(), rng);

  std::vector<GradientEvent> events;
  int64_t prev_tick = 0;
  for (int i = 0; i < n; ++i) {
    const int64_t t = (i > 0 && tie(rng)) ? prev_tick : tick(rng);
    prev_tick = t;
    events.push_back({layers[i], bytes(rng), static_cast<double>(t) * kTick});
  }
  // t_back and total_bytes must be positive.
  if (std::all_of(events.begin(), events.end(),
                  [](const GradientEvent& e) { return e.ready_time == 0; })) {
    events.front().ready_time = static_cast<double>(shape.max_tick) * kTick;
  }
  if (std::all_of(events.begin(), events.end(),
                  [](const GradientEvent& e) { return e.size_bytes == 0; })) {
    events.front().size_bytes = std::max<uint64_t>(shape.min_bytes, 1);
  }
  double t_back = 0;
  for (const auto& e : events) t_back = std::max(t_back, e.ready_time);
  std::uniform_real_distribution<double> slack(1.0, 3.0);
  return *ModelTrace::Create("random", std::move(events), t_back * slack(rng));
}

// Piecewise-linear add model with 1-6 segments; non-decreasing durations.
inline AddCostModel RandomAddModel(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> segments(1, 6);
  std::uniform_int_distribution<uint64_t> step(1, 50'000'000);
  std::uniform_real_distribution<double> slope(0.0, 5e-11);
  std::vector<AddCostModel::Sample> samples = {{0, 0.0}};
  const int k = segments(rng);
  for (int i = 0; i < k; ++i) {
    const uint64_t dx = step(rng);
    samples.push_back({samples.back().size_bytes + dx,
                       samples.back().seconds +
                           slope(rng) * static_cast<double>(dx)});
  }
  return *AddCostModel::Create(std::move(samples));
}

inline double RandomBandwidth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_gbps(0.0, 3.0);  // 1..1000 Gbps
  return std::pow(10.0, log_gbps(rng)) * kGbps;
}

}  // namespace whatif::testing

#endif  // WHATIF_TESTS_TESTING_GENERATORS_H_
