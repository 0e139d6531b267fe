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

#include "whatif/cli.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <optional>
#include <set>
#include <string_view>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "fmt/chrono.h"
#include "json.hpp"
#include "whatif/costmodel.h"
#include "whatif/format.h"
#include "whatif/fusion.h"
#include "whatif/report.h"
#include "whatif/simengine.h"
#include "whatif/sweep.h"
#include "whatif/trace.h"

namespace whatif {
namespace {

const std::vector<std::string> kModelNames = {"resnet50", "resnet101",
                                              "vgg16"};

// Where a trace comes from: a trace file or a bundled profile.
struct WorkloadSource {
  std::string trace_path;
  std::string model;
  std::optional<double> t_batch;
  std::optional<double> t_back;
};

struct CommonOptions {
  std::string spacing = "compute";
  double timeout_ms = 5.0;
  uint64_t buffer_bytes = uint64_t{64} << 20;
  std::string add_model_csv;
  std::optional<double> memory_bandwidth;
};

absl::StatusOr<ModelTrace> LoadWorkload(const WorkloadSource& src,
                                        std::string_view spacing_name) {
  if (!src.trace_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(src.trace_path);
    if (!text.ok()) return text.status();
    absl::StatusOr<ModelTrace> trace = ParseTrace(*text);
    if (!trace.ok()) {
      return absl::Status(trace.status().code(),
                          StrCat(src.trace_path, ": ",
                                       std::string(trace.status().message())));
    }
    return trace;
  }
  absl::StatusOr<BundledModel> model = BundledModelFromName(src.model);
  if (!model.ok()) return model.status();
  absl::StatusOr<ReadySpacing> spacing = ReadySpacingFromName(spacing_name);
  if (!spacing.ok()) return spacing.status();
  const LayerTable& table = BundledLayerTable(*model);
  return SynthProfile(*model, src.t_batch.value_or(table.default_t_batch),
                      src.t_back.value_or(table.default_t_back), *spacing);
}

absl::StatusOr<AddCostModel> LoadAddModel(const CommonOptions& opts) {
  if (!opts.add_model_csv.empty()) {
    absl::StatusOr<std::string> text = ReadFile(opts.add_model_csv);
    if (!text.ok()) return text.status();
    absl::StatusOr<AddCostModel> model = ParseAddCostCsv(*text);
    if (!model.ok()) {
      return absl::Status(model.status().code(),
                          StrCat(opts.add_model_csv, ": ",
                                       std::string(model.status().message())));
    }
    return model;
  }
  if (opts.memory_bandwidth.has_value()) {
    if (!(*opts.memory_bandwidth > 0)) {
      return absl::InvalidArgumentError("memory bandwidth must be > 0");
    }
    return AddCostModel::Linear(*opts.memory_bandwidth);
  }
  return AddCostModel::Default();
}

absl::StatusOr<FusionConfig> MakeFusion(const CommonOptions& opts) {
  FusionConfig fusion{opts.timeout_ms * 1e-3, opts.buffer_bytes};
  if (auto s = fusion.Validate(); !s.ok()) return s;
  return fusion;
}

template <typename T>
absl::StatusOr<std::vector<T>> ParseList(std::string_view field,
                                         std::string_view text) {
  std::vector<T> values;
  for (std::string_view item : Split(text, ',')) {
    item = StripWhitespace(item);
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, int>) {
      std::optional<long long> v = ParseInt(item);
      if (!v || *v < std::numeric_limits<int>::min() ||
          *v > std::numeric_limits<int>::max()) {
        return absl::InvalidArgumentError(
            StrCat(field, ": \"", item, "\" is not an integer"));
      }
      values.push_back(static_cast<int>(*v));
    } else {
      std::optional<double> v = ParseDouble(item);
      if (!v) {
        return absl::InvalidArgumentError(
            StrCat(field, ": \"", item, "\" is not a number"));
      }
      values.push_back(*v);
    }
  }
  return values;
}

void AddWorkloadOptions(CLI::App* cmd, WorkloadSource* src) {
  cmd->add_option("--trace", src->trace_path, "Trace file");
  cmd->add_option("--model", src->model, "Bundled profile")
      ->check(CLI::IsMember(kModelNames));
  cmd->add_option("--t-batch", src->t_batch,
                  "Single-GPU batch time for a bundled profile (s)");
  cmd->add_option("--t-back", src->t_back,
                  "Backward time for a bundled profile (s)");
}

void AddCommonOptions(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--spacing", opts->spacing,
                  "Synthetic ready-time spacing: compute or size")
      ->capture_default_str();
  cmd->add_option("--timeout-ms", opts->timeout_ms, "Fusion timeout (ms)")
      ->capture_default_str();
  cmd->add_option("--buffer-bytes", opts->buffer_bytes,
                  "Fusion buffer cap (bytes)")
      ->capture_default_str();
  cmd->add_option("--add-model", opts->add_model_csv,
                  "Vector-add cost table (CSV: size_bytes,seconds)");
  cmd->add_option("--memory-bandwidth", opts->memory_bandwidth,
                  "Linear add model memory bandwidth (bytes/s)");
}

absl::Status RequireOneWorkload(const WorkloadSource& src) {
  if (src.trace_path.empty() == src.model.empty()) {
    return absl::InvalidArgumentError(
        "exactly one of --trace or --model is required");
  }
  return absl::OkStatus();
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

int FailUsage(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitUsage;
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  WorkloadSource src;
  std::string spacing = "compute";
  std::string out_path;
};

int RunSynth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ModelTrace> trace = LoadWorkload(args.src, args.spacing);
  if (!trace.ok()) return Fail(err, trace.status());
  if (auto s = WriteFile(args.out_path, SerializeTrace(*trace)); !s.ok()) {
    return Fail(err, s);
  }
  out << "wrote " << args.out_path << " (" << trace->events().size()
      << " events, " << trace->total_bytes() << " bytes)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  WorkloadSource src;
  CommonOptions common;
  int workers = 16;
  double bandwidth_gbps = 100;
  double ratio = 1;
  std::string flush_log;
};

int RunSimulate(const SimulateArgs& args, std::ostream& out,
                std::ostream& err) {
  if (auto s = RequireOneWorkload(args.src); !s.ok()) {
    return FailUsage(err, s);
  }
  absl::StatusOr<ModelTrace> trace =
      LoadWorkload(args.src, args.common.spacing);
  if (!trace.ok()) return Fail(err, trace.status());
  absl::StatusOr<AddCostModel> add_model = LoadAddModel(args.common);
  if (!add_model.ok()) return Fail(err, add_model.status());
  absl::StatusOr<FusionConfig> fusion = MakeFusion(args.common);
  if (!fusion.ok()) return Fail(err, fusion.status());

  SimConfig config{ClusterConfig{args.workers, args.bandwidth_gbps * kGbps},
                   *fusion, CompressionModel{args.ratio}, *add_model};
  absl::StatusOr<SimResult> result = Simulate(*trace, config);
  if (!result.ok()) return Fail(err, result.status());
  out << FormatSimReport(*trace, config, *result);
  if (!args.flush_log.empty()) {
    if (auto s = WriteFile(args.flush_log, FlushLogToCsv(*result)); !s.ok()) {
      return Fail(err, s);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string config_path;
  std::vector<std::string> models;
  std::vector<std::string> traces;
  std::string bandwidths_gbps = "1,10,25,40,100";
  std::string workers = "16";
  std::string ratios = "1";
  std::string axis;
  CommonOptions common;
  std::string out_dir = ".";
  std::string name = "sweep";
  unsigned threads = 0;
};

// Settings after merging the config file and the flags.
struct SweepPlan {
  std::vector<WorkloadSource> workloads;
  std::vector<double> bandwidths_gbps;
  std::vector<int> workers;
  std::vector<double> ratios;
  std::string axis;
  CommonOptions common;
  std::string name;
  std::set<std::string> config_keys;  // header keys the config file set
};

absl::Status ApplySweepConfig(std::string_view text, SweepPlan* plan) {
  bool seen_header = false;
  const std::vector<std::string_view> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string where = StrCat("line ", i + 1);
    std::string_view line = StripWhitespace(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      return absl::InvalidArgumentError(
          StrCat(where, ": expected a JSON object"));
    }
    try {
      if (!seen_header) {
        seen_header = true;
        for (const auto& [key, value] : obj.items()) {
          plan->config_keys.insert(key);
          if (key == "name") {
            plan->name = value.get<std::string>();
          } else if (key == "axis") {
            plan->axis = value.get<std::string>();
          } else if (key == "models") {
            for (const auto& m : value) {
              plan->workloads.push_back({"", m.get<std::string>(), {}, {}});
            }
          } else if (key == "traces") {
            for (const auto& t : value) {
              plan->workloads.push_back({t.get<std::string>(), "", {}, {}});
            }
          } else if (key == "bandwidths_gbps") {
            plan->bandwidths_gbps = value.get<std::vector<double>>();
          } else if (key == "workers") {
            plan->workers = value.get<std::vector<int>>();
          } else if (key == "ratios") {
            plan->ratios = value.get<std::vector<double>>();
          } else if (key == "timeout_s") {
            plan->common.timeout_ms = value.get<double>() * 1e3;
          } else if (key == "buffer_bytes") {
            plan->common.buffer_bytes = value.get<uint64_t>();
          } else if (key == "add_model_csv") {
            plan->common.add_model_csv = value.get<std::string>();
          } else if (key == "memory_bandwidth_Bps") {
            plan->common.memory_bandwidth = value.get<double>();
          } else if (key == "spacing") {
            plan->common.spacing = value.get<std::string>();
          } else {
            return absl::InvalidArgumentError(
                StrCat(where, ": field \"", key, "\": unknown field"));
          }
        }
        continue;
      }
      // Workload records.
      WorkloadSource src;
      for (const auto& [key, value] : obj.items()) {
        if (key == "model") {
          src.model = value.get<std::string>();
        } else if (key == "trace") {
          src.trace_path = value.get<std::string>();
        } else if (key == "t_batch_s") {
          src.t_batch = value.get<double>();
        } else if (key == "t_back_s") {
          src.t_back = value.get<double>();
        } else {
          return absl::InvalidArgumentError(
              StrCat(where, ": field \"", key, "\": unknown field"));
        }
      }
      if (auto s = RequireOneWorkload(src); !s.ok()) {
        return absl::InvalidArgumentError(
            StrCat(where, ": ", std::string(s.message())));
      }
      plan->workloads.push_back(std::move(src));
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(
          StrCat(where, ": wrong field type (", e.what(), ")"));
    }
  }
  if (!seen_header) {
    return absl::InvalidArgumentError("sweep config has no header line");
  }
  return absl::OkStatus();
}

std::string CanonicalSweepConfig(const SweepPlan& plan,
                                 const std::vector<SweepSpec>& specs,
                                 SweepAxis axis) {
  auto doubles = [](const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double d : v) s.push_back(FormatDouble(d));
    return StrJoin(s, ",");
  };
  std::string c;
  StrAppend(&c, "axis=", SweepAxisName(axis), "\n");
  StrAppend(&c, "bandwidths_gbps=", doubles(plan.bandwidths_gbps), "\n");
  StrAppend(&c, "workers=", StrJoin(plan.workers, ","), "\n");
  StrAppend(&c, "ratios=", doubles(plan.ratios), "\n");
  if (!specs.empty()) {
    StrAppend(&c, "timeout_s=", FormatDouble(specs[0].fusion.timeout),
                    "\n");
    StrAppend(&c, "buffer_bytes=", specs[0].fusion.buffer_cap_bytes,
                    "\n");
    StrAppend(&c, "add_model=\n", SerializeAddCostCsv(specs[0].add_model));
  }
  for (const SweepSpec& spec : specs) {
    StrAppend(&c, "trace=\n", SerializeTrace(spec.trace));
  }
  return c;
}

int RunSweepCommand(const SweepArgs& args, const CLI::App& cmd,
                    std::ostream& out, std::ostream& err) {
  SweepPlan plan;
  plan.common = args.common;
  plan.name = args.name;
  if (!args.config_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(args.config_path);
    if (!text.ok()) return Fail(err, text.status());
    if (auto s = ApplySweepConfig(*text, &plan); !s.ok()) {
      return Fail(err, absl::Status(s.code(), StrCat(args.config_path,
                                                           ": ", std::string(s.message()))));
    }
  }
  // Explicit flags win over the config file.
  auto given = [&cmd](const char* flag) { return cmd.count(flag) > 0; };
  const bool from_config = !args.config_path.empty();
  // A list comes from the flag (or its default) unless the config file set
  // it and the flag was not given.
  auto take_list = [&](const char* flag, const char* config_key,
                       const std::string& text, auto* dest) -> absl::Status {
    if (from_config && !given(flag) && plan.config_keys.count(config_key)) {
      return absl::OkStatus();
    }
    using T = typename std::remove_pointer_t<decltype(dest)>::value_type;
    absl::StatusOr<std::vector<T>> v =
        ParseList<T>(std::string_view(flag).substr(2), text);
    if (!v.ok()) return v.status();
    *dest = *std::move(v);
    return absl::OkStatus();
  };
  if (auto s = take_list("--bandwidths-gbps", "bandwidths_gbps",
                         args.bandwidths_gbps, &plan.bandwidths_gbps);
      !s.ok()) {
    return Fail(err, s);
  }
  if (auto s = take_list("--workers", "workers", args.workers, &plan.workers);
      !s.ok()) {
    return Fail(err, s);
  }
  if (auto s = take_list("--ratios", "ratios", args.ratios, &plan.ratios);
      !s.ok()) {
    return Fail(err, s);
  }
  if (given("--axis")) plan.axis = args.axis;
  if (given("--name")) plan.name = args.name;
  if (given("--spacing")) plan.common.spacing = args.common.spacing;
  if (given("--timeout-ms")) plan.common.timeout_ms = args.common.timeout_ms;
  if (given("--buffer-bytes")) {
    plan.common.buffer_bytes = args.common.buffer_bytes;
  }
  if (given("--add-model")) plan.common.add_model_csv = args.common.add_model_csv;
  if (given("--memory-bandwidth")) {
    plan.common.memory_bandwidth = args.common.memory_bandwidth;
  }
  if (given("--model") || given("--trace")) plan.workloads.clear();
  for (const std::string& m : args.models) {
    plan.workloads.push_back({"", m, {}, {}});
  }
  for (const std::string& t : args.traces) {
    plan.workloads.push_back({t, "", {}, {}});
  }
  if (plan.workloads.empty()) {
    for (const std::string& m : kModelNames) {
      plan.workloads.push_back({"", m, {}, {}});
    }
  }
  if (plan.name.empty() || plan.name.find('/') != std::string::npos) {
    return Fail(err, absl::InvalidArgumentError(
                         "name: must be a non-empty file name stem"));
  }

  SweepAxis axis = SweepAxis::kBandwidth;
  if (!plan.axis.empty()) {
    absl::StatusOr<SweepAxis> a = SweepAxisFromName(plan.axis);
    if (!a.ok()) return Fail(err, a.status());
    axis = *a;
  } else if (plan.bandwidths_gbps.size() <= 1 && plan.workers.size() > 1) {
    axis = SweepAxis::kWorkers;
  } else if (plan.bandwidths_gbps.size() <= 1 && plan.ratios.size() > 1) {
    axis = SweepAxis::kRatio;
  }

  absl::StatusOr<AddCostModel> add_model = LoadAddModel(plan.common);
  if (!add_model.ok()) return Fail(err, add_model.status());
  absl::StatusOr<FusionConfig> fusion = MakeFusion(plan.common);
  if (!fusion.ok()) return Fail(err, fusion.status());
  std::vector<double> bandwidths_bps;
  for (double g : plan.bandwidths_gbps) bandwidths_bps.push_back(g * kGbps);

  std::vector<SweepSpec> specs;
  for (const WorkloadSource& src : plan.workloads) {
    absl::StatusOr<ModelTrace> trace = LoadWorkload(src, plan.common.spacing);
    if (!trace.ok()) return Fail(err, trace.status());
    SweepSpec spec{*std::move(trace), bandwidths_bps, plan.workers,
                   plan.ratios,       *fusion,        *add_model};
    if (auto s = spec.Validate(); !s.ok()) return Fail(err, s);
    specs.push_back(std::move(spec));
  }

  const std::vector<ReferencePoint> references = LoadReferenceData();
  ReportBundle bundle;
  for (const SweepSpec& spec : specs) {
    absl::StatusOr<std::vector<SweepRow>> rows =
        RunSweep(spec, references, args.threads);
    if (!rows.ok()) {
      return Fail(err, absl::Status(rows.status().code(),
                                    StrCat(spec.trace.name(), ": ",
                                                 std::string(rows.status().message()))));
    }
    bundle.rows.insert(bundle.rows.end(), rows->begin(), rows->end());
  }
  bundle.metadata.tool_version = std::string(ToolVersion());
  bundle.metadata.config_digest =
      ConfigDigest(CanonicalSweepConfig(plan, specs, axis));
  bundle.metadata.timestamp = Timestamp();

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  const std::filesystem::path dir(args.out_dir);
  const std::string csv_path = (dir / (plan.name + ".csv")).string();
  if (auto s = WriteFile(csv_path, RenderReportCsv(bundle)); !s.ok()) {
    return Fail(err, s);
  }
  out << "wrote " << csv_path << " (" << bundle.rows.size() << " rows)\n";
  for (const auto& [suffix, chart] : BuildSweepCharts(bundle.rows, axis)) {
    const std::string svg_path =
        (dir / StrCat(plan.name, suffix, ".svg")).string();
    if (auto s = WriteFile(svg_path, RenderSvg(chart)); !s.ok()) {
      return Fail(err, s);
    }
    out << "wrote " << svg_path << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compress-ratio

struct CompressRatioArgs {
  WorkloadSource src;
  CommonOptions common;
  int workers = 16;
  double bandwidth_gbps = 10;
  double target = 0.99;
  std::string ratios;
};

int RunCompressRatio(const CompressRatioArgs& args, std::ostream& out,
                     std::ostream& err) {
  if (auto s = RequireOneWorkload(args.src); !s.ok()) {
    return FailUsage(err, s);
  }
  absl::StatusOr<ModelTrace> trace =
      LoadWorkload(args.src, args.common.spacing);
  if (!trace.ok()) return Fail(err, trace.status());
  absl::StatusOr<AddCostModel> add_model = LoadAddModel(args.common);
  if (!add_model.ok()) return Fail(err, add_model.status());
  absl::StatusOr<FusionConfig> fusion = MakeFusion(args.common);
  if (!fusion.ok()) return Fail(err, fusion.status());
  std::vector<double> grid = DefaultRatioGrid();
  if (!args.ratios.empty()) {
    absl::StatusOr<std::vector<double>> parsed =
        ParseList<double>("ratios", args.ratios);
    if (!parsed.ok()) return Fail(err, parsed.status());
    grid = *std::move(parsed);
  }
  ClusterConfig cluster{args.workers, args.bandwidth_gbps * kGbps};
  if (auto s = cluster.Validate(); !s.ok()) return Fail(err, s);
  absl::StatusOr<std::optional<double>> ratio = MinRatioForTarget(
      *trace, cluster, *fusion, *add_model, args.target, grid);
  if (!ratio.ok()) return Fail(err, ratio.status());
  out << "model: " << trace->name() << "\n"
      << "n_workers: " << args.workers << "\n"
      << "bandwidth_bps: " << FormatDouble(cluster.bandwidth_bps) << "\n"
      << "target_f: " << FormatDouble(args.target) << "\n"
      << "min_ratio: "
      << (ratio->has_value() ? FormatDouble(**ratio) : "unreachable on grid")
      << "\n";
  return kExitOk;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDataLoss:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"What-if simulator for data-parallel training scalability",
               "whatif"};
  app.set_version_flag("--version", std::string(ToolVersion()));
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Write a trace for a bundled model profile");
  synth_cmd->add_option("--model", synth.src.model, "Bundled profile")
      ->required()
      ->check(CLI::IsMember(kModelNames));
  synth_cmd->add_option("--t-batch", synth.src.t_batch,
                        "Single-GPU batch time (s)");
  synth_cmd->add_option("--t-back", synth.src.t_back, "Backward time (s)");
  synth_cmd->add_option("--spacing", synth.spacing, "compute or size")
      ->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out_path, "Output trace file")
      ->required();

  SimulateArgs simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Simulate one iteration");
  AddWorkloadOptions(simulate_cmd, &simulate.src);
  AddCommonOptions(simulate_cmd, &simulate.common);
  simulate_cmd->add_option("-n,--workers", simulate.workers, "Workers (GPUs)")
      ->capture_default_str();
  simulate_cmd->add_option("--bandwidth-gbps", simulate.bandwidth_gbps,
                           "Per-worker bandwidth (Gbps)")
      ->capture_default_str();
  simulate_cmd->add_option("--ratio", simulate.ratio, "Compression ratio")
      ->capture_default_str();
  simulate_cmd->add_option("--flush-log", simulate.flush_log,
                           "Write the flush timeline as CSV");

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Sweep bandwidth, workers or compression");
  sweep_cmd->add_option("--config", sweep.config_path, "Sweep config file");
  sweep_cmd->add_option("--model", sweep.models, "Bundled profile (repeatable)")
      ->check(CLI::IsMember(kModelNames));
  sweep_cmd->add_option("--trace", sweep.traces, "Trace file (repeatable)");
  sweep_cmd->add_option("--bandwidths-gbps", sweep.bandwidths_gbps,
                        "Comma-separated bandwidths (Gbps)")
      ->capture_default_str();
  sweep_cmd->add_option("--workers", sweep.workers,
                        "Comma-separated worker counts")
      ->capture_default_str();
  sweep_cmd->add_option("--ratios", sweep.ratios,
                        "Comma-separated compression ratios")
      ->capture_default_str();
  sweep_cmd->add_option("--axis", sweep.axis,
                        "Plot axis: bandwidth, workers or ratio");
  AddCommonOptions(sweep_cmd, &sweep.common);
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "Output directory")
      ->capture_default_str();
  sweep_cmd->add_option("--name", sweep.name, "Output file stem")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads,
                        "Worker threads (0 = all cores)");

  CompressRatioArgs compress;
  CLI::App* compress_cmd = app.add_subcommand(
      "compress-ratio", "Smallest compression ratio reaching a target");
  AddWorkloadOptions(compress_cmd, &compress.src);
  AddCommonOptions(compress_cmd, &compress.common);
  compress_cmd->add_option("-n,--workers", compress.workers, "Workers (GPUs)")
      ->capture_default_str();
  compress_cmd->add_option("--bandwidth-gbps", compress.bandwidth_gbps,
                           "Per-worker bandwidth (Gbps)")
      ->capture_default_str();
  compress_cmd->add_option("--target", compress.target,
                           "Target scaling factor")
      ->capture_default_str();
  compress_cmd->add_option("--ratios", compress.ratios,
                           "Comma-separated ratio grid (ascending)");

  std::string reference_out;
  CLI::App* reference_cmd = app.add_subcommand(
      "reference", "Print the bundled measured scaling factors");
  reference_cmd->add_option("-o,--out", reference_out, "Write to a file");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth_cmd->parsed()) return RunSynth(synth, out, err);
  if (simulate_cmd->parsed()) return RunSimulate(simulate, out, err);
  if (sweep_cmd->parsed()) return RunSweepCommand(sweep, *sweep_cmd, out, err);
  if (compress_cmd->parsed()) return RunCompressRatio(compress, out, err);
  if (reference_cmd->parsed()) {
    const std::string csv = SerializeReferenceCsv(LoadReferenceData());
    if (reference_out.empty()) {
      out << csv;
    } else if (auto s = WriteFile(reference_out, csv); !s.ok()) {
      return Fail(err, s);
    }
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace whatif
