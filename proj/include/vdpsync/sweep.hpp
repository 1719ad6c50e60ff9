// Copyright 2026 The vdpsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vdpsync/effective_model.hpp"
#include "vdpsync/observables.hpp"

namespace vdpsync {

inline constexpr std::string_view kToolVersion = "vdpsync 0.1.0";

enum class Axis { Delta1, Delta2, Coupling, Drive, Gamma2 };

std::string_view axis_name(Axis axis);
std::optional<Axis> parse_axis(std::string_view name);
void set_axis(SystemParams& params, Axis axis, double value);
double get_axis(const SystemParams& params, Axis axis);

struct SweepAxis {
  Axis axis = Axis::Delta2;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  void validate() const;
  double value(int i) const;  // start + i (stop - start) / (count - 1)
  std::vector<double> values() const;
};

struct SweepOutputs {
  bool sync = true;
  bool relative_phase = false;
  bool single_phase = false;
  bool amplitudes = false;
};

struct SweepConfig {
  SystemParams params;
  std::vector<SweepAxis> axes;  // first axis is the outer loop
  SweepOutputs outputs;
  std::size_t phase_grid = kDefaultPhaseGrid;
  double tolerance = 1e-10;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string output;

  void validate() const;
  std::size_t points() const;
  SystemParams point(std::size_t index) const;
};

// Keys mirror the struct fields; unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& doc);
SweepConfig load_sweep_config(const std::filesystem::path& path);
nlohmann::json to_json(const SweepConfig& config);

struct SweepRow {
  SystemParams params;
  SyncReport report;
  double residual = 0.0;
  std::optional<PhaseDistribution> relative;
  std::optional<PhaseDistribution> single1;
  std::optional<PhaseDistribution> single2;
  std::optional<AmplitudeVector> amplitudes;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;  // sweep order
};

unsigned resolve_threads(unsigned requested);

// Runs fn(i) for i in [0, count) on a worker pool and returns the results in
// index order. If any call throws, the exception of the lowest failing index
// is rethrown once all workers stop.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned threads,
                            const std::function<T(std::size_t)>& fn);

SweepRow evaluate_point(const SystemParams& params, const SweepConfig& config);
SweepResult run_sweep(const SweepConfig& config);

std::string format_number(double value);  // 12 significant digits
void write_header(std::ostream& out, const SweepConfig& config, std::string_view title);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_phase_csv(std::ostream& out, const SweepResult& result, PhaseKind kind);

// Writes the main table to config.output and one phase matrix per requested
// distribution next to it. Returns the files written.
std::vector<std::filesystem::path> write_sweep_files(const SweepResult& result);

// Figure data sets. Returns the files written under dir.
std::vector<std::string> figure_ids();
std::vector<std::filesystem::path> reproduce_figure(std::string_view id,
                                                    const std::filesystem::path& dir,
                                                    unsigned threads = 0);

}  // namespace vdpsync

#include "vdpsync/sweep_impl.hpp"
