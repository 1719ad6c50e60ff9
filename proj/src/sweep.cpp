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

#include "vdpsync/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vdpsync/error.hpp"
#include "vdpsync/steady_state.hpp"

namespace vdpsync {

namespace {

constexpr Axis kAxes[] = {Axis::Delta1, Axis::Delta2, Axis::Coupling, Axis::Drive, Axis::Gamma2};

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::Config, message);
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> keys,
                         std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) config_error("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string describe(const SystemParams& p) {
  std::ostringstream out;
  out << "delta1=" << format_number(p.delta1) << " delta2=" << format_number(p.delta2)
      << " gamma1=" << format_number(p.gamma1) << " gamma2=" << format_number(p.gamma2)
      << " coupling=" << format_number(p.coupling) << " drive=" << format_number(p.drive)
      << " n_max=" << p.trunc.n_max_1 << "x" << p.trunc.n_max_2;
  return out.str();
}

std::string phase_kind_name(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::Single1: return "single1";
    case PhaseKind::Single2: return "single2";
    case PhaseKind::Relative: return "relative";
  }
  return "relative";
}

void write_measure(std::ostream& out, const SyncMeasure& s) {
  const Complex v = s.defined ? s.value : Complex(0.0, 0.0);
  out << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << ','
      << format_number(s.magnitude()) << ',' << (s.defined ? 1 : 0);
}

}  // namespace

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::Delta1: return "delta1";
    case Axis::Delta2: return "delta2";
    case Axis::Coupling: return "coupling";
    case Axis::Drive: return "drive";
    case Axis::Gamma2: return "gamma2";
  }
  return "delta1";
}

std::optional<Axis> parse_axis(std::string_view name) {
  for (Axis a : kAxes) {
    if (axis_name(a) == name) return a;
  }
  return std::nullopt;
}

void set_axis(SystemParams& params, Axis axis, double value) {
  switch (axis) {
    case Axis::Delta1: params.delta1 = value; break;
    case Axis::Delta2: params.delta2 = value; break;
    case Axis::Coupling: params.coupling = value; break;
    case Axis::Drive: params.drive = value; break;
    case Axis::Gamma2: params.gamma2 = value; break;
  }
}

double get_axis(const SystemParams& params, Axis axis) {
  switch (axis) {
    case Axis::Delta1: return params.delta1;
    case Axis::Delta2: return params.delta2;
    case Axis::Coupling: return params.coupling;
    case Axis::Drive: return params.drive;
    case Axis::Gamma2: return params.gamma2;
  }
  return 0.0;
}

void SweepAxis::validate() const {
  const std::string name(axis_name(axis));
  if (count < 2) config_error("axis " + name + " needs count >= 2");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
    config_error("axis " + name + " needs finite start < stop");
  }
}

double SweepAxis::value(int i) const {
  if (i == count - 1) return stop;
  return start + double(i) * (stop - start) / double(count - 1);
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = value(i);
  return v;
}

void SweepConfig::validate() const {
  try {
    params.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (axes.empty() || axes.size() > 2) config_error("a sweep needs one or two axes");
  for (const auto& a : axes) a.validate();
  if (axes.size() == 2 && axes[0].axis == axes[1].axis) config_error("sweep axes must differ");
  if (phase_grid < 3) config_error("phase_grid must be >= 3");
  if (!(tolerance > 0.0)) config_error("tolerance must be positive");
}

std::size_t SweepConfig::points() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= std::size_t(a.count);
  return n;
}

SystemParams SweepConfig::point(std::size_t index) const {
  SystemParams p = params;
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    set_axis(p, it->axis, it->value(int(index % std::size_t(it->count))));
    index /= std::size_t(it->count);
  }
  return p;
}

SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("config must be an object");
  reject_unknown_keys(doc, {"params", "axes", "outputs", "phase_grid", "tolerance", "threads", "output"},
                      "config");
  SweepConfig config;
  if (doc.contains("params")) {
    const auto& p = doc.at("params");
    if (!p.is_object()) config_error("params must be an object");
    reject_unknown_keys(p, {"delta1", "delta2", "gamma1", "gamma2", "coupling", "drive", "n_max",
                            "n_max_1", "n_max_2"},
                        "params");
    read(p, "delta1", config.params.delta1);
    read(p, "delta2", config.params.delta2);
    read(p, "gamma1", config.params.gamma1);
    read(p, "gamma2", config.params.gamma2);
    read(p, "coupling", config.params.coupling);
    read(p, "drive", config.params.drive);
    int n_max = -1;
    read(p, "n_max", n_max);
    if (n_max >= 0) config.params.trunc = Truncation::uniform(n_max);
    read(p, "n_max_1", config.params.trunc.n_max_1);
    read(p, "n_max_2", config.params.trunc.n_max_2);
  }
  if (doc.contains("axes")) {
    const auto& axes = doc.at("axes");
    if (!axes.is_array()) config_error("axes must be an array");
    for (const auto& a : axes) {
      if (!a.is_object()) config_error("each axis must be an object");
      reject_unknown_keys(a, {"name", "start", "stop", "count"}, "axis");
      std::string name;
      read(a, "name", name);
      const auto axis = parse_axis(name);
      if (!axis) config_error("unknown axis '" + name + "'");
      SweepAxis s;
      s.axis = *axis;
      if (!a.contains("start") || !a.contains("stop") || !a.contains("count")) {
        config_error("axis " + name + " needs start, stop and count");
      }
      read(a, "start", s.start);
      read(a, "stop", s.stop);
      read(a, "count", s.count);
      config.axes.push_back(s);
    }
  }
  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    if (!o.is_object()) config_error("outputs must be an object");
    reject_unknown_keys(o, {"sync", "relative_phase", "single_phase", "amplitudes"}, "outputs");
    read(o, "sync", config.outputs.sync);
    read(o, "relative_phase", config.outputs.relative_phase);
    read(o, "single_phase", config.outputs.single_phase);
    read(o, "amplitudes", config.outputs.amplitudes);
  }
  read(doc, "phase_grid", config.phase_grid);
  read(doc, "tolerance", config.tolerance);
  read(doc, "threads", config.threads);
  read(doc, "output", config.output);
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return sweep_config_from_json(doc);
}

nlohmann::json to_json(const SweepConfig& config) {
  nlohmann::json doc;
  const auto& p = config.params;
  doc["params"] = {{"delta1", p.delta1},   {"delta2", p.delta2},     {"gamma1", p.gamma1},
                   {"gamma2", p.gamma2},   {"coupling", p.coupling}, {"drive", p.drive},
                   {"n_max_1", p.trunc.n_max_1}, {"n_max_2", p.trunc.n_max_2}};
  doc["axes"] = nlohmann::json::array();
  for (const auto& a : config.axes) {
    doc["axes"].push_back(
        {{"name", axis_name(a.axis)}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
  }
  doc["outputs"] = {{"sync", config.outputs.sync},
                    {"relative_phase", config.outputs.relative_phase},
                    {"single_phase", config.outputs.single_phase},
                    {"amplitudes", config.outputs.amplitudes}};
  doc["phase_grid"] = config.phase_grid;
  doc["tolerance"] = config.tolerance;
  doc["threads"] = config.threads;
  doc["output"] = config.output;
  return doc;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

SweepRow evaluate_point(const SystemParams& params, const SweepConfig& config) {
  try {
    SteadyStateOptions options;
    options.tolerance = config.tolerance;
    const auto solution = solve_steady_state(build_liouvillian(params), options);
    SweepRow row;
    row.params = params;
    row.report = sync_measures(solution.rho);
    row.report.params = params;
    row.residual = solution.residual;
    if (config.outputs.relative_phase) {
      row.relative = relative_phase_distribution(solution.rho, config.phase_grid);
    }
    if (config.outputs.single_phase) {
      row.single1 = single_phase_distribution(solution.rho, Mode::One, config.phase_grid);
      row.single2 = single_phase_distribution(solution.rho, Mode::Two, config.phase_grid);
    }
    if (config.outputs.amplitudes) row.amplitudes = solve_amplitudes(params);
    return row;
  } catch (const Error& e) {
    throw Error(e.code(), "at " + describe(params) + ": " + e.what());
  }
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  result.rows = parallel_map<SweepRow>(config.points(), config.threads, [&](std::size_t i) {
    return evaluate_point(config.point(i), config);
  });
  return result;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_header(std::ostream& out, const SweepConfig& config, std::string_view title) {
  const auto& p = config.params;
  out << "# " << kToolVersion << '\n';
  out << "# " << title << '\n';
  out << "# delta1=" << format_number(p.delta1) << " delta2=" << format_number(p.delta2)
      << " gamma1=" << format_number(p.gamma1) << " gamma2=" << format_number(p.gamma2)
      << " coupling=" << format_number(p.coupling) << " drive=" << format_number(p.drive) << '\n';
  out << "# truncation n_max_1=" << p.trunc.n_max_1 << " n_max_2=" << p.trunc.n_max_2 << '\n';
  for (const auto& a : config.axes) {
    out << "# axis " << axis_name(a.axis) << " start=" << format_number(a.start)
        << " stop=" << format_number(a.stop) << " count=" << a.count << '\n';
  }
  out << "# tolerance=" << format_number(config.tolerance) << " phase_grid=" << config.phase_grid
      << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const auto& config = result.config;
  write_header(out, config, "sweep");
  out << "index,delta1,delta2,gamma1,gamma2,coupling,drive,n_max_1,n_max_2,n1,n2";
  for (const char* s : {"s1", "s2", "s3"}) {
    out << ',' << s << "_re," << s << "_im," << s << "_abs," << s << "_defined";
  }
  out << ",residual";
  if (config.outputs.amplitudes) {
    for (const char* c : {"c10", "c01", "c20", "c11", "c02"}) out << ',' << c << "_re," << c << "_im";
  }
  out << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    const auto& p = row.params;
    out << i << ',' << format_number(p.delta1) << ',' << format_number(p.delta2) << ','
        << format_number(p.gamma1) << ',' << format_number(p.gamma2) << ','
        << format_number(p.coupling) << ',' << format_number(p.drive) << ',' << p.trunc.n_max_1
        << ',' << p.trunc.n_max_2 << ',' << format_number(row.report.n1) << ','
        << format_number(row.report.n2);
    write_measure(out, row.report.s1);
    write_measure(out, row.report.s2);
    write_measure(out, row.report.s3);
    out << ',' << format_number(row.residual);
    if (row.amplitudes) {
      const auto& a = *row.amplitudes;
      for (Complex c : {a.c10, a.c01, a.c20, a.c11, a.c02}) {
        out << ',' << format_number(c.real()) << ',' << format_number(c.imag());
      }
    }
    out << '\n';
  }
}

void write_phase_csv(std::ostream& out, const SweepResult& result, PhaseKind kind) {
  const auto& config = result.config;
  write_header(out, config, "phase distribution " + phase_kind_name(kind));
  out << "# column phi_j holds P at phi = 2 pi j / " << config.phase_grid << '\n';
  out << "index";
  for (const auto& a : config.axes) out << ',' << axis_name(a.axis);
  for (std::size_t j = 0; j < config.phase_grid; ++j) out << ",phi_" << j;
  out << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    const std::optional<PhaseDistribution>& dist =
        kind == PhaseKind::Relative ? row.relative
        : kind == PhaseKind::Single1 ? row.single1
                                     : row.single2;
    if (!dist) throw Error(ErrorCode::InvalidArgument, "phase distribution was not requested");
    out << i;
    for (const auto& a : config.axes) out << ',' << format_number(get_axis(row.params, a.axis));
    for (double v : dist->values) out << ',' << format_number(v);
    out << '\n';
  }
}

std::vector<std::filesystem::path> write_sweep_files(const SweepResult& result) {
  const auto& config = result.config;
  if (config.output.empty()) config_error("no output path given");
  const std::filesystem::path main(config.output);
  if (main.has_parent_path()) std::filesystem::create_directories(main.parent_path());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& path, auto&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
    writer(out);
    written.push_back(path);
  };
  emit(main, [&](std::ostream& out) { write_sweep_csv(out, result); });
  auto sibling = [&](const std::string& suffix) {
    std::filesystem::path p = main;
    p.replace_filename(main.stem().string() + "_" + suffix + ".csv");
    return p;
  };
  if (config.outputs.relative_phase) {
    emit(sibling("relative_phase"),
         [&](std::ostream& out) { write_phase_csv(out, result, PhaseKind::Relative); });
  }
  if (config.outputs.single_phase) {
    emit(sibling("single1_phase"),
         [&](std::ostream& out) { write_phase_csv(out, result, PhaseKind::Single1); });
    emit(sibling("single2_phase"),
         [&](std::ostream& out) { write_phase_csv(out, result, PhaseKind::Single2); });
  }
  return written;
}

}  // namespace vdpsync
