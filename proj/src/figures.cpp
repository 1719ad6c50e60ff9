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

#include <fstream>
#include <ostream>

#include "vdpsync/error.hpp"
#include "vdpsync/perturbation.hpp"
#include "vdpsync/sweep.hpp"

namespace vdpsync {

namespace {

namespace fs = std::filesystem;

constexpr double kDetuningSpan = 8.0;
constexpr int kLineCount = 161;
constexpr int kMapCount = 41;
const std::vector<double> kLineCouplings{0.6, 1.0, 2.0, 3.0, 4.0};

SystemParams figure_params(double drive, double coupling) {
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 10.0;
  p.drive = drive;
  p.coupling = coupling;
  p.trunc = Truncation::uniform(5);
  return p;
}

SweepAxis make_axis(Axis axis, double start, double stop, int count) {
  SweepAxis a;
  a.axis = axis;
  a.start = start;
  a.stop = stop;
  a.count = count;
  return a;
}

std::vector<SweepRow> solve_points(const std::vector<SystemParams>& points,
                                   const SweepConfig& config) {
  return parallel_map<SweepRow>(points.size(), config.threads, [&](std::size_t i) {
    return evaluate_point(points[i], config);
  });
}

class FigureWriter {
 public:
  explicit FigureWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  template <class Fn>
  void emit(const std::string& name, Fn&& body) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
    body(out);
    written_.push_back(path);
  }

  std::vector<fs::path> files() && { return std::move(written_); }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

double measure(const SweepRow& row, int which) {
  switch (which) {
    case 1: return row.report.s1.magnitude();
    case 2: return row.report.s2.magnitude();
    default: return row.report.s3.magnitude();
  }
}

void write_phase_rows(std::ostream& out, std::string_view label, const std::vector<double>& axis,
                      const std::vector<PhaseDistribution>& dists) {
  out << "# column phi_j holds P at phi = 2 pi j / " << dists.front().values.size() << '\n';
  out << label;
  for (std::size_t j = 0; j < dists.front().values.size(); ++j) out << ",phi_" << j;
  out << '\n';
  for (std::size_t i = 0; i < dists.size(); ++i) {
    out << format_number(axis[i]);
    for (double v : dists[i].values) out << ',' << format_number(v);
    out << '\n';
  }
}

// Matrix table: one row per outer value, one column per inner value.
void write_map(std::ostream& out, std::string_view outer_name, const std::vector<double>& outer,
               std::string_view inner_name, const std::vector<double>& inner,
               const std::vector<SweepRow>& rows, int which) {
  out << outer_name << '\\' << inner_name;
  for (double v : inner) out << ',' << format_number(v);
  out << '\n';
  for (std::size_t i = 0; i < outer.size(); ++i) {
    out << format_number(outer[i]);
    for (std::size_t j = 0; j < inner.size(); ++j) {
      out << ',' << format_number(measure(rows[i * inner.size() + j], which));
    }
    out << '\n';
  }
}

void relative_phase_figure(FigureWriter& writer, const std::string& name, double drive,
                           unsigned threads, bool single_phase) {
  SweepConfig config;
  config.params = figure_params(drive, 0.0);
  config.axes = {make_axis(Axis::Coupling, 0.0, 5.0, 51)};
  config.outputs.relative_phase = true;
  config.threads = threads;
  const SweepResult result = run_sweep(config);
  std::vector<double> couplings;
  std::vector<PhaseDistribution> dists;
  for (const auto& row : result.rows) {
    couplings.push_back(row.params.coupling);
    dists.push_back(*row.relative);
  }
  writer.emit(name + "_relative_phase.csv", [&](std::ostream& out) {
    write_header(out, config, name + ": relative phase distribution vs coupling");
    write_phase_rows(out, "coupling", couplings, dists);
  });
  if (!single_phase) return;

  // Single-oscillator distributions at V = 1 and V = 3.
  SweepConfig single = config;
  single.axes.clear();
  single.outputs.relative_phase = false;
  single.outputs.single_phase = true;
  const std::vector<double> picks{1.0, 3.0};
  std::vector<SystemParams> points;
  for (double v : picks) points.push_back(figure_params(drive, v));
  const auto rows = solve_points(points, single);
  for (int mode : {1, 2}) {
    const std::string file = (mode == 1 ? "fig2c" : "fig2d") + std::string("_single") +
                             std::to_string(mode) + "_phase.csv";
    writer.emit(file, [&](std::ostream& out) {
      write_header(out, single, "single-oscillator phase distribution of mode " +
                                    std::to_string(mode) + " at coupling 1 and 3");
      out << "phi,coupling_1,coupling_3\n";
      const auto& a = mode == 1 ? *rows[0].single1 : *rows[0].single2;
      const auto& b = mode == 1 ? *rows[1].single1 : *rows[1].single2;
      for (std::size_t j = 0; j < a.values.size(); ++j) {
        out << format_number(a.grid[j]) << ',' << format_number(a.values[j]) << ','
            << format_number(b.values[j]) << '\n';
      }
    });
  }
}

void line_figure(FigureWriter& writer, unsigned threads) {
  SweepConfig config;
  config.params = figure_params(0.5, 0.0);
  config.threads = threads;
  const SweepAxis line = make_axis(Axis::Delta1, -kDetuningSpan, kDetuningSpan, kLineCount);
  const std::vector<double> detunings = line.values();

  const char panels[2][3] = {{'a', 'b', 'c'}, {'d', 'e', 'f'}};
  for (int column = 0; column < 2; ++column) {
    const Axis axis = column == 0 ? Axis::Delta1 : Axis::Delta2;
    std::vector<SystemParams> points;
    for (double v : kLineCouplings) {
      for (double d : detunings) {
        SystemParams p = figure_params(0.5, v);
        set_axis(p, axis, d);
        points.push_back(p);
      }
    }
    const auto rows = solve_points(points, config);
    SweepConfig described = config;
    described.axes = {make_axis(axis, -kDetuningSpan, kDetuningSpan, kLineCount)};
    for (int which = 1; which <= 3; ++which) {
      const std::string name = std::string("fig3") + panels[column][which - 1] + "_s" +
                               std::to_string(which) + "_vs_" + std::string(axis_name(axis)) +
                               ".csv";
      writer.emit(name, [&](std::ostream& out) {
        write_header(out, described,
                     "|s" + std::to_string(which) + "| vs " + std::string(axis_name(axis)));
        out << "# coupling values:";
        for (double v : kLineCouplings) out << ' ' << format_number(v);
        out << '\n' << axis_name(axis);
        for (double v : kLineCouplings) out << ",coupling_" << format_number(v);
        out << '\n';
        for (std::size_t j = 0; j < detunings.size(); ++j) {
          out << format_number(detunings[j]);
          for (std::size_t k = 0; k < kLineCouplings.size(); ++k) {
            out << ',' << format_number(measure(rows[k * detunings.size() + j], which));
          }
          out << '\n';
        }
      });
    }
  }
}

void detuning_map_figure(FigureWriter& writer, unsigned threads) {
  const char panels[2][3] = {{'a', 'b', 'c'}, {'d', 'e', 'f'}};
  const double couplings[2] = {0.6, 4.0};
  for (int block = 0; block < 2; ++block) {
    SweepConfig config;
    config.params = figure_params(0.5, couplings[block]);
    config.axes = {make_axis(Axis::Delta1, -kDetuningSpan, kDetuningSpan, kMapCount),
                   make_axis(Axis::Delta2, -kDetuningSpan, kDetuningSpan, kMapCount)};
    config.threads = threads;
    const SweepResult result = run_sweep(config);
    for (int which = 1; which <= 3; ++which) {
      const std::string name = std::string("fig4") + panels[block][which - 1] + "_s" +
                               std::to_string(which) + "_map.csv";
      writer.emit(name, [&](std::ostream& out) {
        write_header(out, config, "|s" + std::to_string(which) + "| over (delta1, delta2)");
        write_map(out, "delta1", config.axes[0].values(), "delta2", config.axes[1].values(),
                  result.rows, which);
      });
    }
  }
}

void damping_figure(FigureWriter& writer, unsigned threads) {
  const char panels[2][3] = {{'a', 'b', 'c'}, {'d', 'e', 'f'}};
  for (int block = 0; block < 2; ++block) {
    const Axis detuning = block == 0 ? Axis::Delta1 : Axis::Delta2;
    SweepConfig config;
    config.params = figure_params(0.5, 5.0);
    config.axes = {make_axis(Axis::Gamma2, 10.0, 50.0, 21),
                   make_axis(detuning, -kDetuningSpan, kDetuningSpan, kMapCount)};
    config.threads = threads;
    const SweepResult result = run_sweep(config);
    for (int which = 1; which <= 3; ++which) {
      const std::string name = std::string("fig5") + panels[block][which - 1] + "_s" +
                               std::to_string(which) + "_vs_gamma2_" +
                               std::string(axis_name(detuning)) + ".csv";
      writer.emit(name, [&](std::ostream& out) {
        write_header(out, config,
                     "|s" + std::to_string(which) + "| over (gamma2, " +
                         std::string(axis_name(detuning)) + ")");
        write_map(out, "gamma2", config.axes[0].values(), axis_name(detuning),
                  config.axes[1].values(), result.rows, which);
      });
    }
  }
}

void perturbative_figure(FigureWriter& writer, unsigned threads) {
  const double drives[2] = {0.1, 0.5};
  const char panels[2] = {'a', 'b'};
  for (int k = 0; k < 2; ++k) {
    SweepConfig config;
    config.params = figure_params(drives[k], 0.0);
    config.axes = {make_axis(Axis::Coupling, 0.0, 5.0, 51)};
    config.threads = threads;
    const std::vector<double> couplings = config.axes[0].values();
    const auto dists =
        parallel_map<PhaseDistribution>(couplings.size(), threads, [&](std::size_t i) {
          return perturbative_phase_distribution(config.point(i), kMaxPerturbativeOrder, config.phase_grid)
              .distribution;
        });
    writer.emit(std::string("figS1") + panels[k] + "_perturbative_phase.csv",
                [&](std::ostream& out) {
                  write_header(out, config,
                               "third-order perturbative relative phase distribution");
                  out << "# expansion in coupling and drive; outside coupling, drive <= "
                      << format_number(0.1 * (config.params.gamma1 + config.params.gamma2))
                      << " it is qualitative only\n";
                  write_phase_rows(out, "coupling", couplings, dists);
                });
  }
}

}  // namespace

std::vector<std::string> figure_ids() { return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "figS1"}; }

std::vector<fs::path> reproduce_figure(std::string_view id, const fs::path& dir, unsigned threads) {
  bool known = false;
  for (const auto& f : figure_ids()) known = known || f == id;
  if (!known) throw Error(ErrorCode::UnknownFigure, "unknown figure '" + std::string(id) + "'");

  FigureWriter writer(dir);
  if (id == "fig2a") {
    relative_phase_figure(writer, "fig2a", 0.1, threads, false);
  } else if (id == "fig2b") {
    relative_phase_figure(writer, "fig2b", 0.5, threads, true);
  } else if (id == "fig3") {
    line_figure(writer, threads);
  } else if (id == "fig4") {
    detuning_map_figure(writer, threads);
  } else if (id == "fig5") {
    damping_figure(writer, threads);
  } else {
    perturbative_figure(writer, threads);
  }
  return std::move(writer).files();
}

}  // namespace vdpsync
