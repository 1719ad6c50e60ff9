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

#include "vdpsync/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdpsync/effective_model.hpp"
#include "vdpsync/error.hpp"
#include "vdpsync/perturbation.hpp"
#include "vdpsync/steady_state.hpp"
#include "vdpsync/sweep.hpp"

namespace vdpsync {

namespace {

struct ParamFlags {
  std::string config;
  std::optional<double> delta1, delta2, gamma2, coupling, drive, tolerance;
  std::optional<int> n_max, n_max_1, n_max_2;
  std::optional<unsigned> threads;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--delta1", delta1, "detuning of oscillator 1 (units of gamma1)");
    app->add_option("--delta2", delta2, "detuning of oscillator 2");
    app->add_option("--gamma2", gamma2, "two-phonon loss rate");
    app->add_option("--coupling,-V", coupling, "coupling V");
    app->add_option("--drive,-E", drive, "drive strength E");
    app->add_option("--nmax", n_max, "Fock cutoff for both modes");
    app->add_option("--nmax1", n_max_1, "Fock cutoff of mode 1");
    app->add_option("--nmax2", n_max_2, "Fock cutoff of mode 2");
    app->add_option("--tolerance", tolerance, "steady-state residual tolerance");
    app->add_option("--threads", threads, "worker threads (0: all cores)");
  }

  SweepConfig resolve() const {
    SweepConfig c = config.empty() ? SweepConfig{} : load_sweep_config(config);
    if (delta1) c.params.delta1 = *delta1;
    if (delta2) c.params.delta2 = *delta2;
    if (gamma2) c.params.gamma2 = *gamma2;
    if (coupling) c.params.coupling = *coupling;
    if (drive) c.params.drive = *drive;
    if (n_max) c.params.trunc = Truncation::uniform(*n_max);
    if (n_max_1) c.params.trunc.n_max_1 = *n_max_1;
    if (n_max_2) c.params.trunc.n_max_2 = *n_max_2;
    if (tolerance) c.tolerance = *tolerance;
    if (threads) c.threads = *threads;
    c.params.validate();
    return c;
  }
};

std::string complex_text(Complex z) {
  return format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") +
         format_number(std::abs(z.imag())) + "i";
}

void print_params(std::ostream& out, const SystemParams& p) {
  out << "delta1: " << format_number(p.delta1) << '\n'
      << "delta2: " << format_number(p.delta2) << '\n'
      << "gamma1: " << format_number(p.gamma1) << '\n'
      << "gamma2: " << format_number(p.gamma2) << '\n'
      << "coupling: " << format_number(p.coupling) << '\n'
      << "drive: " << format_number(p.drive) << '\n'
      << "n_max: " << p.trunc.n_max_1 << ' ' << p.trunc.n_max_2 << '\n';
}

void print_measure(std::ostream& out, const char* name, const SyncMeasure& s) {
  if (!s.defined) {
    out << name << ": undefined\n";
    return;
  }
  out << name << ": " << complex_text(s.value) << "  abs " << format_number(s.magnitude())
      << "  arg " << format_number(s.phase()) << '\n';
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Config, "cannot write " + path);
  return file;
}

SweepAxis parse_axis_flag(const std::string& text) {
  // name:start:stop:count
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 4) throw Error(ErrorCode::Config, "axis '" + text + "' is not name:start:stop:count");
  const auto axis = parse_axis(parts[0]);
  if (!axis) throw Error(ErrorCode::Config, "unknown axis '" + parts[0] + "'");
  SweepAxis a;
  a.axis = *axis;
  try {
    std::size_t used = 0;
    a.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    a.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    a.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Config, "axis '" + text + "' has a malformed number");
  }
  return a;
}

int cmd_steady(const ParamFlags& flags, std::ostream& out) {
  const SweepConfig config = flags.resolve();
  SteadyStateOptions options;
  options.tolerance = config.tolerance;
  const auto solution = solve_steady_state(build_liouvillian(config.params), options);
  const SyncReport report = sync_measures(solution.rho);
  out << "# " << kToolVersion << '\n';
  print_params(out, config.params);
  out << "n1: " << format_number(report.n1) << '\n' << "n2: " << format_number(report.n2) << '\n';
  print_measure(out, "s1", report.s1);
  print_measure(out, "s2", report.s2);
  print_measure(out, "s3", report.s3);
  out << "residual: " << format_number(solution.residual) << '\n'
      << "method: " << solution.method << '\n';
  return 0;
}

struct SweepFlags {
  std::vector<std::string> axes;
  std::string output;
  bool relative_phase = false, single_phase = false, amplitudes = false;
  std::optional<std::size_t> grid;
};

int cmd_sweep(const ParamFlags& flags, const SweepFlags& sweep, std::ostream& out) {
  SweepConfig config = flags.resolve();
  if (!sweep.axes.empty()) {
    config.axes.clear();
    for (const auto& a : sweep.axes) config.axes.push_back(parse_axis_flag(a));
  }
  if (!sweep.output.empty()) config.output = sweep.output;
  config.outputs.relative_phase = config.outputs.relative_phase || sweep.relative_phase;
  config.outputs.single_phase = config.outputs.single_phase || sweep.single_phase;
  config.outputs.amplitudes = config.outputs.amplitudes || sweep.amplitudes;
  if (sweep.grid) config.phase_grid = *sweep.grid;
  config.validate();
  if (config.output.empty()) throw Error(ErrorCode::Config, "sweep needs --output or an output key");
  const SweepResult result = run_sweep(config);
  for (const auto& path : write_sweep_files(result)) out << path.string() << '\n';
  return 0;
}

int cmd_phase(const ParamFlags& flags, const std::string& kind, std::size_t grid,
              const std::string& output, std::ostream& out) {
  SweepConfig config = flags.resolve();
  config.phase_grid = grid;
  SteadyStateOptions options;
  options.tolerance = config.tolerance;
  const auto solution = solve_steady_state(build_liouvillian(config.params), options);
  PhaseDistribution dist;
  if (kind == "relative") {
    dist = relative_phase_distribution(solution.rho, grid);
  } else {
    dist = single_phase_distribution(solution.rho, kind == "single1" ? Mode::One : Mode::Two, grid);
  }
  std::ofstream file;
  std::ostream& sink = open_output(output, file, out);
  write_header(sink, config, kind + " phase distribution");
  sink << "phi,P\n";
  for (std::size_t j = 0; j < dist.values.size(); ++j) {
    sink << format_number(dist.grid[j]) << ',' << format_number(dist.values[j]) << '\n';
  }
  return 0;
}

int cmd_modes(const ParamFlags& flags, int subspace, std::ostream& out) {
  const SweepConfig config = flags.resolve();
  const NormalModeSet set = normal_modes(config.params, subspace);
  out << "# " << kToolVersion << '\n' << "subspace: " << set.subspace << '\n';
  out << "basis:";
  for (const auto& [n, m] : set.basis) out << " |" << n << m << '>';
  out << '\n';
  for (const auto& mode : set.modes) {
    out << "energy " << format_number(mode.energy) << " :";
    for (Index i = 0; i < mode.vector.size(); ++i) out << ' ' << complex_text(mode.vector(i));
    out << '\n';
  }
  return 0;
}

int cmd_amplitudes(const ParamFlags& flags, std::ostream& out) {
  const SweepConfig config = flags.resolve();
  const AmplitudeVector a = solve_amplitudes(config.params);
  out << "# " << kToolVersion << '\n';
  print_params(out, config.params);
  out << "c00: " << complex_text(a.c00) << '\n'
      << "c10: " << complex_text(a.c10) << '\n'
      << "c01: " << complex_text(a.c01) << '\n'
      << "c20: " << complex_text(a.c20) << '\n'
      << "c11: " << complex_text(a.c11) << '\n'
      << "c02: " << complex_text(a.c02) << '\n'
      << "c01/c10: " << complex_text(a.ratio_01_10()) << '\n'
      << "condition: " << format_number(a.condition_number) << '\n';
  return 0;
}

int cmd_perturb(const ParamFlags& flags, int order, bool closed_form, std::size_t grid,
                const std::string& output, std::ostream& out, std::ostream& err) {
  const SweepConfig config = flags.resolve();
  const SystemParams& p = config.params;
  const PerturbativePhase phase = perturbative_phase_distribution(p, order, grid);
  if (phase.warning) err << "warning: " << *phase.warning << '\n';
  const PhaseCoefficients c = phase_coefficients(p);
  out << "# " << kToolVersion << '\n';
  print_params(out, p);
  out << "order: " << order << '\n'
      << "sin1: " << format_number(phase.sin1) << '\n'
      << "cos2: " << format_number(phase.cos2) << '\n'
      << "c0: " << format_number(c.c0) << '\n'
      << "c1: " << format_number(c.c1) << '\n'
      << "c2: " << format_number(c.c2) << '\n'
      << "c3: " << format_number(c.c3) << '\n'
      << "c4: " << format_number(c.c4) << '\n';
  if (closed_form) {
    const PerturbationSeries series(p, std::max(order, 2));
    CoherenceBlock block = zeroth_order(p);
    for (int q = 1; q <= 2; ++q) {
      block = closed_form_correction(p, block);
      const Complex exact = coherence_block(series.correction(q), p.trunc, q).sum();
      out << "closed_form_block_sum_" << q << ": " << complex_text(block.sum()) << '\n'
          << "series_block_sum_" << q << ": " << complex_text(exact) << '\n';
    }
  }
  if (!output.empty()) {
    std::ofstream file;
    std::ostream& sink = open_output(output, file, out);
    write_header(sink, config, "perturbative relative phase distribution, order " +
                                   std::to_string(order));
    sink << "phi,P\n";
    const auto& d = phase.distribution;
    for (std::size_t j = 0; j < d.values.size(); ++j) {
      sink << format_number(d.grid[j]) << ',' << format_number(d.values[j]) << '\n';
    }
  }
  return 0;
}

int cmd_reproduce(const std::string& id, const std::string& dir, const ParamFlags& flags,
                  std::ostream& out) {
  const unsigned threads = flags.threads.value_or(0);
  for (const auto& path : reproduce_figure(id, dir, threads)) out << path.string() << '\n';
  return 0;
}

int cmd_converge(const ParamFlags& flags, const ConvergenceOptions& options, std::ostream& out) {
  const SweepConfig config = flags.resolve();
  const ConvergenceReport report = check_convergence(config.params, {}, options);
  out << "# " << kToolVersion << '\n';
  print_params(out, config.params);
  out << "# n_max,max_change,n1,n2,abs_s1,abs_s2,abs_s3\n";
  for (const auto& step : report.history) {
    out << step.n_max << ',' << format_number(step.max_change);
    for (double v : step.values) out << ',' << format_number(v);
    out << '\n';
  }
  out << "converged n_max: " << report.n_max << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled driven quantum van der Pol oscillators", "vdpsync"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  ParamFlags flags;

  auto* steady = app.add_subcommand("steady", "steady state and synchronization measures");
  flags.attach(steady);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  flags.attach(sweep);
  sweep->add_option("--axis", sweep_flags.axes, "name:start:stop:count, repeat for a 2D sweep");
  sweep->add_option("--output,-o", sweep_flags.output, "main CSV path");
  sweep->add_flag("--relative-phase", sweep_flags.relative_phase, "also write P(varphi) rows");
  sweep->add_flag("--single-phase", sweep_flags.single_phase, "also write P(phi_1), P(phi_2) rows");
  sweep->add_flag("--amplitudes", sweep_flags.amplitudes, "add ansatz amplitude columns");
  sweep->add_option("--grid", sweep_flags.grid, "phase grid size");

  std::string kind = "relative";
  std::size_t grid = kDefaultPhaseGrid;
  std::string output;
  auto* phase = app.add_subcommand("phase-dist", "phase distribution of the steady state");
  flags.attach(phase);
  phase->add_option("--kind", kind, "relative, single1 or single2")
      ->check(CLI::IsMember({"relative", "single1", "single2"}));
  phase->add_option("--grid", grid, "grid size")->check(CLI::Range(3, 1 << 20));
  phase->add_option("--output,-o", output, "CSV path (default stdout)");

  int subspace = 1;
  auto* modes = app.add_subcommand("modes", "normal modes of a phonon manifold");
  flags.attach(modes);
  modes->add_option("--subspace,-N", subspace, "phonon number 0, 1 or 2")->check(CLI::Range(0, 2));

  auto* amplitudes = app.add_subcommand("amplitudes", "weak-drive ansatz amplitudes");
  flags.attach(amplitudes);

  int order = 2;
  bool closed_form = false;
  auto* perturb = app.add_subcommand("perturb", "perturbative relative phase distribution");
  flags.attach(perturb);
  perturb->add_option("--order", order, "expansion order")
      ->check(CLI::Range(1, kMaxPerturbativeOrder));
  perturb->add_flag("--closed-form", closed_form, "compare the closed-form recursion block sums");
  perturb->add_option("--grid", grid, "grid size")->check(CLI::Range(3, 1 << 20));
  perturb->add_option("--output,-o", output, "CSV path for P(varphi)");

  std::string figure;
  std::string outdir = "figures";
  auto* reproduce = app.add_subcommand("reproduce", "write the data behind a figure");
  reproduce->add_option("figure", figure, "fig2a, fig2b, fig3, fig4, fig5 or figS1")->required();
  reproduce->add_option("--outdir,-d", outdir, "output directory");
  reproduce->add_option("--threads", flags.threads, "worker threads (0: all cores)");

  ConvergenceOptions convergence;
  auto* converge = app.add_subcommand("converge", "truncation convergence ladder");
  flags.attach(converge);
  converge->add_option("--step", convergence.step, "cutoff increment");
  converge->add_option("--start", convergence.start, "first cutoff");
  converge->add_option("--cap", convergence.hard_cap, "largest cutoff");
  converge->add_option("--threshold", convergence.threshold, "allowed change");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (steady->parsed()) return cmd_steady(flags, out);
    if (sweep->parsed()) return cmd_sweep(flags, sweep_flags, out);
    if (phase->parsed()) return cmd_phase(flags, kind, grid, output, out);
    if (modes->parsed()) return cmd_modes(flags, subspace, out);
    if (amplitudes->parsed()) return cmd_amplitudes(flags, out);
    if (perturb->parsed()) return cmd_perturb(flags, order, closed_form, grid, output, out, err);
    if (reproduce->parsed()) return cmd_reproduce(figure, outdir, flags, out);
    if (converge->parsed()) return cmd_converge(flags, convergence, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace vdpsync
