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

#include <optional>
#include <string>
#include <vector>

#include "vdpsync/density_matrix.hpp"
#include "vdpsync/liouvillian.hpp"

namespace vdpsync {

// L with row `row` replaced by the trace functional sum_k rho_kk, so that
// solving against e_row imposes Tr rho = 1 (or Tr rho = 0 for a zero entry).
SparseMatrix trace_constrained(const SparseMatrix& generator, Index dim, Index row);

struct SteadyStateOptions {
  double tolerance = 1e-10;             // bound on ||L rho||_F
  double uniqueness_tolerance = 1e-8;   // trace distance between the two solves
  double positivity_tolerance = 1e-10;  // allowed negative eigenvalue
  int max_refinement_steps = 3;
};

struct SteadyStateSolution {
  DensityMatrix rho;
  double residual = 0.0;
  std::string method;
  int refinement_steps = 0;
  Index factor_nonzeros = 0;
  double uniqueness_distance = 0.0;
};

/// Solves L rho = 0, Tr rho = 1 by replacing the first row of L with the
/// trace functional and factorizing the sparse system (SparseLU). A second
/// solve with the trace row moved to the last population row must land on the
/// same state, otherwise the null space is taken to be degenerate.
SteadyStateSolution solve_steady_state(const Liouvillian& liouvillian,
                                       const SteadyStateOptions& options = {});
SteadyStateSolution solve_steady_state(const Liouvillian& liouvillian, double tolerance);

struct EvolutionResult {
  DensityMatrix rho;
  double dt = 0.0;
  long steps = 0;
  double trace_drift = 0.0;  // max |Tr rho(t) - Tr rho0| seen during the run
};

// Power-iteration estimate of the largest singular value of L.
double spectral_bound(const Liouvillian& liouvillian, int iterations = 40);
// 0.5 / spectral_bound, the default RK4 step.
double default_time_step(const Liouvillian& liouvillian);

/// Fixed-step RK4 on the vectorized master equation. Throws StepSize when
/// the trace drifts by more than 1e-6 or the state stops being finite.
EvolutionResult evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final,
                       std::optional<double> dt = std::nullopt);

struct ObservableSet {
  bool occupations = true;
  bool s1 = true;
  bool s2 = true;
  bool s3 = true;
};

struct ConvergenceStep {
  int n_max = 0;
  std::vector<double> values;
  double max_change = 0.0;  // against n_max + step
};

struct ConvergenceReport {
  int n_max = 0;
  std::vector<ConvergenceStep> history;
};

struct ConvergenceOptions {
  int step = 1;
  int start = 1;
  int hard_cap = 12;
  double threshold = 1e-4;
};

// Observable values used by the convergence ladder, in ObservableSet order.
std::vector<double> convergence_observables(const DensityMatrix& rho, const ObservableSet& set);

/// Smallest uniform cutoff n_max at which every requested observable moves by
/// less than the threshold when the cutoff grows to n_max + step.
ConvergenceReport check_convergence(const SystemParams& params, const ObservableSet& set = {},
                                    const ConvergenceOptions& options = {});

}  // namespace vdpsync
