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

#include "vdpsync/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/SparseLU>

#include "vdpsync/error.hpp"
#include "vdpsync/observables.hpp"

namespace vdpsync {

namespace {

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

}  // namespace

SparseMatrix trace_constrained(const SparseMatrix& generator, Index dim, Index row) {
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(generator.nonZeros() + dim);
  for (Index col = 0; col < generator.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(generator, col); it; ++it) {
      if (it.row() != row) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Index k = 0; k < dim; ++k) entries.emplace_back(row, k * dim + k, 1.0);
  SparseMatrix system(generator.rows(), generator.cols());
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();
  return system;
}

namespace {

StateVector refine(const SparseLU& lu, const SparseMatrix& system, const StateVector& rhs,
                   double tolerance, int max_steps, int& steps) {
  StateVector x = lu.solve(rhs);
  // A few steps of iterative refinement recover digits lost to pivoting.
  for (steps = 0; steps < max_steps; ++steps) {
    const StateVector r = rhs - system * x;
    if (r.norm() < 0.01 * tolerance) break;
    x += lu.solve(r);
  }
  return x;
}

// Row `row` of the generator as a dense vector.
StateVector generator_row(const SparseMatrix& generator, Index row) {
  StateVector v = StateVector::Zero(generator.cols());
  for (Index col = 0; col < generator.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(generator, col); it; ++it) {
      if (it.row() == row) v(col) = it.value();
    }
  }
  return v;
}

StateVector trace_functional(Index dim) {
  StateVector t = StateVector::Zero(dim * dim);
  for (Index k = 0; k < dim; ++k) t(k * dim + k) = 1.0;
  return t;
}

/// Solves the system with the trace functional in row `moved` instead of row
/// `row` by a rank-2 Woodbury update of the existing factorization:
///   B = A + U W^T,  U = [e_row, e_moved],  W = [g_row - t, t - g_moved].
/// `x_row` is A^{-1} e_row, i.e. the primary solution.
StateVector solve_moved_trace_row(const SparseLU& lu, const SparseMatrix& generator, Index dim,
                                  Index row, Index moved, const StateVector& x_row) {
  const StateVector t = trace_functional(dim);
  const StateVector w0 = generator_row(generator, row) - t;
  const StateVector w1 = t - generator_row(generator, moved);
  StateVector e_moved = StateVector::Zero(generator.rows());
  e_moved(moved) = 1.0;
  const StateVector z = lu.solve(e_moved);

  auto bilinear = [](const StateVector& a, const StateVector& b) { return a.cwiseProduct(b).sum(); };
  Eigen::Matrix2cd c;
  c << 1.0 + bilinear(w0, x_row), bilinear(w0, z),  //
      bilinear(w1, x_row), 1.0 + bilinear(w1, z);
  const Eigen::Vector2cd wz(bilinear(w0, z), bilinear(w1, z));
  const Eigen::Vector2cd y = c.fullPivLu().solve(wz);
  return z - y(0) * x_row - y(1) * z;
}

DenseMatrix to_state(const StateVector& x, Index dim) {
  DenseMatrix rho = unvectorize(x, dim);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

SteadyStateSolution solve_steady_state(const Liouvillian& liouvillian,
                                       const SteadyStateOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "steady-state tolerance must be positive");
  }
  const Index dim = liouvillian.hilbert_dim();
  const SparseMatrix& generator = liouvillian.matrix();

  const SparseMatrix system = trace_constrained(generator, dim, 0);
  SparseLU lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateSteadyState,
                "trace-constrained generator is singular: " + lu.lastErrorMessage());
  }
  StateVector rhs = StateVector::Zero(system.rows());
  rhs(0) = 1.0;
  int refinement_steps = 0;
  const StateVector x = refine(lu, system, rhs, options.tolerance, options.max_refinement_steps,
                               refinement_steps);
  if (!x.allFinite()) {
    throw Error(ErrorCode::SolverFailure, "steady-state solve produced non-finite entries");
  }
  const DenseMatrix rho = to_state(x, dim);
  const double residual = (generator * vectorize(rho)).norm();

  // Uniqueness: the trace row moved to the last population must give the
  // same state. A second null vector would make the two answers differ.
  const Index last_population = dim * dim - 1;
  const StateVector moved = solve_moved_trace_row(lu, generator, dim, 0, last_population, x);
  const double distance =
      moved.allFinite() ? trace_distance(rho, to_state(moved, dim)) : std::numeric_limits<double>::infinity();
  if (!(distance < options.uniqueness_tolerance)) {
    std::ostringstream msg;
    msg << "two trace-constrained solves disagree (trace distance " << distance
        << "); the null space of the generator is not one-dimensional";
    throw Error(ErrorCode::DegenerateSteadyState, msg.str());
  }

  if (!(residual < options.tolerance)) {
    std::ostringstream msg;
    msg << "residual " << residual << " exceeds tolerance " << options.tolerance;
    throw Error(ErrorCode::SolverFailure, msg.str());
  }

  const double min_eig = diagnose(rho).min_eigenvalue;
  if (min_eig < -options.positivity_tolerance) {
    std::ostringstream msg;
    msg << "steady state has eigenvalue " << min_eig
        << "; check the truncation or the parameters";
    throw Error(ErrorCode::PositivityViolation, msg.str());
  }

  return SteadyStateSolution{DensityMatrix(liouvillian.dims(), rho),
                             residual,
                             "sparse-lu/trace-row",
                             refinement_steps,
                             Index(lu.nnzL() + lu.nnzU()),
                             distance};
}

SteadyStateSolution solve_steady_state(const Liouvillian& liouvillian, double tolerance) {
  SteadyStateOptions options;
  options.tolerance = tolerance;
  return solve_steady_state(liouvillian, options);
}

double spectral_bound(const Liouvillian& liouvillian, int iterations) {
  const SparseMatrix& l = liouvillian.matrix();
  if (l.nonZeros() == 0) return 0.0;
  // Deterministic start vector with support on every component.
  StateVector v(l.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(1.0 + 0.01 * double(i % 7), 0.1 * double(i % 3));
  v.normalize();
  double sigma = 0.0;
  for (int k = 0; k < iterations; ++k) {
    StateVector w = l.adjoint() * (l * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    sigma = std::sqrt(norm);
    v = w / norm;
  }
  return sigma;
}

double default_time_step(const Liouvillian& liouvillian) {
  const double bound = spectral_bound(liouvillian);
  return bound > 0.0 ? 0.5 / bound : 0.0;
}

EvolutionResult evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final,
                       std::optional<double> dt) {
  if (!(rho0.dims() == liouvillian.dims())) {
    throw Error(ErrorCode::DimensionMismatch, "initial state truncation differs from generator");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw Error(ErrorCode::InvalidArgument, "final time must be finite and non-negative");
  }
  double step = dt ? *dt : default_time_step(liouvillian);
  if (dt && !(*dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");

  long steps = 0;
  if (t_final > 0.0) {
    steps = step > 0.0 ? long(std::ceil(t_final / step)) : 1;
    step = t_final / double(steps);
  }

  const SparseMatrix& l = liouvillian.matrix();
  const Index dim = liouvillian.hilbert_dim();
  StateVector y = vectorize(rho0.matrix());
  const Complex trace0 = rho0.matrix().trace();
  auto trace_of = [dim](const StateVector& v) {
    Complex t = 0.0;
    for (Index k = 0; k < dim; ++k) t += v(k * dim + k);
    return t;
  };

  StateVector k1, k2, k3, k4;
  double drift = 0.0;
  for (long s = 0; s < steps; ++s) {
    k1 = l * y;
    k2 = l * (y + 0.5 * step * k1);
    k3 = l * (y + 0.5 * step * k2);
    k4 = l * (y + step * k3);
    y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s & 255) == 255 || s + 1 == steps) {
      drift = std::max(drift, std::abs(trace_of(y) - trace0));
      if (!(drift <= 1e-6) || !y.allFinite()) {
        std::ostringstream msg;
        msg << "RK4 trace drift " << drift << " after " << s + 1 << " steps of " << step;
        throw Error(ErrorCode::StepSize, msg.str());
      }
    }
  }

  DenseMatrix rho = unvectorize(y, dim);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return EvolutionResult{DensityMatrix(liouvillian.dims(), std::move(rho)), step, steps, drift};
}

std::vector<double> convergence_observables(const DensityMatrix& rho, const ObservableSet& set) {
  const SyncReport report = sync_measures(rho);
  std::vector<double> values;
  if (set.occupations) {
    values.push_back(report.n1);
    values.push_back(report.n2);
  }
  if (set.s1) values.push_back(report.s1.magnitude());
  if (set.s2) values.push_back(report.s2.magnitude());
  if (set.s3) values.push_back(report.s3.magnitude());
  return values;
}

ConvergenceReport check_convergence(const SystemParams& params, const ObservableSet& set,
                                    const ConvergenceOptions& options) {
  params.validate();
  if (options.step < 1) throw Error(ErrorCode::InvalidArgument, "convergence step must be >= 1");
  if (options.start < 1) throw Error(ErrorCode::InvalidTruncation, "ladder must start at n_max >= 1");

  std::map<int, std::vector<double>> cache;
  auto observe = [&](int n_max) -> const std::vector<double>& {
    auto it = cache.find(n_max);
    if (it != cache.end()) return it->second;
    SystemParams p = params;
    p.trunc = Truncation::uniform(n_max);
    const auto solution = solve_steady_state(build_liouvillian(p));
    return cache.emplace(n_max, convergence_observables(solution.rho, set)).first->second;
  };

  ConvergenceReport report;
  for (int n = options.start; n + options.step <= options.hard_cap; ++n) {
    const std::vector<double> lower = observe(n);
    const std::vector<double>& upper = observe(n + options.step);
    double change = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      change = std::max(change, std::abs(upper[i] - lower[i]));
    }
    report.history.push_back({n, lower, change});
    if (change < options.threshold) {
      report.n_max = n;
      return report;
    }
  }
  std::ostringstream msg;
  msg << "observables still move by more than " << options.threshold << " at the cap n_max = "
      << options.hard_cap;
  throw Error(ErrorCode::TruncationFailure, msg.str());
}

}  // namespace vdpsync
