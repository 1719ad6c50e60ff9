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

#include "vdpsync/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseLU>

#include "vdpsync/error.hpp"
#include "vdpsync/steady_state.hpp"

namespace vdpsync {

namespace {

constexpr double kResonanceFloor = 1e-14;

void require_nonlinear_damping(const SystemParams& params) {
  if (!(params.gamma2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma2 = 0 leaves the gain-only ladder without a normalizable steady state");
  }
}

SystemParams unperturbed(const SystemParams& params) {
  SystemParams p = params;
  p.coupling = 0.0;
  p.drive = 0.0;
  return p;
}

}  // namespace

Complex CoherenceBlock::at(int n, int m) const {
  if (n < 0 || m < 0 || n >= entries.rows() || m >= entries.cols()) return 0.0;
  return entries(n, m);
}

Complex CoherenceBlock::sum() const { return entries.sum(); }

CoherenceBlock coherence_block(const DenseMatrix& rho, const Truncation& dims, int order) {
  if (rho.rows() != dims.dim() || rho.cols() != dims.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match truncation");
  }
  if (order < 0 || order > std::min(dims.n_max_1, dims.n_max_2)) {
    throw Error(ErrorCode::InvalidArgument, "coherence order outside the truncation");
  }
  CoherenceBlock block;
  block.order = order;
  block.entries.resize(dims.n_max_1 - order + 1, dims.n_max_2 - order + 1);
  for (int n = 0; n + order <= dims.n_max_1; ++n) {
    for (int m = 0; m + order <= dims.n_max_2; ++m) {
      block.entries(n, m) = rho(dims.index(n, m + order), dims.index(n + order, m));
    }
  }
  return block;
}

double decay_rate(const SystemParams& params, int n, int m, int order) {
  const int p = order;
  const double gain = params.gamma1 * double(n + m + p + 2);
  const double loss = 0.5 * params.gamma2 *
                      double(n * (n - 1) + m * (m - 1) + (n + p) * (n + p - 1) +
                             (m + p) * (m + p - 1));
  return gain + loss;
}

double printed_decay_rate(const SystemParams& params, int n, int m, int order) {
  const int p = order;
  return params.gamma1 * double(n + m + p + 2) +
         params.gamma2 * double(n * (n - 1) + m * (m - 1) + (n + p) * (n + p - 1) +
                                (m + p) * (m + p - 1));
}

Complex recursion_eigenvalue(const SystemParams& params, int n, int m, int order) {
  return {-decay_rate(params, n, m, order), (params.delta1 - params.delta2) * double(order)};
}

RecursionCoefficients recursion_coefficients(const SystemParams& params,
                                             const CoherenceBlock& lower, int n, int m) {
  const int p = lower.order + 1;
  const Complex i(0.0, 1.0);
  RecursionCoefficients c;
  c.gamma = decay_rate(params, n, m, p);
  c.lambda = recursion_eigenvalue(params, n, m, p);
  c.nu1 = i * params.drive *
          (std::sqrt(double(n + 1)) * lower.at(n + 1, m) - std::sqrt(double(n + p)) * lower.at(n, m));
  c.nu2 = i * params.coupling *
          (std::sqrt(double((n + 1) * (m + p))) * lower.at(n + 1, m) -
           std::sqrt(double((n + p) * (m + 1))) * lower.at(n, m + 1));
  return c;
}

CoherenceBlock closed_form_correction(const SystemParams& params, const CoherenceBlock& lower) {
  params.validate();
  const int p = lower.order + 1;
  const Truncation& dims = params.trunc;
  if (p > std::min(dims.n_max_1, dims.n_max_2)) {
    throw Error(ErrorCode::InvalidArgument, "coherence order outside the truncation");
  }
  CoherenceBlock block;
  block.order = p;
  block.entries = DenseMatrix::Zero(dims.n_max_1 - p + 1, dims.n_max_2 - p + 1);
  for (int n = 0; n < block.entries.rows(); ++n) {
    for (int m = 0; m < block.entries.cols(); ++m) {
      const RecursionCoefficients c = recursion_coefficients(params, lower, n, m);
      if (std::abs(c.lambda) < kResonanceFloor) {
        std::ostringstream msg;
        msg << "lambda(" << n << "," << m << "," << p << ") vanishes";
        throw Error(ErrorCode::Resonance, msg.str());
      }
      block.entries(n, m) = (c.nu1 + c.nu2) / c.lambda;
    }
  }
  return block;
}

CoherenceBlock zeroth_order(const SystemParams& params) {
  params.validate();
  require_nonlinear_damping(params);
  const auto solution = solve_steady_state(build_liouvillian(unperturbed(params)));
  return coherence_block(solution.rho.matrix(), params.trunc, 0);
}

PerturbationSeries::PerturbationSeries(const SystemParams& params, int max_order)
    : params_(params), max_order_(max_order) {
  params_.validate();
  require_nonlinear_damping(params_);
  if (max_order < 0 || max_order > kMaxPerturbativeOrder) {
    throw Error(ErrorCode::InvalidArgument,
                "perturbative order must be between 0 and " + std::to_string(kMaxPerturbativeOrder));
  }
  const Truncation& dims = params_.trunc;
  const Index dim = dims.dim();

  const SparseMatrix l0 = build_liouvillian(unperturbed(params_)).matrix();
  const SparseMatrix l_coupling = hamiltonian_superoperator(coupling_operator(dims));
  const SparseMatrix l_drive = hamiltonian_superoperator(drive_operator(dims));

  const SparseMatrix system = trace_constrained(l0, dim, 0);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateSteadyState, "unperturbed generator is singular");
  }
  auto solve = [&](StateVector rhs) {
    StateVector x = lu.solve(rhs);
    x += lu.solve(StateVector(rhs - system * x));
    DenseMatrix rho = unvectorize(x, dim);
    return DenseMatrix(0.5 * (rho + rho.adjoint()));
  };

  terms_.assign(max_order + 1, {});
  for (int j = 0; j <= max_order; ++j) terms_[j].resize(max_order + 1 - j);

  StateVector source = StateVector::Zero(dim * dim);
  source(0) = 1.0;
  terms_[0][0] = solve(source);
  for (int order = 1; order <= max_order; ++order) {
    for (int j = 0; j <= order; ++j) {
      const int k = order - j;
      StateVector rhs = StateVector::Zero(dim * dim);
      if (j > 0) rhs -= l_coupling * vectorize(terms_[j - 1][k]);
      if (k > 0) rhs -= l_drive * vectorize(terms_[j][k - 1]);
      rhs(0) = 0.0;  // corrections are traceless
      terms_[j][k] = solve(rhs);
    }
  }
}

const DenseMatrix& PerturbationSeries::term(int coupling_power, int drive_power) const {
  if (coupling_power < 0 || drive_power < 0 || coupling_power + drive_power > max_order_) {
    throw Error(ErrorCode::InvalidArgument, "series term beyond the computed order");
  }
  return terms_[coupling_power][drive_power];
}

DenseMatrix PerturbationSeries::correction(int order) const {
  if (order < 0 || order > max_order_) {
    throw Error(ErrorCode::InvalidArgument, "series order beyond the computed order");
  }
  const Index dim = params_.trunc.dim();
  DenseMatrix sum = DenseMatrix::Zero(dim, dim);
  for (int j = 0; j <= order; ++j) {
    const int k = order - j;
    sum += std::pow(params_.coupling, j) * std::pow(params_.drive, k) * terms_[j][k];
  }
  return sum;
}

DenseMatrix PerturbationSeries::partial_sum(int order) const {
  DenseMatrix sum = correction(0);
  for (int q = 1; q <= order; ++q) sum += correction(q);
  return sum;
}

FourierContent fourier_content(const PhaseDistribution& dist, int max_harmonic) {
  FourierContent content;
  content.cos.assign(max_harmonic + 1, 0.0);
  content.sin.assign(max_harmonic + 1, 0.0);
  const double dphi = dist.spacing();
  for (int h = 0; h <= max_harmonic; ++h) {
    for (std::size_t j = 0; j < dist.values.size(); ++j) {
      content.cos[h] += dist.values[j] * std::cos(h * dist.grid[j]) * dphi;
      content.sin[h] += dist.values[j] * std::sin(h * dist.grid[j]) * dphi;
    }
  }
  return content;
}

std::optional<std::string> regime_warning(const SystemParams& params) {
  const double limit = 0.1 * (params.gamma1 + params.gamma2);
  if (params.coupling <= limit && params.drive <= limit) return std::nullopt;
  std::ostringstream msg;
  msg << "V = " << params.coupling << ", E = " << params.drive
      << " exceed 0.1 (gamma1 + gamma2) = " << limit << "; the expansion may not be accurate";
  return msg.str();
}

PhaseDistribution order_phase_distribution(const PerturbationSeries& series, int order,
                                           std::size_t grid_size) {
  const auto coefficients =
      relative_phase_coefficients(series.correction(order), series.params().trunc);
  PhaseDistribution dist = relative_phase_from_coefficients(coefficients, grid_size);
  if (order > 0) {
    for (double& v : dist.values) v -= 1.0 / (2.0 * std::numbers::pi);
  }
  return dist;
}

PerturbativePhase perturbative_phase_distribution(const SystemParams& params, int max_order,
                                                  std::size_t grid_size) {
  if (max_order < 1) throw Error(ErrorCode::InvalidArgument, "perturbative order must be >= 1");
  const PerturbationSeries series(params, max_order);
  PerturbativePhase result;
  const auto coefficients =
      relative_phase_coefficients(series.partial_sum(max_order), params.trunc);
  result.distribution = relative_phase_from_coefficients(coefficients, grid_size);
  result.sin1 = fourier_content(order_phase_distribution(series, 1, grid_size), 1).sin[1];
  if (max_order >= 2) {
    result.cos2 = fourier_content(order_phase_distribution(series, 2, grid_size), 2).cos[2];
  }
  result.warning = regime_warning(params);
  return result;
}

PhaseCoefficients phase_coefficients(const SystemParams& params) {
  const PerturbationSeries series(params, 2);
  const Truncation& dims = params.trunc;
  auto harmonic = [&](int j, int k, int p) {
    return relative_phase_coefficients(series.term(j, k), dims)[p - 1];
  };
  // (1/pi) Re[e^{-i p phi} C_p]: sin(phi) carries Im C_1, cos(2 phi) carries Re C_2.
  PhaseCoefficients c;
  c.c0 = harmonic(1, 0, 1).imag();
  c.c1 = harmonic(0, 1, 1).imag();
  c.c2 = harmonic(2, 0, 2).real();
  c.c3 = harmonic(1, 1, 2).real();
  c.c4 = harmonic(0, 2, 2).real();
  return c;
}

PhaseCoefficients fit_phase_coefficients(const SystemParams& params,
                                                   std::span<const double> couplings,
                                                   std::span<const double> drives,
                                                   std::size_t grid_size) {
  const Index points = Index(couplings.size() * drives.size());
  if (points < 3) throw Error(ErrorCode::InvalidArgument, "design grid needs at least 3 points");
  Eigen::MatrixXd first(points, 2), second(points, 3);
  Eigen::VectorXd sin1(points), cos2(points);
  Index row = 0;
  for (double v : couplings) {
    for (double e : drives) {
      SystemParams p = params;
      p.coupling = v;
      p.drive = e;
      const PerturbationSeries series(p, 2);
      sin1(row) = fourier_content(order_phase_distribution(series, 1, grid_size), 1).sin[1];
      cos2(row) = fourier_content(order_phase_distribution(series, 2, grid_size), 2).cos[2];
      first.row(row) << v, e;
      second.row(row) << v * v, e * v, e * e;
      ++row;
    }
  }
  const Eigen::VectorXd linear = first.colPivHouseholderQr().solve(sin1);
  const Eigen::VectorXd quadratic = second.colPivHouseholderQr().solve(cos2);
  return {linear(0), linear(1), quadratic(0), quadratic(1), quadratic(2)};
}

}  // namespace vdpsync
