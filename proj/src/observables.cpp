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

#include "vdpsync/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vdpsync/error.hpp"

namespace vdpsync {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kImaginaryResidue = 1e-12;
constexpr double kZeroOccupation = 1e-14;

void require_grid(std::size_t grid_size) {
  if (grid_size < 3) throw Error(ErrorCode::InvalidArgument, "phase grid needs at least 3 points");
}

double real_part_checked(Complex z) {
  if (std::abs(z.imag()) > kImaginaryResidue) {
    throw Error(ErrorCode::InvalidState,
                "phase density has imaginary residue " + std::to_string(z.imag()));
  }
  return z.real();
}

// Runs of equal values, reported by their first index. `periodic` closes the
// sequence into a ring; otherwise the two ends never qualify.
template <typename Better>
std::vector<std::size_t> extrema(std::span<const double> v, bool periodic, Better better) {
  const std::size_t n = v.size();
  std::vector<std::size_t> found;
  if (n < 3) return found;
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) return found;

  // For a ring, start scanning just after a position where the value changes
  // so that no flat run straddles the scan origin.
  std::size_t origin = 0;
  if (periodic) {
    while (v[origin] == v[(origin + n - 1) % n]) ++origin;
  }
  std::size_t i = 0;
  while (i < n) {
    const std::size_t start = (origin + i) % n;
    std::size_t len = 1;
    while (i + len < n && v[(origin + i + len) % n] == v[start]) ++len;
    const std::size_t stop = (origin + i + len - 1) % n;
    if (periodic) {
      const double before = v[(start + n - 1) % n];
      const double after = v[(stop + 1) % n];
      if (better(v[start], before) && better(v[start], after)) {
        // First index in phi order; a run may wrap past 2pi.
        found.push_back(stop < start ? std::size_t(0) : start);
      }
    } else if (start > 0 && stop + 1 < n) {
      if (better(v[start], v[start - 1]) && better(v[start], v[stop + 1])) found.push_back(start);
    }
    i += len;
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

double PhaseDistribution::spacing() const {
  return grid.empty() ? 0.0 : kTwoPi / double(grid.size());
}

double PhaseDistribution::integral() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * spacing();
}

std::size_t PhaseDistribution::argmax() const {
  return std::size_t(std::max_element(values.begin(), values.end()) - values.begin());
}

std::vector<double> phase_grid(std::size_t grid_size) {
  require_grid(grid_size);
  std::vector<double> grid(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) grid[j] = kTwoPi * double(j) / double(grid_size);
  return grid;
}

DenseMatrix partial_trace(const DensityMatrix& rho, Mode keep) {
  const Truncation& dims = rho.dims();
  const Index keep_levels = dims.levels(keep);
  const Mode other = keep == Mode::One ? Mode::Two : Mode::One;
  DenseMatrix reduced = DenseMatrix::Zero(keep_levels, keep_levels);
  for (int a = 0; a < keep_levels; ++a) {
    for (int b = 0; b < keep_levels; ++b) {
      Complex sum = 0.0;
      for (int k = 0; k < dims.levels(other); ++k) {
        sum += keep == Mode::One ? rho.element(a, k, b, k) : rho.element(k, a, k, b);
      }
      reduced(a, b) = sum;
    }
  }
  return reduced;
}

PhaseDistribution single_phase_distribution(const DensityMatrix& rho, Mode which,
                                            std::size_t grid_size) {
  const DenseMatrix reduced = partial_trace(rho, which);
  PhaseDistribution dist;
  dist.kind = which == Mode::One ? PhaseKind::Single1 : PhaseKind::Single2;
  dist.grid = phase_grid(grid_size);
  dist.values.resize(grid_size);
  const Index levels = reduced.rows();
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double phi = dist.grid[j];
    Complex sum = 0.0;
    for (Index n = 0; n < levels; ++n) {
      for (Index m = 0; m < levels; ++m) {
        sum += std::polar(1.0, double(m - n) * phi) * reduced(n, m);
      }
    }
    dist.values[j] = real_part_checked(sum) / kTwoPi;
  }
  return dist;
}

std::vector<Complex> relative_phase_coefficients(const DenseMatrix& rho, const Truncation& dims) {
  if (rho.rows() != dims.dim() || rho.cols() != dims.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match truncation");
  }
  const int p_max = std::max(dims.n_max_1, dims.n_max_2);
  std::vector<Complex> coefficients(p_max, Complex(0.0));
  for (int p = 1; p <= p_max; ++p) {
    Complex sum = 0.0;
    for (int n = 0; n + p <= dims.n_max_1; ++n) {
      for (int m = 0; m + p <= dims.n_max_2; ++m) {
        sum += rho(dims.index(n, m + p), dims.index(n + p, m));
      }
    }
    coefficients[p - 1] = sum;
  }
  return coefficients;
}

PhaseDistribution relative_phase_from_coefficients(std::span<const Complex> coefficients,
                                                   std::size_t grid_size) {
  PhaseDistribution dist;
  dist.kind = PhaseKind::Relative;
  dist.grid = phase_grid(grid_size);
  dist.values.assign(grid_size, 1.0 / kTwoPi);
  for (std::size_t j = 0; j < grid_size; ++j) {
    Complex sum = 0.0;
    for (std::size_t p = 1; p <= coefficients.size(); ++p) {
      sum += std::polar(1.0, -double(p) * dist.grid[j]) * coefficients[p - 1];
    }
    dist.values[j] += sum.real() / std::numbers::pi;
  }
  return dist;
}

PhaseDistribution relative_phase_distribution(const DensityMatrix& rho, std::size_t grid_size) {
  const auto coefficients = relative_phase_coefficients(rho.matrix(), rho.dims());
  return relative_phase_from_coefficients(coefficients, grid_size);
}

Complex expectation(const DensityMatrix& rho, const FockOperator& op) {
  if (!(rho.dims() == op.dims())) {
    throw Error(ErrorCode::DimensionMismatch, "operator and state use different truncations");
  }
  // Tr(rho X) = sum_ij rho_ij X_ji
  Complex sum = 0.0;
  const SparseMatrix& x = op.matrix();
  for (Index col = 0; col < x.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(x, col); it; ++it) {
      sum += rho.matrix()(it.col(), it.row()) * it.value();
    }
  }
  return sum;
}

double SyncMeasure::phase() const {
  if (!defined) return 0.0;
  double angle = std::arg(value);
  if (angle < 0.0) angle += kTwoPi;
  return angle;
}

SyncReport sync_measures(const DensityMatrix& rho) {
  const Truncation& dims = rho.dims();
  const FockOperator a1 = annihilation(Mode::One, dims);
  const FockOperator a2 = annihilation(Mode::Two, dims);
  SyncReport report;
  report.n1 = expectation(rho, number_operator(Mode::One, dims)).real();
  report.n2 = expectation(rho, number_operator(Mode::Two, dims)).real();
  const bool occupied1 = report.n1 > kZeroOccupation;
  const bool occupied2 = report.n2 > kZeroOccupation;
  if (occupied1) report.s1 = {expectation(rho, a1.adjoint()) / std::sqrt(report.n1), true};
  if (occupied2) report.s2 = {expectation(rho, a2.adjoint()) / std::sqrt(report.n2), true};
  if (occupied1 && occupied2) {
    report.s3 = {expectation(rho, a1.adjoint() * a2) / std::sqrt(report.n1 * report.n2), true};
  }
  return report;
}

std::vector<std::size_t> periodic_local_maxima(std::span<const double> values) {
  return extrema(values, true, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> interior_local_maxima(std::span<const double> values) {
  return extrema(values, false, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> interior_local_minima(std::span<const double> values) {
  return extrema(values, false, [](double a, double b) { return a < b; });
}

}  // namespace vdpsync
