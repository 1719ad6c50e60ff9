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
#include <optional>
#include <span>
#include <vector>

#include "vdpsync/density_matrix.hpp"
#include "vdpsync/liouvillian.hpp"

namespace vdpsync {

inline constexpr std::size_t kDefaultPhaseGrid = 256;

enum class PhaseKind { Single1, Single2, Relative };

/// Phase density sampled on phi_j = 2 pi j / N, j = 0..N-1.
struct PhaseDistribution {
  PhaseKind kind = PhaseKind::Relative;
  std::vector<double> grid;
  std::vector<double> values;

  double spacing() const;
  double integral() const;  // Riemann sum; 1 for a normalized density
  std::size_t argmax() const;
};

std::vector<double> phase_grid(std::size_t grid_size);

DenseMatrix partial_trace(const DensityMatrix& rho, Mode keep);

// P(phi) = (1/2pi) <phi| rho_red |phi>, |phi> = sum_n e^{i n phi} |n>.
PhaseDistribution single_phase_distribution(const DensityMatrix& rho, Mode which,
                                            std::size_t grid_size = kDefaultPhaseGrid);

// C_p = sum_{n,m} <n, m+p| rho |n+p, m> for p = 1..max(n_max_1, n_max_2).
// Entry p-1 holds C_p.
std::vector<Complex> relative_phase_coefficients(const DenseMatrix& rho, const Truncation& dims);

// P(varphi) = 1/2pi + (1/pi) Re sum_p e^{-i p varphi} C_p with
// varphi = phi_2 - phi_1.
PhaseDistribution relative_phase_from_coefficients(std::span<const Complex> coefficients,
                                                   std::size_t grid_size = kDefaultPhaseGrid);

PhaseDistribution relative_phase_distribution(const DensityMatrix& rho,
                                              std::size_t grid_size = kDefaultPhaseGrid);

Complex expectation(const DensityMatrix& rho, const FockOperator& op);

struct SyncMeasure {
  Complex value{0.0, 0.0};
  bool defined = false;  // false when the normalizing occupation vanishes

  double magnitude() const { return defined ? std::abs(value) : 0.0; }
  double phase() const;  // arg(value) in [0, 2pi); 0 when undefined
};

struct SyncReport {
  SyncMeasure s1;  // <a1^dag> / sqrt(<n1>)
  SyncMeasure s2;  // <a2^dag> / sqrt(<n2>)
  SyncMeasure s3;  // <a1^dag a2> / sqrt(<n1><n2>)
  double n1 = 0.0;
  double n2 = 0.0;
  std::optional<SystemParams> params;
};

SyncReport sync_measures(const DensityMatrix& rho);

// Strict local maxima of a periodic sequence. A flat run counts once, at its
// first index, when it is higher than both neighbouring values.
std::vector<std::size_t> periodic_local_maxima(std::span<const double> values);
// Same rules on an open interval; endpoints are never reported.
std::vector<std::size_t> interior_local_maxima(std::span<const double> values);
std::vector<std::size_t> interior_local_minima(std::span<const double> values);

}  // namespace vdpsync
