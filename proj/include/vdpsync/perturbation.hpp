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
#include <span>
#include <string>
#include <vector>

#include "vdpsync/liouvillian.hpp"
#include "vdpsync/observables.hpp"

namespace vdpsync {

/// Coherences of relative order p: entry (n, m) is <n, m+p| rho |n+p, m>
/// for n <= n_max_1 - p, m <= n_max_2 - p.
struct CoherenceBlock {
  int order = 0;
  DenseMatrix entries;

  Complex at(int n, int m) const;  // zero outside the block
  Complex sum() const;
};

CoherenceBlock coherence_block(const DenseMatrix& rho, const Truncation& dims, int order);

// Diagonal decay rate of the coherence <n, m+p| rho |n+p, m> under the
// gain and two-phonon-loss dissipators.
double decay_rate(const SystemParams& params, int n, int m, int order);
// Same index pattern with the two-phonon term at full weight gamma2 rather
// than gamma2 / 2; kept for comparison with the Lindblad-consistent rate.
double printed_decay_rate(const SystemParams& params, int n, int m, int order);
// i (delta1 - delta2) p - Gamma
Complex recursion_eigenvalue(const SystemParams& params, int n, int m, int order);

struct RecursionCoefficients {
  Complex lambda;
  Complex nu1;  // drive source
  Complex nu2;  // coupling source
  double gamma = 0.0;
};

// Sources for entry (n, m) of order lower.order + 1, built from the block
// one order below.
RecursionCoefficients recursion_coefficients(const SystemParams& params,
                                             const CoherenceBlock& lower, int n, int m);

/// Closed-form diagonal recursion rho^(p)_{nm} = (nu1 + nu2) / lambda. It keeps
/// only the diagonal of the unperturbed generator in each block, so it is a
/// qualitative estimate; PerturbationSeries is the controlled expansion.
CoherenceBlock closed_form_correction(const SystemParams& params, const CoherenceBlock& lower);

// Diagonal (p = 0) block of the uncoupled, undriven steady state.
CoherenceBlock zeroth_order(const SystemParams& params);

/// Steady state expanded in powers of the coupling V and drive E:
///   rho = sum_{j,k} V^j E^k rho_{jk},
/// with rho_00 the product van der Pol state and every higher term solving
///   L0 rho_{jk} = -(L_V rho_{j-1,k} + L_E rho_{j,k-1}),  Tr rho_{jk} = 0.
class PerturbationSeries {
 public:
  PerturbationSeries(const SystemParams& params, int max_order);

  const SystemParams& params() const { return params_; }
  int max_order() const { return max_order_; }

  // rho_{jk}, the coefficient of V^j E^k.
  const DenseMatrix& term(int coupling_power, int drive_power) const;
  // sum_{j+k = order} V^j E^k rho_{jk}; orders 1.. are the corrections.
  DenseMatrix correction(int order) const;
  DenseMatrix partial_sum(int order) const;

 private:
  SystemParams params_;
  int max_order_;
  std::vector<std::vector<DenseMatrix>> terms_;  // terms_[j][k]
};

struct FourierContent {
  std::vector<double> cos;  // cos[h] = integral P cos(h phi), h = 0..H
  std::vector<double> sin;
};

FourierContent fourier_content(const PhaseDistribution& dist, int max_harmonic);

struct PerturbativePhase {
  PhaseDistribution distribution;
  double sin1 = 0.0;  // integral P sin(phi): (c0 V + c1 E) at first order
  double cos2 = 0.0;  // integral P cos(2 phi): (c2 V^2 + c3 E V + c4 E^2) at second order
  std::optional<std::string> warning;
};

inline constexpr int kMaxPerturbativeOrder = 3;

// Relative phase distribution of the series truncated at max_order.
PerturbativePhase perturbative_phase_distribution(const SystemParams& params, int max_order,
                                                  std::size_t grid_size = kDefaultPhaseGrid);
// Contribution of one exact order alone (no 1/2pi offset beyond order 0).
PhaseDistribution order_phase_distribution(const PerturbationSeries& series, int order,
                                           std::size_t grid_size = kDefaultPhaseGrid);

std::optional<std::string> regime_warning(const SystemParams& params);

struct PhaseCoefficients {
  double c0 = 0.0, c1 = 0.0;            // sin(phi):  c0 V + c1 E
  double c2 = 0.0, c3 = 0.0, c4 = 0.0;  // cos(2phi): c2 V^2 + c3 E V + c4 E^2
};

// Read off the series terms directly.
PhaseCoefficients phase_coefficients(const SystemParams& params);
// Least-squares fit of the first- and second-order Fourier amplitudes over a
// (V, E) design grid.
PhaseCoefficients fit_phase_coefficients(const SystemParams& params,
                                                   std::span<const double> couplings,
                                                   std::span<const double> drives,
                                                   std::size_t grid_size = kDefaultPhaseGrid);

}  // namespace vdpsync
