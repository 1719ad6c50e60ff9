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

#include <array>
#include <utility>
#include <vector>

#include "vdpsync/liouvillian.hpp"

namespace vdpsync {

using Matrix6c = Eigen::Matrix<Complex, 6, 6>;
using Vector6c = Eigen::Matrix<Complex, 6, 1>;

// Ordering of the weak-drive ansatz states |n m>.
inline constexpr std::array<std::pair<int, int>, 6> kAnsatzBasis{
    {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

/// H_eff = H - sum_i [ i (gamma1/2) a_i a_i^dag + i (gamma2/2) a_i^dag^2 a_i^2 ]
/// restricted to the six ansatz states. The gain term uses a a^dag, so |10>
/// picks up -(3/2) i gamma1 on the diagonal.
Matrix6c build_effective_hamiltonian(const SystemParams& params);

struct AmplitudeVector {
  Complex c00{1.0, 0.0};
  Complex c10, c01, c20, c11, c02;
  double condition_number = 1.0;  // worst block condition number of the solve

  Vector6c as_vector() const;
  Complex ratio_01_10() const { return c01 / c10; }
};

/// Stationary amplitudes with c00 pinned to 1. Each phonon manifold is
/// solved in turn with the lower manifold as its source; the drive's
/// back-action from manifold N+1 onto N is dropped (weak-drive hierarchy).
/// In the one-phonon manifold this gives c01 = -V c10 / (delta2 - 1.5 i gamma1).
AmplitudeVector solve_amplitudes(const SystemParams& params);

struct NormalMode {
  double energy = 0.0;
  StateVector vector;  // unit norm, coefficients over NormalModeSet::basis
};

struct NormalModeSet {
  int subspace = 0;
  std::vector<std::pair<int, int>> basis;
  std::vector<NormalMode> modes;  // ascending energy
};

std::vector<std::pair<int, int>> manifold_basis(int phonons);

/// Eigenpairs of the undriven Hamiltonian within the N-phonon manifold
/// (N = 0, 1, 2). The drive is ignored.
NormalModeSet normal_modes(const SystemParams& params, int subspace);

}  // namespace vdpsync
