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

#include "vdpsync/effective_model.hpp"

#include <sstream>
#include <string>

#include "vdpsync/error.hpp"

namespace vdpsync {

namespace {

constexpr double kMinReciprocalCondition = 1e-12;

// n_max = 3 keeps a a^dag exact on the two-phonon states.
const Truncation kAnsatzTruncation{3, 3};

DenseMatrix restrict_to(const DenseMatrix& full, const Truncation& dims,
                        const std::vector<std::pair<int, int>>& basis) {
  const Index size = Index(basis.size());
  DenseMatrix block(size, size);
  for (Index i = 0; i < size; ++i) {
    for (Index j = 0; j < size; ++j) {
      block(i, j) = full(dims.index(basis[i].first, basis[i].second),
                         dims.index(basis[j].first, basis[j].second));
    }
  }
  return block;
}

double condition_number(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

StateVector solve_block(const DenseMatrix& block, const StateVector& rhs, double& worst_condition) {
  const double cond = condition_number(block);
  if (!(1.0 / cond > kMinReciprocalCondition)) {
    std::ostringstream msg;
    msg << "non-Hermitian manifold block is near singular (condition number " << cond << ")";
    throw Error(ErrorCode::NearSingular, msg.str());
  }
  worst_condition = std::max(worst_condition, cond);
  return block.partialPivLu().solve(rhs);
}

}  // namespace

Matrix6c build_effective_hamiltonian(const SystemParams& params) {
  params.validate();
  SystemParams p = params;
  p.trunc = kAnsatzTruncation;
  const Truncation& dims = p.trunc;
  const FockOperator a1 = annihilation(Mode::One, dims);
  const FockOperator a2 = annihilation(Mode::Two, dims);
  const Complex i(0.0, 1.0);
  const FockOperator gain = a1 * a1.adjoint() + a2 * a2.adjoint();
  const FockOperator loss = a1.adjoint() * a1.adjoint() * a1 * a1 +
                            a2.adjoint() * a2.adjoint() * a2 * a2;
  const FockOperator h_eff =
      build_hamiltonian(p) - (i * 0.5 * p.gamma1) * gain - (i * 0.5 * p.gamma2) * loss;

  const std::vector<std::pair<int, int>> basis(kAnsatzBasis.begin(), kAnsatzBasis.end());
  return restrict_to(h_eff.dense(), dims, basis);
}

Vector6c AmplitudeVector::as_vector() const {
  Vector6c v;
  v << c00, c10, c01, c20, c11, c02;
  return v;
}

AmplitudeVector solve_amplitudes(const SystemParams& params) {
  params.validate();
  if (!(params.drive > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "stationary amplitudes need a non-zero drive");
  }
  const Matrix6c h = build_effective_hamiltonian(params);
  AmplitudeVector amp;
  amp.condition_number = 1.0;

  // Manifold 1: rows/cols 1..2, sourced by c00 through column 0.
  const StateVector c1 =
      solve_block(h.block(1, 1, 2, 2), -h.block(1, 0, 2, 1) * amp.c00, amp.condition_number);
  amp.c10 = c1(0);
  amp.c01 = c1(1);

  // Manifold 2: rows/cols 3..5, sourced by manifold 1.
  const StateVector c2 =
      solve_block(h.block(3, 3, 3, 3), -h.block(3, 1, 3, 2) * c1, amp.condition_number);
  amp.c20 = c2(0);
  amp.c11 = c2(1);
  amp.c02 = c2(2);
  return amp;
}

std::vector<std::pair<int, int>> manifold_basis(int phonons) {
  if (phonons < 0 || phonons > 2) {
    throw Error(ErrorCode::InvalidArgument, "phonon manifold must be 0, 1 or 2");
  }
  std::vector<std::pair<int, int>> basis;
  for (int n = phonons; n >= 0; --n) basis.emplace_back(n, phonons - n);
  return basis;
}

NormalModeSet normal_modes(const SystemParams& params, int subspace) {
  params.validate();
  NormalModeSet set;
  set.subspace = subspace;
  set.basis = manifold_basis(subspace);

  SystemParams p = params;
  p.drive = 0.0;
  p.trunc = kAnsatzTruncation;
  const DenseMatrix block = restrict_to(build_hamiltonian(p).dense(), p.trunc, set.basis);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(block);
  for (Index k = 0; k < block.rows(); ++k) {
    StateVector v = solver.eigenvectors().col(k);
    // Fix the free phase: first component above 1e-12 made real positive.
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    set.modes.push_back({solver.eigenvalues()(k), v});
  }
  return set;
}

}  // namespace vdpsync
