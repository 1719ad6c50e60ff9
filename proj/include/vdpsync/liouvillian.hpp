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

#include "vdpsync/fock.hpp"

namespace vdpsync {

class DensityMatrix;

/// Physical parameters in the frame rotating with the drive. All rates and
/// energies are in units of gamma1; detunings are omega_i - omega_drive.
struct SystemParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double gamma1 = 1.0;
  double gamma2 = 10.0;
  double coupling = 0.0;
  double drive = 0.0;
  Truncation trunc{};

  void validate() const;
};

// Hamiltonian pieces, each without its prefactor.
FockOperator coupling_operator(const Truncation& dims);  // a1^dag a2 + a1 a2^dag
FockOperator drive_operator(const Truncation& dims);     // a1 + a1^dag

// H = delta1 n1 + delta2 n2 + E (a1 + a1^dag) + V (a1^dag a2 + a1 a2^dag)
FockOperator build_hamiltonian(const SystemParams& params);

// Superoperators on column-stacked vec(rho), where X rho Y maps to
// (Y^T (x) X) vec(rho).
SparseMatrix left_multiplication(const SparseMatrix& x);
SparseMatrix right_multiplication(const SparseMatrix& y);
SparseMatrix hamiltonian_superoperator(const FockOperator& h);  // rho -> -i[H, rho]
SparseMatrix dissipator(const FockOperator& jump);              // D[X] rho

StateVector vectorize(const DenseMatrix& rho);
DenseMatrix unvectorize(const StateVector& v, Index dim);

enum class Vectorization { ColumnStacking };

/// Lindblad generator
///   L rho = -i[H, rho] + sum_i gamma1 D[a_i^dag] rho + gamma2 D[a_i^2] rho
/// stored as a sparse D^2 x D^2 matrix.
class Liouvillian {
 public:
  static constexpr Vectorization convention = Vectorization::ColumnStacking;

  // Wraps an already assembled generator. The matrix must be D^2 x D^2 for
  // the truncation in params.
  Liouvillian(const SystemParams& params, SparseMatrix matrix);

  const SystemParams& params() const { return params_; }
  const Truncation& dims() const { return params_.trunc; }
  Index hilbert_dim() const { return params_.trunc.dim(); }
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  SystemParams params_;
  SparseMatrix matrix_;
};

Liouvillian build_liouvillian(const SystemParams& params);

// L applied to an arbitrary D x D matrix; returns the de-vectorized result.
DenseMatrix apply(const Liouvillian& liouvillian, const DenseMatrix& rho);
DenseMatrix apply(const Liouvillian& liouvillian, const DensityMatrix& rho);

}  // namespace vdpsync
