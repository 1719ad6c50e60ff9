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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace vdpsync {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class Mode { One = 1, Two = 2 };

/// Fock-space cutoff of the two oscillators.
///
/// The composite basis is oscillator-1 major: |n,m> lives at
/// k = n * (n_max_2 + 1) + m.
struct Truncation {
  int n_max_1 = 5;
  int n_max_2 = 5;

  static Truncation uniform(int n_max) { return {n_max, n_max}; }

  int n_max(Mode which) const { return which == Mode::One ? n_max_1 : n_max_2; }
  Index levels(Mode which) const { return n_max(which) + 1; }
  Index dim() const { return levels(Mode::One) * levels(Mode::Two); }
  Index index(int n, int m) const { return Index(n) * levels(Mode::Two) + m; }
  bool contains(int n, int m) const {
    return n >= 0 && m >= 0 && n <= n_max_1 && m <= n_max_2;
  }

  // Throws InvalidTruncation unless both cutoffs are >= 1.
  void validate() const;

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

// Single-mode ladder operators on {|0>, ..., |n_max>}. The top level has no
// outgoing coupling: a^dagger |n_max> = 0.
SparseMatrix annihilation(int n_max);
SparseMatrix creation(int n_max);
SparseMatrix single_mode_identity(int n_max);

/// Sparse operator on the truncated two-mode Hilbert space.
class FockOperator {
 public:
  FockOperator(const Truncation& dims, SparseMatrix matrix);

  static FockOperator zero(const Truncation& dims);
  static FockOperator identity(const Truncation& dims);

  const Truncation& dims() const { return dims_; }
  const SparseMatrix& matrix() const { return matrix_; }
  DenseMatrix dense() const;

  FockOperator adjoint() const;

  StateVector operator*(const StateVector& psi) const;
  FockOperator operator*(const FockOperator& rhs) const;
  FockOperator operator+(const FockOperator& rhs) const;
  FockOperator operator-(const FockOperator& rhs) const;
  FockOperator operator*(Complex scale) const;
  friend FockOperator operator*(Complex scale, const FockOperator& op) { return op * scale; }

 private:
  Truncation dims_;
  SparseMatrix matrix_;
};

// op (x) I for Mode::One, I (x) op for Mode::Two.
FockOperator lift(const SparseMatrix& op, Mode which, const Truncation& dims);

FockOperator annihilation(Mode which, const Truncation& dims);
FockOperator creation(Mode which, const Truncation& dims);
FockOperator number_operator(Mode which, const Truncation& dims);

StateVector basis_state(const Truncation& dims, int n, int m);

// Drops explicit zeros left behind by sparse arithmetic.
void prune_zeros(SparseMatrix& m);

}  // namespace vdpsync
