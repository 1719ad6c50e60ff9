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

#include "vdpsync/fock.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "vdpsync/error.hpp"

namespace vdpsync {

namespace {

void require_cutoff(int n_max) {
  if (n_max < 1) {
    throw Error(ErrorCode::InvalidTruncation,
                "Fock cutoff must be at least 1, got " + std::to_string(n_max));
  }
}

void require_same_dims(const Truncation& a, const Truncation& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::DimensionMismatch, "operators act on different truncations");
  }
}

}  // namespace

void Truncation::validate() const {
  require_cutoff(n_max_1);
  require_cutoff(n_max_2);
}

void prune_zeros(SparseMatrix& m) {
  m.prune(Complex(0.0), 0.0);
  m.makeCompressed();
}

SparseMatrix annihilation(int n_max) {
  require_cutoff(n_max);
  SparseMatrix a(n_max + 1, n_max + 1);
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    entries.emplace_back(n - 1, n, std::sqrt(double(n)));
  }
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrix creation(int n_max) {
  return SparseMatrix(annihilation(n_max).adjoint());
}

SparseMatrix single_mode_identity(int n_max) {
  require_cutoff(n_max);
  SparseMatrix id(n_max + 1, n_max + 1);
  id.setIdentity();
  return id;
}

FockOperator::FockOperator(const Truncation& dims, SparseMatrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  dims_.validate();
  if (matrix_.rows() != dims_.dim() || matrix_.cols() != dims_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator is " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + ", Hilbert dimension is " +
                    std::to_string(dims_.dim()));
  }
  prune_zeros(matrix_);
}

FockOperator FockOperator::zero(const Truncation& dims) {
  return FockOperator(dims, SparseMatrix(dims.dim(), dims.dim()));
}

FockOperator FockOperator::identity(const Truncation& dims) {
  SparseMatrix id(dims.dim(), dims.dim());
  id.setIdentity();
  return FockOperator(dims, std::move(id));
}

DenseMatrix FockOperator::dense() const { return DenseMatrix(matrix_); }

FockOperator FockOperator::adjoint() const {
  return FockOperator(dims_, SparseMatrix(matrix_.adjoint()));
}

StateVector FockOperator::operator*(const StateVector& psi) const {
  if (psi.size() != dims_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state vector length does not match operator");
  }
  return matrix_ * psi;
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_);
  return FockOperator(dims_, SparseMatrix(matrix_ * rhs.matrix_));
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_);
  return FockOperator(dims_, SparseMatrix(matrix_ + rhs.matrix_));
}

FockOperator FockOperator::operator-(const FockOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_);
  return FockOperator(dims_, SparseMatrix(matrix_ - rhs.matrix_));
}

FockOperator FockOperator::operator*(Complex scale) const {
  return FockOperator(dims_, SparseMatrix(matrix_ * scale));
}

FockOperator lift(const SparseMatrix& op, Mode which, const Truncation& dims) {
  dims.validate();
  if (op.rows() != dims.levels(which) || op.cols() != dims.levels(which)) {
    throw Error(ErrorCode::InvalidArgument,
                "single-mode operator of size " + std::to_string(op.rows()) +
                    " does not match mode " + std::to_string(int(which)) + " with " +
                    std::to_string(dims.levels(which)) + " levels");
  }
  SparseMatrix result;
  if (which == Mode::One) {
    result = Eigen::kroneckerProduct(op, single_mode_identity(dims.n_max_2)).eval();
  } else {
    result = Eigen::kroneckerProduct(single_mode_identity(dims.n_max_1), op).eval();
  }
  return FockOperator(dims, std::move(result));
}

FockOperator annihilation(Mode which, const Truncation& dims) {
  dims.validate();
  return lift(annihilation(dims.n_max(which)), which, dims);
}

FockOperator creation(Mode which, const Truncation& dims) {
  dims.validate();
  return lift(creation(dims.n_max(which)), which, dims);
}

FockOperator number_operator(Mode which, const Truncation& dims) {
  dims.validate();
  const int n_max = dims.n_max(which);
  SparseMatrix number(n_max + 1, n_max + 1);
  std::vector<Eigen::Triplet<Complex>> entries;
  for (int n = 1; n <= n_max; ++n) entries.emplace_back(n, n, double(n));
  number.setFromTriplets(entries.begin(), entries.end());
  return lift(number, which, dims);
}

StateVector basis_state(const Truncation& dims, int n, int m) {
  dims.validate();
  if (!dims.contains(n, m)) {
    throw Error(ErrorCode::InvalidArgument, "basis state |" + std::to_string(n) + "," +
                                                std::to_string(m) + "> is outside the truncation");
  }
  StateVector psi = StateVector::Zero(dims.dim());
  psi(dims.index(n, m)) = 1.0;
  return psi;
}

}  // namespace vdpsync
