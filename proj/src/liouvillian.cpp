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

#include "vdpsync/liouvillian.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "vdpsync/density_matrix.hpp"
#include "vdpsync/error.hpp"

namespace vdpsync {

namespace {

SparseMatrix identity(Index dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_finite(delta1, "delta1");
  require_finite(delta2, "delta2");
  require_finite(gamma1, "gamma1");
  require_finite(gamma2, "gamma2");
  require_finite(coupling, "coupling");
  require_finite(drive, "drive");
  if (gamma1 <= 0.0) throw Error(ErrorCode::InvalidArgument, "gamma1 must be positive");
  if (gamma2 < 0.0) throw Error(ErrorCode::InvalidArgument, "gamma2 must be non-negative");
  if (coupling < 0.0) throw Error(ErrorCode::InvalidArgument, "coupling must be non-negative");
  if (drive < 0.0) throw Error(ErrorCode::InvalidArgument, "drive must be non-negative");
  trunc.validate();
}

FockOperator coupling_operator(const Truncation& dims) {
  const FockOperator a1 = annihilation(Mode::One, dims);
  const FockOperator a2 = annihilation(Mode::Two, dims);
  return a1.adjoint() * a2 + a1 * a2.adjoint();
}

FockOperator drive_operator(const Truncation& dims) {
  const FockOperator a1 = annihilation(Mode::One, dims);
  return a1 + a1.adjoint();
}

FockOperator build_hamiltonian(const SystemParams& params) {
  params.validate();
  const Truncation& dims = params.trunc;
  return params.delta1 * number_operator(Mode::One, dims) +
         params.delta2 * number_operator(Mode::Two, dims) +
         params.drive * drive_operator(dims) + params.coupling * coupling_operator(dims);
}

SparseMatrix left_multiplication(const SparseMatrix& x) {
  return Eigen::kroneckerProduct(identity(x.rows()), x).eval();
}

SparseMatrix right_multiplication(const SparseMatrix& y) {
  return Eigen::kroneckerProduct(SparseMatrix(y.transpose()), identity(y.rows())).eval();
}

SparseMatrix hamiltonian_superoperator(const FockOperator& h) {
  const Complex minus_i(0.0, -1.0);
  SparseMatrix result =
      minus_i * (left_multiplication(h.matrix()) - right_multiplication(h.matrix()));
  prune_zeros(result);
  return result;
}

SparseMatrix dissipator(const FockOperator& jump) {
  const SparseMatrix& x = jump.matrix();
  const SparseMatrix x_dag_x = x.adjoint() * x;
  SparseMatrix result = Eigen::kroneckerProduct(SparseMatrix(x.conjugate()), x).eval();
  result -= 0.5 * left_multiplication(x_dag_x);
  result -= 0.5 * right_multiplication(x_dag_x);
  prune_zeros(result);
  return result;
}

StateVector vectorize(const DenseMatrix& rho) {
  return Eigen::Map<const StateVector>(rho.data(), rho.size());
}

DenseMatrix unvectorize(const StateVector& v, Index dim) {
  if (v.size() != dim * dim) {
    throw Error(ErrorCode::DimensionMismatch, "vector length is not the square of the dimension");
  }
  return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

Liouvillian::Liouvillian(const SystemParams& params, SparseMatrix matrix)
    : params_(params), matrix_(std::move(matrix)) {
  params_.validate();
  const Index d2 = params_.trunc.dim() * params_.trunc.dim();
  if (matrix_.rows() != d2 || matrix_.cols() != d2) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator must be " + std::to_string(d2) +
                                                  "x" + std::to_string(d2));
  }
  prune_zeros(matrix_);
}

Liouvillian build_liouvillian(const SystemParams& params) {
  params.validate();
  const Truncation& dims = params.trunc;
  SparseMatrix generator = hamiltonian_superoperator(build_hamiltonian(params));
  for (Mode mode : {Mode::One, Mode::Two}) {
    const FockOperator a = annihilation(mode, dims);
    generator += params.gamma1 * dissipator(a.adjoint());
    if (params.gamma2 > 0.0) generator += params.gamma2 * dissipator(a * a);
  }
  return Liouvillian(params, std::move(generator));
}

DenseMatrix apply(const Liouvillian& liouvillian, const DenseMatrix& rho) {
  const Index dim = liouvillian.hilbert_dim();
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                    ", generator acts on dimension " + std::to_string(dim));
  }
  return unvectorize(liouvillian.matrix() * vectorize(rho), dim);
}

DenseMatrix apply(const Liouvillian& liouvillian, const DensityMatrix& rho) {
  if (!(rho.dims() == liouvillian.dims())) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix truncation differs from generator");
  }
  return apply(liouvillian, rho.matrix());
}

}  // namespace vdpsync
