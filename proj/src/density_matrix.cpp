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

#include "vdpsync/density_matrix.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "vdpsync/error.hpp"

namespace vdpsync {

namespace {

double smallest_eigenvalue(const DenseMatrix& hermitian) {
  const DenseMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

StateDiagnostics diagnose(const DenseMatrix& rho) {
  StateDiagnostics d;
  d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - Complex(1.0));
  d.min_eigenvalue = smallest_eigenvalue(rho);
  return d;
}

DensityMatrix::DensityMatrix(const Truncation& dims, DenseMatrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  dims_.validate();
  if (matrix_.rows() != dims_.dim() || matrix_.cols() != dims_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be " +
                                                  std::to_string(dims_.dim()) + " square");
  }
  const StateDiagnostics d = diagnose(matrix_);
  if (!(d.hermiticity_error <= kHermiticityTolerance)) {
    throw Error(ErrorCode::InvalidState,
                "not Hermitian (error " + std::to_string(d.hermiticity_error) + ")");
  }
  if (!(d.trace_error <= kTraceTolerance)) {
    throw Error(ErrorCode::InvalidState,
                "trace differs from one by " + std::to_string(d.trace_error));
  }
  if (!(d.min_eigenvalue >= -kPositivityTolerance)) {
    throw Error(ErrorCode::InvalidState,
                "negative eigenvalue " + std::to_string(d.min_eigenvalue));
  }
}

DensityMatrix DensityMatrix::pure(const Truncation& dims, const StateVector& psi) {
  if (psi.size() != dims.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state vector length does not match truncation");
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidState, "zero state vector");
  const StateVector unit = psi / norm;
  return DensityMatrix(dims, unit * unit.adjoint());
}

DensityMatrix DensityMatrix::basis(const Truncation& dims, int n, int m) {
  return pure(dims, basis_state(dims, n, m));
}

DensityMatrix DensityMatrix::product(const DenseMatrix& rho1, const DenseMatrix& rho2) {
  const Truncation dims{int(rho1.rows()) - 1, int(rho2.rows()) - 1};
  return DensityMatrix(dims, Eigen::kroneckerProduct(rho1, rho2).eval());
}

Complex DensityMatrix::element(int n1, int m1, int n2, int m2) const {
  if (!dims_.contains(n1, m1) || !dims_.contains(n2, m2)) return 0.0;
  return matrix_(dims_.index(n1, m1), dims_.index(n2, m2));
}

double DensityMatrix::min_eigenvalue() const { return smallest_eigenvalue(matrix_); }

double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "trace distance between different dimensions");
  }
  const DenseMatrix diff = rho - sigma;
  const DenseMatrix h = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.dims() == sigma.dims())) {
    throw Error(ErrorCode::DimensionMismatch, "trace distance between different truncations");
  }
  return trace_distance(rho.matrix(), sigma.matrix());
}

DensityMatrix swap_modes(const DensityMatrix& rho) {
  const Truncation& dims = rho.dims();
  if (dims.n_max_1 != dims.n_max_2) {
    throw Error(ErrorCode::InvalidArgument, "mode exchange needs equal cutoffs");
  }
  const Index d = dims.dim();
  Eigen::VectorXi perm(d);
  for (int n = 0; n <= dims.n_max_1; ++n) {
    for (int m = 0; m <= dims.n_max_2; ++m) perm(dims.index(n, m)) = int(dims.index(m, n));
  }
  DenseMatrix swapped(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) swapped(perm(i), perm(j)) = rho.matrix()(i, j);
  }
  return DensityMatrix(dims, std::move(swapped));
}

}  // namespace vdpsync
