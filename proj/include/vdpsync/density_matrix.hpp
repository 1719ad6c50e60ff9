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

struct StateDiagnostics {
  double hermiticity_error = 0.0;  // max |rho - rho^dag|
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

StateDiagnostics diagnose(const DenseMatrix& rho);

/// Hermitian, unit-trace, positive semidefinite state on a two-mode
/// truncation. Construction validates all three properties.
class DensityMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kPositivityTolerance = 1e-10;

  DensityMatrix(const Truncation& dims, DenseMatrix matrix);

  static DensityMatrix pure(const Truncation& dims, const StateVector& psi);
  static DensityMatrix basis(const Truncation& dims, int n, int m);
  // Tensor product of single-mode states, mode 1 first.
  static DensityMatrix product(const DenseMatrix& rho1, const DenseMatrix& rho2);

  const Truncation& dims() const { return dims_; }
  const DenseMatrix& matrix() const { return matrix_; }
  Index dim() const { return dims_.dim(); }

  // <n1,m1| rho |n2,m2>; zero outside the truncation.
  Complex element(int n1, int m1, int n2, int m2) const;

  double min_eigenvalue() const;

 private:
  Truncation dims_;
  DenseMatrix matrix_;
};

// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma);

// Mode exchange |n,m> -> |m,n>; requires n_max_1 == n_max_2.
DensityMatrix swap_modes(const DensityMatrix& rho);

}  // namespace vdpsync
