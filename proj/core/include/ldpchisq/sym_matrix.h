// Copyright 2026 The ldpchisq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPCHISQ_SYM_MATRIX_H_
#define LDPCHISQ_SYM_MATRIX_H_

#include <Eigen/Dense>
#include <span>

namespace ldpchisq {

// Dense symmetric real matrix of small order (a few hundred at most).
// Construction validates symmetry to 1e-10 relative and stores the
// symmetrized matrix.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);
  static SymMatrix identity(int order);

  int order() const { return static_cast<int>(mat_.rows()); }
  double operator()(int i, int j) const { return mat_(i, j); }
  const Eigen::MatrixXd& mat() const { return mat_; }

  // v' M v for a vector of matching length.
  double quad_form(std::span<const double> v) const;

  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd mat_;
};

// Inverse of a symmetric positive definite matrix via eigendecomposition.
// Rejects inputs whose smallest eigenvalue is at most 1e-12 times the
// largest, throwing SingularMatrixError naming the conditioning ratio.
// The result satisfies ||M * inv(M) - I|| <= 1e-8.
SymMatrix invert_spd(const SymMatrix& m);

// The centering projector I_d - (1/d) 11'. Idempotent, annihilates the
// all-ones vector, rank d - 1. Requires d >= 2.
SymMatrix centering_projector(int d);

}  // namespace ldpchisq

#endif  // LDPCHISQ_SYM_MATRIX_H_
