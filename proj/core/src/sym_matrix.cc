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

#include "ldpchisq/sym_matrix.h"

#include <sstream>
#include <stdexcept>

#include "ldpchisq/error.h"

namespace ldpchisq {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("SymMatrix: matrix must be square, nonempty");
  }
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw std::invalid_argument("SymMatrix: matrix is not symmetric");
  }
  mat_ = ((mat_ + mat_.transpose()) * 0.5).eval();
}

SymMatrix SymMatrix::identity(int order) {
  if (order < 1) throw std::invalid_argument("SymMatrix: order must be >= 1");
  return SymMatrix(Eigen::MatrixXd::Identity(order, order));
}

double SymMatrix::quad_form(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != order()) {
    throw std::invalid_argument("quad_form: vector length mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
  return x.dot(mat_ * x);
}

Eigen::VectorXd SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat_,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double SymMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

SymMatrix invert_spd(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const double lambda_max = evals.maxCoeff();
  const double lambda_min = evals.minCoeff();
  if (lambda_max <= 0.0 || lambda_min <= 1e-12 * lambda_max) {
    std::ostringstream msg;
    msg << "invert_spd: matrix is numerically singular (min/max eigenvalue "
           "ratio "
        << (lambda_max > 0.0 ? lambda_min / lambda_max : 0.0)
        << " <= 1e-12)";
    throw SingularMatrixError(msg.str());
  }
  const Eigen::MatrixXd inv = solver.eigenvectors() *
                              evals.cwiseInverse().asDiagonal() *
                              solver.eigenvectors().transpose();
  return SymMatrix(inv);
}

SymMatrix centering_projector(int d) {
  if (d < 2) {
    throw std::invalid_argument("centering_projector: d must be >= 2");
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  p.array() -= 1.0 / static_cast<double>(d);
  return SymMatrix(p);
}

}  // namespace ldpchisq
