// Copyright 2025-2026 The deloc developers
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

#include <vector>

#include "deloc/matrix.hpp"

namespace deloc {

namespace detail {

template <typename Mat>
double offdiag_sq(const Mat& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(Complex(m(i, j)));
  return s;
}

}  // namespace detail

struct JointDiagResult {
  Matrix v;                  // columns are the joint eigenvectors
  double offdiag_residual;   // max over the family of ‖offdiag(V†HV)‖_F
  int sweeps;
};

// Simultaneous diagonalization of a family of Hermitian matrices by Jacobi
// sweeps of complex Givens rotations (Cardoso–Souloumiac angles). Each pair
// rotation minimizes the family's total off-diagonal mass; sweeps stop when
// the per-sweep improvement drops below tol_improve. The family need not
// commute: the residual reports how far from diagonal it ends up.
inline JointDiagResult joint_diagonalize_hermitian(std::vector<Matrix> mats,
                                                   int max_sweeps = 100,
                                                   double tol_improve = 1e-12) {
  if (mats.empty()) throw InvariantError("joint_diagonalize: empty family");
  const Eigen::Index n = mats.front().rows();
  for (auto& m : mats) {
    if (m.rows() != n || m.cols() != n) {
      throw InvariantError("joint_diagonalize: inconsistent dimensions");
    }
    m = 0.5 * (m + m.adjoint().eval());  // enforce exact Hermiticity
  }

  Matrix v = Matrix::Identity(n, n);
  auto total_off = [&mats]() {
    double s = 0.0;
    for (const auto& m : mats) s += detail::offdiag_sq(m);
    return std::sqrt(s);
  };

  double prev = total_off();
  int sweep = 0;
  for (; sweep < max_sweeps && n > 1; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (const auto& m : mats) {
          const double h1 = m(p, p).real() - m(q, q).real();
          const double h2 = 2.0 * m(p, q).real();
          const double h3 = 2.0 * m(p, q).imag();
          const Eigen::Vector3d gr(h1, h2, h3);
          g += gr * gr.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3d top = es.eigenvectors().col(2);
        if (top(0) < 0.0) top = -top;
        const double x = top(0), y = top(1), z = top(2);
        const double c = std::sqrt(0.5 * (x + 1.0));
        if (!(c > 0.0)) continue;  // x == -1 cannot happen for the top vector
        const Complex s = Complex(y, -z) / std::sqrt(2.0 * (x + 1.0));
        if (std::abs(s) < 1e-16) continue;

        // Apply J†·M·J in place; J differs from identity only on (p,q).
        for (auto& m : mats) {
          const Vector col_p = m.col(p), col_q = m.col(q);
          m.col(p) = c * col_p + s * col_q;
          m.col(q) = -std::conj(s) * col_p + c * col_q;
          const Eigen::RowVectorXcd row_p = m.row(p), row_q = m.row(q);
          m.row(p) = c * row_p + std::conj(s) * row_q;
          m.row(q) = -s * row_p + c * row_q;
        }
        const Vector vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp + s * vq;
        v.col(q) = -std::conj(s) * vp + c * vq;
      }
    }
    const double cur = total_off();
    if (prev - cur < tol_improve) {
      prev = cur;
      ++sweep;
      break;
    }
    prev = cur;
  }

  double worst = 0.0;
  for (const auto& m : mats) {
    worst = std::max(worst, std::sqrt(detail::offdiag_sq(m)));
  }
  return {std::move(v), worst, sweep};
}

struct JointDiagRealResult {
  Eigen::MatrixXd v;
  double offdiag_residual;
  int sweeps;
};

// Real-orthogonal variant for families of real symmetric matrices.
inline JointDiagRealResult joint_diagonalize_symmetric(
    std::vector<Eigen::MatrixXd> mats, int max_sweeps = 100,
    double tol_improve = 1e-12) {
  if (mats.empty()) throw InvariantError("joint_diagonalize: empty family");
  const Eigen::Index n = mats.front().rows();
  for (auto& m : mats) {
    if (m.rows() != n || m.cols() != n) {
      throw InvariantError("joint_diagonalize: inconsistent dimensions");
    }
    m = 0.5 * (m + m.transpose().eval());
  }

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  auto total_off = [&mats]() {
    double s = 0.0;
    for (const auto& m : mats) s += detail::offdiag_sq(m);
    return std::sqrt(s);
  };

  double prev = total_off();
  int sweep = 0;
  for (; sweep < max_sweeps && n > 1; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
        for (const auto& m : mats) {
          const Eigen::Vector2d gr(m(p, p) - m(q, q), 2.0 * m(p, q));
          g += gr * gr.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
        Eigen::Vector2d top = es.eigenvectors().col(1);
        if (top(0) < 0.0) top = -top;
        const double x = top(0), y = top(1);
        const double c = std::sqrt(0.5 * (x + 1.0));
        if (!(c > 0.0)) continue;
        const double s = y / std::sqrt(2.0 * (x + 1.0));
        if (std::abs(s) < 1e-16) continue;

        for (auto& m : mats) {
          const Eigen::VectorXd col_p = m.col(p), col_q = m.col(q);
          m.col(p) = c * col_p + s * col_q;
          m.col(q) = -s * col_p + c * col_q;
          const Eigen::RowVectorXd row_p = m.row(p), row_q = m.row(q);
          m.row(p) = c * row_p + s * row_q;
          m.row(q) = -s * row_p + c * row_q;
        }
        const Eigen::VectorXd vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp + s * vq;
        v.col(q) = -s * vp + c * vq;
      }
    }
    const double cur = total_off();
    if (prev - cur < tol_improve) {
      prev = cur;
      ++sweep;
      break;
    }
    prev = cur;
  }

  double worst = 0.0;
  for (const auto& m : mats) {
    worst = std::max(worst, std::sqrt(detail::offdiag_sq(m)));
  }
  return {std::move(v), worst, sweep};
}

}  // namespace deloc
