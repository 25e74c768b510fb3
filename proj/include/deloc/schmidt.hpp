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

#include <utility>
#include <vector>

#include "deloc/matrix.hpp"

namespace deloc {

// Realignment R[(i,j),(a,b)] = U[(i,a),(j,b)] with i,j on A and a,b on B.
// Applying it twice is the identity.
inline Matrix reshuffle(const Matrix& u, int d) {
  if (u.rows() != static_cast<Eigen::Index>(d) * d || u.rows() != u.cols()) {
    throw InvariantError("reshuffle: matrix must be d^2 x d^2");
  }
  Matrix r(u.rows(), u.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          r(static_cast<Eigen::Index>(i) * d + j,
            static_cast<Eigen::Index>(a) * d + b) =
              u(static_cast<Eigen::Index>(i) * d + a,
                static_cast<Eigen::Index>(j) * d + b);
  return r;
}

inline Matrix reshuffle(const Gate& g) { return reshuffle(g.matrix, g.d); }

// U = Σ_k coeffs[k]·kron(factors_a[k], factors_b[k]) with Hilbert–Schmidt
// orthonormal factors and nonnegative descending coefficients.
// Σ coeffs² = d² for a unitary.
struct OperatorSchmidt {
  int d = 0;
  Eigen::VectorXd coeffs;
  std::vector<Matrix> factors_a;
  std::vector<Matrix> factors_b;
  int rank = 0;
  double tol_used = kTolRank;

  Matrix reconstruct() const {
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(d) * d,
                            static_cast<Eigen::Index>(d) * d);
    for (std::size_t k = 0; k < factors_a.size(); ++k) {
      u += coeffs(static_cast<Eigen::Index>(k)) *
           kron(factors_a[k], factors_b[k]);
    }
    return u;
  }
};

namespace detail {

inline Matrix unvec_row_major(const Vector& v, int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v(static_cast<Eigen::Index>(i) * d + j);
  return m;
}

// Index of the largest-modulus entry, first in row-major order on ties.
inline std::pair<int, int> argmax_modulus(const Matrix& m) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > best) {
        best = std::abs(m(i, j));
        bi = i;
        bj = j;
      }
  return {bi, bj};
}

}  // namespace detail

// SVD of the realigned gate. Factor phases are fixed by making the
// largest-modulus entry of each A_k real nonnegative; within a degenerate
// singular block only the span and the coefficients are contractual.
inline OperatorSchmidt schmidt_decompose(const Gate& g,
                                         double tol_rank = kTolRank) {
  if (tol_rank <= 0.0 || tol_rank >= 1.0) {
    throw InvariantError("schmidt_decompose: tol_rank must be in (0,1)");
  }
  const Matrix r = reshuffle(g);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw Error("schmidt_decompose: SVD did not converge");
  }

  OperatorSchmidt os;
  os.d = g.d;
  os.tol_used = tol_rank;
  os.coeffs = svd.singularValues();
  const Eigen::Index n = os.coeffs.size();
  os.factors_a.reserve(n);
  os.factors_b.reserve(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Matrix a = detail::unvec_row_major(svd.matrixU().col(k), g.d);
    Matrix b = detail::unvec_row_major(svd.matrixV().col(k).conjugate(), g.d);
    const auto [bi, bj] = detail::argmax_modulus(a);
    const Complex top = a(bi, bj);
    if (std::abs(top) > 0.0) {
      const Complex phase = top / std::abs(top);
      a *= std::conj(phase);
      b *= phase;
    }
    os.factors_a.push_back(std::move(a));
    os.factors_b.push_back(std::move(b));
  }

  os.rank = 0;
  const double cutoff = tol_rank * (n > 0 ? os.coeffs(0) : 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (os.coeffs(k) > cutoff) ++os.rank;
  }
  return os;
}

inline int schmidt_rank(const Gate& g, double tol_rank = kTolRank) {
  return schmidt_decompose(g, tol_rank).rank;
}

}  // namespace deloc
