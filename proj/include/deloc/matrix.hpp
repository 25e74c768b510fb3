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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace deloc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Default tolerances. Gates are held to ~1e-10 unitarity; structural
// classification runs at 1e-6, four orders above that noise floor.
inline constexpr double kTolUnitary = 1e-10;  // ‖U†U−I‖_F / √dim
inline constexpr double kTolNorm = 1e-10;
inline constexpr double kTolRank = 1e-8;      // relative to largest coefficient
inline constexpr double kTolClassify = 1e-6;
inline constexpr double kTolVerify = 1e-9;
inline constexpr double kProbFloor = 1e-12;   // branches below this are skipped

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (file contents, gate specs, CLI grammar).
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input violating a contract (non-unitary gate,
// dimension mismatch, non-normalized state).
struct InvariantError : Error {
  using Error::Error;
};

enum class Side { A, B };

// Frobenius residual of U†U−I, relative to √dim.
inline double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const Matrix res = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return res.norm() / std::sqrt(static_cast<double>(u.rows()));
}

inline bool is_unitary(const Matrix& u, double tol = kTolUnitary) {
  return unitarity_residual(u) <= tol;
}

// Two-qudit gate on H_A ⊗ H_B. Composite index = i_A·d + i_B throughout;
// subsystem A is the control candidate.
struct Gate {
  int d = 0;
  Matrix matrix;

  Gate(int local_dim, Matrix m) : d(local_dim), matrix(std::move(m)) {
    if (d < 2) throw InvariantError("Gate: local dimension must be >= 2");
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    if (matrix.rows() != n || matrix.cols() != n) {
      throw InvariantError("Gate: matrix must be d^2 x d^2, got " +
                           std::to_string(matrix.rows()) + "x" +
                           std::to_string(matrix.cols()) + " for d=" +
                           std::to_string(d));
    }
    if (!matrix.allFinite()) throw InvariantError("Gate: non-finite entries");
    const double res = unitarity_residual(matrix);
    if (res > kTolUnitary) {
      throw InvariantError("Gate: not unitary (residual " +
                           std::to_string(res) + ")");
    }
  }

  Eigen::Index dim() const { return matrix.rows(); }
};

struct PureState {
  Vector amplitudes;

  explicit PureState(Vector a) : amplitudes(std::move(a)) {
    if (amplitudes.size() == 0 || !amplitudes.allFinite()) {
      throw InvariantError("PureState: empty or non-finite amplitudes");
    }
    if (std::abs(amplitudes.norm() - 1.0) > kTolNorm) {
      throw InvariantError("PureState: not normalized (norm " +
                           std::to_string(amplitudes.norm()) + ")");
    }
  }

  // Scales the vector to unit norm before construction.
  static PureState normalized(Vector a) {
    const double n = a.norm();
    if (n == 0.0) throw InvariantError("PureState: zero vector");
    return PureState(a / n);
  }

  Eigen::Index dim() const { return amplitudes.size(); }
};

inline Matrix kron(const Matrix& x, const Matrix& y) {
  return Eigen::kroneckerProduct(x, y).eval();
}

inline Vector kron_vec(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out.segment(i * y.size(), y.size()) = x(i) * y;
  }
  return out;
}

inline Matrix partial_trace(const Matrix& rho, int da, int db, Side keep) {
  if (da < 1 || db < 1 ||
      rho.rows() != static_cast<Eigen::Index>(da) * db || rho.rows() != rho.cols()) {
    throw InvariantError("partial_trace: dimension mismatch");
  }
  if (keep == Side::A) {
    Matrix out = Matrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b)
          out(i, j) += rho(static_cast<Eigen::Index>(i) * db + b,
                           static_cast<Eigen::Index>(j) * db + b);
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (int a = 0; a < db; ++a)
    for (int b = 0; b < db; ++b)
      for (int i = 0; i < da; ++i)
        out(a, b) += rho(static_cast<Eigen::Index>(i) * db + a,
                         static_cast<Eigen::Index>(i) * db + b);
  return out;
}

// Reduced density matrix of a pure state without forming the full projector.
inline Matrix reduced_density(const Vector& psi, int da, int db, Side keep) {
  if (psi.size() != static_cast<Eigen::Index>(da) * db) {
    throw InvariantError("reduced_density: dimension mismatch");
  }
  if (keep == Side::A) {
    Matrix out = Matrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b)
          out(i, j) += psi(static_cast<Eigen::Index>(i) * db + b) *
                       std::conj(psi(static_cast<Eigen::Index>(j) * db + b));
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (int a = 0; a < db; ++a)
    for (int b = 0; b < db; ++b)
      for (int i = 0; i < da; ++i)
        out(a, b) += psi(static_cast<Eigen::Index>(i) * db + a) *
                     std::conj(psi(static_cast<Eigen::Index>(i) * db + b));
  return out;
}

// Eigenvalues are clamped to [0,1] before p·log p; terms below 1e-15
// contribute nothing. Avoids NaN from round-off negatives.
inline double entropy_of_density(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = std::clamp(es.eigenvalues()(k), 0.0, 1.0);
    if (p >= 1e-15) s -= p * std::log2(p);
  }
  return s;
}

// Von Neumann entropy (base-2) of either reduced state of a bipartite
// pure state; in [0, log2 min(da, db)].
inline double entanglement_entropy(const PureState& psi, int da, int db) {
  if (psi.dim() != static_cast<Eigen::Index>(da) * db) {
    throw InvariantError("entanglement_entropy: dimension mismatch");
  }
  const Side smaller = (da <= db) ? Side::A : Side::B;
  return entropy_of_density(reduced_density(psi.amplitudes, da, db, smaller));
}

// ⟨ψ|ρ|ψ⟩ for a density matrix ρ (unit trace within loose tolerance).
inline double state_fidelity(const PureState& psi, const Matrix& rho) {
  if (rho.rows() != psi.dim() || rho.cols() != psi.dim()) {
    throw InvariantError("state_fidelity: dimension mismatch");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 ||
      std::abs(rho.trace().imag()) > 1e-6) {
    throw InvariantError("state_fidelity: density matrix trace is not 1");
  }
  const double f = (psi.amplitudes.adjoint() * rho * psi.amplitudes)(0).real();
  return std::clamp(f, 0.0, 1.0);
}

// 0.5·‖ρ−σ‖_1 via Hermitian eigenvalues.
inline double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw InvariantError("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Polar projection: closest unitary in Frobenius norm.
inline Matrix nearest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Phase aligning x to y: γ = arg Tr(x†y), so that ‖e^{iγ}x − y‖_F is minimal.
inline double alignment_phase(const Matrix& x, const Matrix& y) {
  const Complex t = (x.adjoint() * y).trace();
  return std::abs(t) > 0.0 ? std::arg(t) : 0.0;
}

inline double phase_aligned_distance(const Matrix& x, const Matrix& y) {
  const double g = alignment_phase(x, y);
  return (std::exp(kI * g) * x - y).norm();
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix hadamard() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

inline Vector basis_ket(int i, int dim) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace deloc
