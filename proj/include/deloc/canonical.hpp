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

#include <array>
#include <cmath>
#include <tuple>

#include "deloc/jointdiag.hpp"
#include "deloc/matrix.hpp"

namespace deloc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPi2 = kPi / 2.0;
inline constexpr double kPi4 = kPi / 4.0;

// exp(i(tx σx⊗σx + ty σy⊗σy + tz σz⊗σz)); the three terms commute, so this
// is the exact product of the three one-parameter factors.
inline Matrix canonical_interaction(double tx, double ty, double tz) {
  auto factor = [](double t, const Matrix& sigma) -> Matrix {
    return std::cos(t) * Matrix::Identity(4, 4) +
           kI * std::sin(t) * kron(sigma, sigma);
  };
  return factor(tx, pauli_x()) * factor(ty, pauli_y()) * factor(tz, pauli_z());
}

// Two-qubit canonical form U = e^{iφ}(pre_a⊗pre_b)·exp(iΣθ_jσ^j⊗σ^j)·
// (post_a⊗post_b), with π/4 ≥ θx ≥ θy ≥ |θz|. The sign of θz is a local
// invariant below the θx = π/4 wall (it distinguishes a gate from its
// complex conjugate); on the wall it is normalized to θz ≥ 0.
struct CanonicalForm {
  Matrix pre_a, pre_b, post_a, post_b;
  std::array<double, 3> theta{0.0, 0.0, 0.0};
  double global_phase = 0.0;

  Matrix reconstruct() const {
    return std::exp(kI * global_phase) * kron(pre_a, pre_b) *
           canonical_interaction(theta[0], theta[1], theta[2]) *
           kron(post_a, post_b);
  }
};

namespace detail {

inline double rem_euclid(double x, double m) {
  double r = std::fmod(x, m);
  if (r < 0.0) r += m;
  return r;
}

// Magic (Bell-like) basis change. In this frame SU(2)⊗SU(2) is SO(4) and the
// canonical interaction is diagonal.
inline Matrix magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix b(4, 4);
  b << Complex(s, 0), Complex(0, s), Complex(0, 0), Complex(0, 0),
      Complex(0, 0), Complex(0, 0), Complex(0, s), Complex(s, 0),
      Complex(0, 0), Complex(0, 0), Complex(0, s), Complex(-s, 0),
      Complex(s, 0), Complex(0, -s), Complex(0, 0), Complex(0, 0);
  return b;
}

inline Matrix ipx() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, 1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix ipy() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(-1, 0), Complex(0, 0);
  return m;
}

inline Matrix ipz() {
  Matrix m(2, 2);
  m << Complex(0, 1), Complex(0, 0), Complex(0, 0), Complex(0, -1);
  return m;
}

// Splits a 4x4 Kronecker product (up to phase) into 2x2 factors l ⊗ r and
// the leftover phase. Works quadrant-wise via determinants.
inline std::tuple<Matrix, Matrix, double> split_product_gate(const Matrix& m4) {
  Matrix r = m4.block(0, 0, 2, 2);
  Complex det_r = r.determinant();
  if (std::abs(det_r) < 0.1) {
    r = m4.block(2, 0, 2, 2);
    det_r = r.determinant();
  }
  if (std::abs(det_r) < 0.1) {
    throw Error("split_product_gate: input is not a product of 2x2 unitaries");
  }
  r /= std::sqrt(det_r);
  const Matrix temp = m4 * kron(Matrix::Identity(2, 2), r.adjoint());
  Matrix l(2, 2);
  l << temp(0, 0), temp(0, 2), temp(2, 0), temp(2, 2);
  const Complex det_l = l.determinant();
  if (std::abs(det_l) < 0.9) {
    throw Error("split_product_gate: input is not a product of 2x2 unitaries");
  }
  l /= std::sqrt(det_l);
  return {l, r, std::arg(det_l) / 2.0};
}

}  // namespace detail

// Magic-basis Kraus–Cirac decomposition. MᵀM in the magic frame is complex
// symmetric with commuting real and imaginary parts; degenerate eigenvalues
// (CNOT sits on a chamber wall) are handled by jointly diagonalizing the two
// parts with Jacobi sweeps, which needs no genericity assumptions.
inline CanonicalForm kraus_cirac_decompose(const Gate& g) {
  if (g.d != 2) {
    throw InvariantError("kraus_cirac_decompose: only defined for d=2");
  }

  const Complex det_u = g.matrix.determinant();
  Matrix u = g.matrix * std::pow(det_u, Complex(-0.25, 0.0));
  double global_phase = std::arg(det_u) / 4.0;

  const Matrix b = detail::magic_basis();
  const Matrix up = b.adjoint() * u * b;
  const Matrix m2 = up.transpose() * up;

  // Joint eigenbasis of (Re M2, Im M2), real orthogonal.
  auto jd = joint_diagonalize_symmetric({m2.real(), m2.imag()});
  if (jd.offdiag_residual > 1e-8) {
    throw Error("kraus_cirac_decompose: M2 diagonalization residual " +
                std::to_string(jd.offdiag_residual));
  }
  Eigen::MatrixXd p = jd.v;
  // Deterministic output: order columns by descending eigenvalue phase,
  // then make the first significant entry of each column positive.
  Eigen::Vector4cd evals;
  {
    const Matrix diag = p.transpose().cast<Complex>() * m2 * p.cast<Complex>();
    for (int i = 0; i < 4; ++i) evals(i) = diag(i, i);
  }
  std::array<int, 4> perm{0, 1, 2, 3};
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int c) {
    return std::arg(evals(a)) > std::arg(evals(c));
  });
  {
    Eigen::MatrixXd p_sorted(4, 4);
    Eigen::Vector4cd e_sorted;
    for (int i = 0; i < 4; ++i) {
      p_sorted.col(i) = p.col(perm[i]);
      e_sorted(i) = evals(perm[i]);
    }
    p = p_sorted;
    evals = e_sorted;
  }
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      if (std::abs(p(i, j)) > 1e-7) {
        if (p(i, j) < 0.0) p.col(j) *= -1.0;
        break;
      }
    }
  }

  Eigen::Vector4d d_angles;
  for (int i = 0; i < 4; ++i) d_angles(i) = -std::arg(evals(i)) / 2.0;
  d_angles(3) = -d_angles(0) - d_angles(1) - d_angles(2);

  Eigen::Vector3d cs;
  for (int i = 0; i < 3; ++i) {
    cs(i) = detail::rem_euclid((d_angles(i) + d_angles(3)) / 2.0, 2.0 * kPi);
  }

  // Order coordinates by folded magnitude min(x mod π/2, π/2 − x mod π/2):
  // slot 0 gets the middle one, slot 1 the largest, slot 2 the smallest.
  Eigen::Vector3d folded;
  for (int i = 0; i < 3; ++i) {
    const double t = detail::rem_euclid(cs(i), kPi2);
    folded(i) = std::min(t, kPi2 - t);
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return folded(a) < folded(c); });
  order = {order[1], order[2], order[0]};
  {
    const Eigen::Vector3d cs_old = cs;
    const Eigen::Vector4d d_old = d_angles;
    const Eigen::MatrixXd p_old = p;
    for (int i = 0; i < 3; ++i) {
      cs(i) = cs_old(order[i]);
      d_angles(i) = d_old(order[i]);
      p.col(i) = p_old.col(order[i]);
    }
  }
  if (p.determinant() < 0.0) p.col(3) *= -1.0;

  Matrix temp = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) temp(i, i) = std::exp(kI * d_angles(i));
  const Matrix pc = p.cast<Complex>();
  const Matrix k1 = b * (up * pc * temp) * b.adjoint();
  const Matrix k2 = b * pc.transpose() * b.adjoint();

  auto [k1l, k1r, phase_l] = detail::split_product_gate(k1);
  auto [k2l, k2r, phase_r] = detail::split_product_gate(k2);
  global_phase += phase_l + phase_r;

  // Fold into the Weyl chamber.
  const Matrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  const Matrix px = detail::ipx(), py = detail::ipy(), pz = detail::ipz();
  if (cs(0) > kPi2) {
    cs(0) -= 3.0 * kPi2;
    k1l = k1l * py;
    k1r = k1r * py;
    global_phase += kPi2;
  }
  if (cs(1) > kPi2) {
    cs(1) -= 3.0 * kPi2;
    k1l = k1l * px;
    k1r = k1r * px;
    global_phase += kPi2;
  }
  int conjs = 0;
  if (cs(0) > kPi4) {
    cs(0) = kPi2 - cs(0);
    k1l = k1l * py;
    k2r = py * k2r;
    conjs += 1;
    global_phase -= kPi2;
  }
  if (cs(1) > kPi4) {
    cs(1) = kPi2 - cs(1);
    k1l = k1l * px;
    k2r = px * k2r;
    conjs += 1;
    global_phase += kPi2;
    if (conjs == 1) global_phase -= kPi;
  }
  if (cs(2) > kPi2) {
    cs(2) -= 3.0 * kPi2;
    k1l = k1l * pz;
    k1r = k1r * pz;
    global_phase += kPi2;
    if (conjs == 1) global_phase -= kPi;
  }
  if (conjs == 1) {
    cs(2) = kPi2 - cs(2);
    k1l = k1l * pz;
    k2r = pz * k2r;
    global_phase += kPi2;
  }
  if (cs(2) > kPi4) {
    cs(2) -= kPi2;
    k1l = k1l * pz;
    k1r = k1r * pz;
    global_phase -= kPi2;
  }

  double tx = cs(1), ty = cs(0), tz = cs(2);
  // On the θx = π/4 wall the sign of θz is a gauge choice; fix it positive.
  if (std::abs(tx - kPi4) < 1e-12 && tz < 0.0) {
    tz = -tz;
    k1l = k1l * sy;
    k2l = sz * k2l;
    k2r = sx * k2r;
  }
  // Snap exact-zero angles that came out as round-off negatives.
  for (double* t : {&tx, &ty, &tz}) {
    if (std::abs(*t) < 1e-14) *t = 0.0;
  }

  CanonicalForm form;
  form.pre_a = k1l;
  form.pre_b = k1r;
  form.post_a = k2l;
  form.post_b = k2r;
  form.theta = {tx, ty, tz};
  form.global_phase = global_phase;

  const double residual = (form.reconstruct() - g.matrix).norm();
  if (residual > 1e-8) {
    throw Error("kraus_cirac_decompose: reconstruction residual " +
                std::to_string(residual));
  }
  return form;
}

// Euclidean distance between Weyl-chamber representatives, minimized over
// the chamber's residual wall symmetry (θx, θy, θz) ↔ (π/2−θx, θy, −θz).
inline double theta_distance(const CanonicalForm& a, const CanonicalForm& b) {
  auto variants = [](const std::array<double, 3>& t) {
    return std::array<std::array<double, 3>, 2>{
        t, {kPi2 - t[0], t[1], -t[2]}};
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ta : variants(a.theta)) {
    for (const auto& tb : variants(b.theta)) {
      const double dx = ta[0] - tb[0];
      const double dy = ta[1] - tb[1];
      const double dz = ta[2] - tb[2];
      best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
  }
  return best;
}

}  // namespace deloc
