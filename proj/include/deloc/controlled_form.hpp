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

#include <optional>
#include <utility>
#include <vector>

#include "deloc/jointdiag.hpp"
#include "deloc/matrix.hpp"
#include "deloc/schmidt.hpp"

namespace deloc {

// Raised when a gate fails the structural steps of controlled-form
// extraction; callers treat it as a Class 2 verdict.
struct ExtractionError : Error {
  using Error::Error;
};

struct ControlledBlock {
  Matrix projector;  // P^n on the control side, mutually orthogonal, ΣP = I
  Matrix target;     // u^n on the target side, unitary
};

// (u_a⊗u_b)·(Σ_n P^n⊗u^n)·(v_a⊗v_b); distinct blocks carry distinct u^n.
struct ControlledForm {
  int d = 0;
  Matrix u_a, u_b, v_a, v_b;
  std::vector<ControlledBlock> blocks;

  Matrix reconstruct() const {
    Matrix core = Matrix::Zero(static_cast<Eigen::Index>(d) * d,
                               static_cast<Eigen::Index>(d) * d);
    for (const auto& blk : blocks) core += kron(blk.projector, blk.target);
    return kron(u_a, u_b) * core * kron(v_a, v_b);
  }

  void validate(double tol = 1e-8) const {
    if (blocks.empty()) throw InvariantError("ControlledForm: no blocks");
    for (const Matrix* m : {&u_a, &u_b, &v_a, &v_b}) {
      if (unitarity_residual(*m) > kTolUnitary * 10) {
        throw InvariantError("ControlledForm: local factor not unitary");
      }
    }
    Matrix proj_sum = Matrix::Zero(d, d);
    for (std::size_t n = 0; n < blocks.size(); ++n) {
      const Matrix& p = blocks[n].projector;
      if ((p * p - p).norm() > 1e-9 || (p - p.adjoint()).norm() > 1e-9) {
        throw InvariantError("ControlledForm: block is not a projector");
      }
      if (unitarity_residual(blocks[n].target) > tol) {
        throw InvariantError("ControlledForm: block target not unitary");
      }
      for (std::size_t m = n + 1; m < blocks.size(); ++m) {
        if ((p * blocks[m].projector).norm() > 1e-9) {
          throw InvariantError("ControlledForm: projectors not orthogonal");
        }
        if (phase_aligned_distance(blocks[n].target, blocks[m].target) <= tol) {
          throw InvariantError("ControlledForm: duplicate block targets");
        }
      }
      proj_sum += p;
    }
    if ((proj_sum - Matrix::Identity(d, d)).norm() > 1e-9) {
      throw InvariantError("ControlledForm: projectors do not sum to identity");
    }
  }
};

// Largest pairwise commutator norms within {A_kA_l†} (left) and {A_k†A_l}
// (right), over the significant Schmidt factors. Both families commute for
// any gate locally equivalent to a controlled-unitary with control on A.
struct CommutantResiduals {
  double left = 0.0;
  double right = 0.0;
  double max() const { return std::max(left, right); }
};

inline CommutantResiduals commutant_residuals(const OperatorSchmidt& os) {
  const int r = os.rank;
  std::vector<Matrix> left, right;
  left.reserve(static_cast<std::size_t>(r) * r);
  right.reserve(static_cast<std::size_t>(r) * r);
  for (int k = 0; k < r; ++k) {
    for (int l = 0; l < r; ++l) {
      left.push_back(os.factors_a[k] * os.factors_a[l].adjoint());
      right.push_back(os.factors_a[k].adjoint() * os.factors_a[l]);
    }
  }
  CommutantResiduals res;
  auto worst = [](const std::vector<Matrix>& fam) {
    double w = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      for (std::size_t j = i + 1; j < fam.size(); ++j) {
        w = std::max(w, (fam[i] * fam[j] - fam[j] * fam[i]).norm());
      }
    }
    return w;
  };
  res.left = worst(left);
  res.right = worst(right);
  return res;
}

namespace detail {

// Phase-fix a vector so its largest-modulus entry is real nonnegative.
inline void fix_vector_phase(Vector& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > mag) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (mag > 0.0) v *= std::conj(v(best) / std::abs(v(best)));
}

// Groups control levels whose target unitaries agree up to a phase; the
// phase is absorbed into the corresponding column of the control-side
// unitary so grouped levels share one target exactly.
struct LevelGroups {
  std::vector<std::vector<int>> members;
  std::vector<Matrix> targets;
};

inline LevelGroups group_levels(std::vector<Matrix> level_targets, Matrix& a,
                                double tol) {
  LevelGroups groups;
  for (int n = 0; n < static_cast<int>(level_targets.size()); ++n) {
    bool placed = false;
    for (std::size_t gidx = 0; gidx < groups.targets.size(); ++gidx) {
      const double phi = alignment_phase(level_targets[n], groups.targets[gidx]);
      if ((std::exp(kI * phi) * level_targets[n] - groups.targets[gidx]).norm() <=
          tol) {
        groups.members[gidx].push_back(n);
        a.col(n) *= std::exp(-kI * phi);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.members.push_back({n});
      groups.targets.push_back(std::move(level_targets[n]));
    }
  }
  return groups;
}

}  // namespace detail

// Builds the controlled form from the Schmidt factors: a control-side basis
// pair (a, c) is found by jointly diagonalizing the Hermitian span of
// {A_k†A_l}; the matched left basis comes from the rank-1 columns of A_k·c.
// Levels whose target operators coincide up to phase are combined into
// higher-rank projectors. Throws ExtractionError when any structural
// residual exceeds tol.
inline ControlledForm extract_controlled_form(const OperatorSchmidt& os,
                                              double tol = kTolClassify) {
  const int d = os.d;
  const int r = os.rank;
  ControlledForm form;
  form.d = d;

  // Rank 1 is a product gate: a single full-support block.
  if (r == 1) {
    const double scale = std::sqrt(static_cast<double>(d));
    Matrix ua = scale * os.factors_a[0];
    Matrix target = (os.coeffs(0) / scale) * os.factors_b[0];
    if (unitarity_residual(ua) > tol || unitarity_residual(target) > tol) {
      throw ExtractionError("extract: rank-1 factors are not unitary");
    }
    form.u_a = std::move(ua);
    form.u_b = Matrix::Identity(d, d);
    form.v_a = Matrix::Identity(d, d);
    form.v_b = Matrix::Identity(d, d);
    form.blocks.push_back({Matrix::Identity(d, d), std::move(target)});
    return form;
  }

  // Right basis c: joint eigenbasis of the Hermitian generators of {A_k†A_l}.
  std::vector<Matrix> gens;
  for (int k = 0; k < r; ++k) {
    for (int l = k; l < r; ++l) {
      const Matrix t = os.factors_a[k].adjoint() * os.factors_a[l];
      gens.push_back(t + t.adjoint());
      if (l > k) gens.push_back(kI * (t - t.adjoint()));
    }
  }
  auto jd = joint_diagonalize_hermitian(std::move(gens));
  if (jd.offdiag_residual > tol) {
    throw ExtractionError("extract: joint diagonalization residual " +
                          std::to_string(jd.offdiag_residual));
  }
  const Matrix c = jd.v;

  // Left basis a, column-matched to c: the vectors {A_k·c_j}_k all lie on
  // the ray of a's j-th column, so take the dominant left singular vector.
  Matrix a(d, d);
  for (int j = 0; j < d; ++j) {
    Matrix w(d, r);
    for (int k = 0; k < r; ++k) w.col(k) = os.factors_a[k] * c.col(j);
    Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU);
    Vector col = svd.matrixU().col(0);
    detail::fix_vector_phase(col);
    a.col(j) = col;
  }
  if (unitarity_residual(a) > tol) {
    throw ExtractionError("extract: left control basis is not unitary");
  }

  // D_k = a†A_kc must be diagonal; its diagonal weights the target blocks.
  std::vector<Vector> diag(r);
  for (int k = 0; k < r; ++k) {
    const Matrix dk = a.adjoint() * os.factors_a[k] * c;
    double off = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) off += std::norm(dk(i, j));
    if (std::sqrt(off) > tol) {
      throw ExtractionError("extract: Schmidt factor not diagonalized, residual " +
                            std::to_string(std::sqrt(off)));
    }
    diag[k] = dk.diagonal();
  }

  std::vector<Matrix> level_targets(d);
  for (int n = 0; n < d; ++n) {
    Matrix cn = Matrix::Zero(d, d);
    for (int k = 0; k < r; ++k) {
      cn += os.coeffs(k) * diag[k](n) * os.factors_b[k];
    }
    if (unitarity_residual(cn) > tol) {
      throw ExtractionError("extract: target block " + std::to_string(n) +
                            " is not unitary");
    }
    level_targets[n] = std::move(cn);
  }

  auto groups = detail::group_levels(std::move(level_targets), a, tol);
  for (std::size_t gidx = 0; gidx < groups.targets.size(); ++gidx) {
    Matrix proj = Matrix::Zero(d, d);
    for (int n : groups.members[gidx]) {
      proj += basis_ket(n, d) * basis_ket(n, d).adjoint();
    }
    form.blocks.push_back({std::move(proj), groups.targets[gidx]});
  }
  form.u_a = a;
  form.u_b = Matrix::Identity(d, d);
  form.v_a = c.adjoint();
  form.v_b = Matrix::Identity(d, d);

  const double recon = (form.reconstruct() - os.reconstruct()).norm();
  if (recon > tol) {
    throw ExtractionError("extract: reconstruction residual " +
                          std::to_string(recon));
  }
  return form;
}

}  // namespace deloc
