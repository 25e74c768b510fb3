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

#include <cstdint>
#include <optional>
#include <vector>

#include "deloc/controlled_form.hpp"
#include "deloc/gallery.hpp"
#include "deloc/matrix.hpp"
#include "deloc/random.hpp"

namespace deloc {

inline double check_completeness(const std::vector<Matrix>& ops) {
  if (ops.empty()) throw InvariantError("check_completeness: no operators");
  const Eigen::Index n = ops.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& m : ops) {
    if (m.rows() != n || m.cols() != n) {
      throw InvariantError("check_completeness: inconsistent dimensions");
    }
    sum += m.adjoint() * m;
  }
  return (sum - Matrix::Identity(n, n)).norm();
}

// Alice's measurement {M^n} with Bob's conditional corrections {w^n};
// one classical message, Alice to Bob.
struct OneWayProtocol {
  int d = 0;
  std::vector<Matrix> alice_ops;
  std::vector<Matrix> bob_corrections;

  void validate(double tol = kTolVerify) const {
    if (alice_ops.empty() || alice_ops.size() != bob_corrections.size()) {
      throw InvariantError("OneWayProtocol: branch lists empty or mismatched");
    }
    if (check_completeness(alice_ops) > tol) {
      throw InvariantError("OneWayProtocol: measurement not complete");
    }
    for (const auto& w : bob_corrections) {
      if (unitarity_residual(w) > kTolUnitary * 10) {
        throw InvariantError("OneWayProtocol: correction not unitary");
      }
    }
  }
};

// Alice measures {P^m·u_a†}, Bob undoes (u_b·u^m·v_b) on hearing m.
inline OneWayProtocol synthesize_protocol(const ControlledForm& cf) {
  cf.validate();
  OneWayProtocol proto;
  proto.d = cf.d;
  for (const auto& blk : cf.blocks) {
    proto.alice_ops.push_back(blk.projector * cf.u_a.adjoint());
    proto.bob_corrections.push_back((cf.u_b * blk.target * cf.v_b).adjoint());
  }
  proto.validate();
  return proto;
}

struct BranchOutcome {
  int outcome = 0;
  double probability = 0.0;
  // Fidelity of Bob's reduced state with his input; -1 on skipped branches.
  double bob_fidelity = -1.0;
  // Normalized reduced state left on Alice's side; empty on skipped branches.
  Matrix alice_residual;
};

// One protocol run: branch vectors (M^n⊗w^n)·U·(ψ_A⊗ψ_B) with probabilities,
// Bob-side fidelities and Alice residual states.
inline std::vector<BranchOutcome> simulate_branches(const Gate& g,
                                                    const OneWayProtocol& p,
                                                    const PureState& psi_a,
                                                    const PureState& psi_b,
                                                    double p_floor = kProbFloor) {
  const int d = g.d;
  if (p.d != d || psi_a.dim() != d || psi_b.dim() != d) {
    throw InvariantError("simulate_branches: dimension mismatch");
  }
  const Vector input = g.matrix * kron_vec(psi_a.amplitudes, psi_b.amplitudes);
  std::vector<BranchOutcome> out;
  out.reserve(p.alice_ops.size());
  for (std::size_t n = 0; n < p.alice_ops.size(); ++n) {
    const Vector branch = kron(p.alice_ops[n], p.bob_corrections[n]) * input;
    BranchOutcome rec;
    rec.outcome = static_cast<int>(n);
    rec.probability = branch.squaredNorm();
    if (rec.probability > p_floor) {
      const Vector normalized = branch / branch.norm();
      const Matrix rho_b = reduced_density(normalized, d, d, Side::B);
      rec.bob_fidelity = state_fidelity(psi_b, rho_b);
      rec.alice_residual = reduced_density(normalized, d, d, Side::A);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

struct SimulationReport {
  std::vector<BranchOutcome> branches;  // first trial, as a representative
  double min_fidelity = 1.0;
  double mean_fidelity = 0.0;
  double max_prob_sum_error = 0.0;
  double max_alice_drift = 0.0;  // trace-distance spread across ψ_B draws
  bool verdict = false;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Randomized verification of Eq-style relocalization: every significant
// branch must return Bob's input exactly, and for a fixed ψ_A the residual
// Alice states must not depend on ψ_B.
inline SimulationReport verify_relocalization(const Gate& g,
                                              const OneWayProtocol& p,
                                              int trials, std::uint64_t seed,
                                              double tol_verify = kTolVerify,
                                              double p_floor = kProbFloor) {
  if (trials < 1) throw InvariantError("verify_relocalization: trials < 1");
  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.min_fidelity = 1.0;

  Rng root(seed);
  bool ok = true;
  double fid_sum = 0.0;
  int fid_count = 0;

  std::optional<PureState> fixed_a;
  // alice_reference[n]: residual on branch n for the fixed ψ_A (or nullopt
  // for branches that never fire).
  std::vector<std::optional<Matrix>> alice_reference(p.alice_ops.size());

  for (int t = 0; t < trials; ++t) {
    Rng rng = root.derive(static_cast<std::uint64_t>(t));
    auto [psi_a, psi_b] = random_product_state(g.d, rng);
    if (!fixed_a) fixed_a = psi_a;

    auto branches = simulate_branches(g, p, psi_a, psi_b, p_floor);
    double prob_sum = 0.0;
    for (const auto& br : branches) {
      prob_sum += br.probability;
      if (br.probability > p_floor) {
        fid_sum += br.bob_fidelity;
        ++fid_count;
        report.min_fidelity = std::min(report.min_fidelity, br.bob_fidelity);
        if (br.bob_fidelity < 1.0 - tol_verify) ok = false;
      }
    }
    report.max_prob_sum_error =
        std::max(report.max_prob_sum_error, std::abs(prob_sum - 1.0));

    // Re-run with the fixed ψ_A and this trial's ψ_B: Alice's residual per
    // branch must be invariant.
    auto fixed_branches = simulate_branches(g, p, *fixed_a, psi_b, p_floor);
    for (std::size_t n = 0; n < fixed_branches.size(); ++n) {
      const auto& br = fixed_branches[n];
      if (br.probability <= p_floor) {
        if (alice_reference[n].has_value()) ok = false;  // branch vanished
        continue;
      }
      if (!alice_reference[n].has_value()) {
        if (t > 0) ok = false;  // branch appeared late
        alice_reference[n] = br.alice_residual;
        continue;
      }
      const double drift = trace_distance(*alice_reference[n], br.alice_residual);
      report.max_alice_drift = std::max(report.max_alice_drift, drift);
      if (drift > tol_verify) ok = false;
    }

    if (t == 0) report.branches = std::move(branches);
  }

  report.mean_fidelity = fid_count > 0 ? fid_sum / fid_count : 0.0;
  report.verdict = ok;
  return report;
}

struct AncillaBranch {
  int outcome = 0;
  double probability = 0.0;
  double phi_plus_fidelity = -1.0;
};

struct AncillaReport {
  std::vector<AncillaBranch> branches;
  double min_fidelity = 1.0;
  double prob_sum_error = 0.0;
  bool verdict = false;
};

// Ancilla formulation: inputs maximally entangled with local ancillas stand
// in for all inputs at once. Each branch must leave (B,b) in |Φ+⟩ exactly,
// which is the K·K† ∝ I statement in operator form.
inline AncillaReport verify_ancilla_mode(const Gate& g, const OneWayProtocol& p,
                                         double tol_verify = kTolVerify,
                                         double p_floor = kProbFloor) {
  const int d = g.d;
  if (p.d != d) throw InvariantError("verify_ancilla_mode: dimension mismatch");
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;

  // Factor ordering (A, B, a, b); the gate and the branch operators act on
  // the leading (A, B) pair.
  Vector init = Vector::Zero(d2 * d2);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Eigen::Index idx = ((static_cast<Eigen::Index>(i) * d + j) * d + i) * d + j;
      init(idx) = 1.0 / d;
    }
  }
  const Matrix id_ancilla = Matrix::Identity(d2, d2);
  const Vector evolved = kron(g.matrix, id_ancilla) * init;

  Vector phi_plus = Vector::Zero(d2);
  for (int k = 0; k < d; ++k) {
    phi_plus(static_cast<Eigen::Index>(k) * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  }

  AncillaReport report;
  double prob_sum = 0.0;
  bool ok = true;
  for (std::size_t n = 0; n < p.alice_ops.size(); ++n) {
    const Vector branch =
        kron(kron(p.alice_ops[n], p.bob_corrections[n]), id_ancilla) * evolved;
    AncillaBranch rec;
    rec.outcome = static_cast<int>(n);
    rec.probability = branch.squaredNorm();
    prob_sum += rec.probability;
    if (rec.probability > p_floor) {
      const Vector v = branch / branch.norm();
      // ρ_{Bb}[(iB,ib),(jB,jb)] = Σ_{iA,ia} v[iA,iB,ia,ib]·conj(v[iA,jB,ia,jb])
      Matrix rho_bb = Matrix::Zero(d2, d2);
      for (int ib_ = 0; ib_ < d; ++ib_)
        for (int bb = 0; bb < d; ++bb)
          for (int jb = 0; jb < d; ++jb)
            for (int cb = 0; cb < d; ++cb)
              for (int ia = 0; ia < d; ++ia)
                for (int aa = 0; aa < d; ++aa) {
                  const Eigen::Index row =
                      ((static_cast<Eigen::Index>(ia) * d + ib_) * d + aa) * d + bb;
                  const Eigen::Index col =
                      ((static_cast<Eigen::Index>(ia) * d + jb) * d + aa) * d + cb;
                  rho_bb(static_cast<Eigen::Index>(ib_) * d + bb,
                         static_cast<Eigen::Index>(jb) * d + cb) +=
                      v(row) * std::conj(v(col));
                }
      rec.phi_plus_fidelity =
          std::clamp((phi_plus.adjoint() * rho_bb * phi_plus)(0).real(), 0.0, 1.0);
      report.min_fidelity = std::min(report.min_fidelity, rec.phi_plus_fidelity);
      if (rec.phi_plus_fidelity < 1.0 - tol_verify) ok = false;
    }
    report.branches.push_back(rec);
  }
  report.prob_sum_error = std::abs(prob_sum - 1.0);
  if (report.prob_sum_error > tol_verify) ok = false;
  report.verdict = ok;
  return report;
}

// The fixed measurement {|+⟩⟨+|, |−⟩⟨−|} with corrections {H, σz·H}.
inline OneWayProtocol adqc_fixed_protocol() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus(2), minus(2);
  plus << s, s;
  minus << s, -s;
  OneWayProtocol proto;
  proto.d = 2;
  proto.alice_ops = {plus * plus.adjoint(), minus * minus.adjoint()};
  proto.bob_corrections = {hadamard(), pauli_z() * hadamard()};
  proto.validate();
  return proto;
}

struct AdqcReport {
  double min_fidelity = 1.0;
  double mean_fidelity = 0.0;
  double max_prob_sum_error = 0.0;
  bool verdict = false;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<BranchOutcome> branches;  // first trial
};

// Runs the fixed-ψ_A protocol on the ancilla-driven-computation gate over
// random ψ_B. With ψ_A = |+⟩ every branch hands Bob his input back even
// though the gate is Class 2 for unknown ψ_A.
inline AdqcReport adqc_fixed_input_report(const PureState& psi_a, int trials,
                                          std::uint64_t seed,
                                          double tol_verify = kTolVerify) {
  const Gate gate = adqc_gate();
  const OneWayProtocol proto = adqc_fixed_protocol();
  AdqcReport report;
  report.trials = trials;
  report.seed = seed;
  Rng root(seed);
  bool ok = true;
  double fid_sum = 0.0;
  int fid_count = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.derive(static_cast<std::uint64_t>(t));
    const PureState psi_b = haar_random_state(2, rng);
    auto branches = simulate_branches(gate, proto, psi_a, psi_b);
    double prob_sum = 0.0;
    for (const auto& br : branches) {
      prob_sum += br.probability;
      if (br.probability > kProbFloor) {
        fid_sum += br.bob_fidelity;
        ++fid_count;
        report.min_fidelity = std::min(report.min_fidelity, br.bob_fidelity);
        if (br.bob_fidelity < 1.0 - tol_verify) ok = false;
      }
    }
    report.max_prob_sum_error =
        std::max(report.max_prob_sum_error, std::abs(prob_sum - 1.0));
    if (t == 0) report.branches = std::move(branches);
  }
  report.mean_fidelity = fid_count > 0 ? fid_sum / fid_count : 0.0;
  report.verdict = ok;
  return report;
}

inline AdqcReport adqc_scenario(int trials = 50, std::uint64_t seed = 421) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus(2);
  plus << s, s;
  return adqc_fixed_input_report(PureState(plus), trials, seed);
}

}  // namespace deloc
