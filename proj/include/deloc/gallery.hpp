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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "deloc/matrix.hpp"
#include "deloc/random.hpp"

namespace deloc {

inline Gate identity_gate(int d) {
  return Gate(d, Matrix::Identity(d * d, d * d));
}

// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ σx, control on A.
inline Gate cnot_gate() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return Gate(2, m);
}

inline Gate cz_gate() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return Gate(2, m);
}

// SWAP·(x ⊗ y) = y ⊗ x.
inline Gate swap_gate(int d) {
  if (d < 2) throw InvariantError("swap: d must be >= 2");
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i) * d + j,
        static_cast<Eigen::Index>(j) * d + i) = 1;
  return Gate(d, m);
}

// exp(iα Σ_j σ^j⊗σ^j) built from the exact eigendecomposition: the sum has
// eigenvalues {1,1,1,-3}, the -3 eigenvector being the singlet. No series.
inline Gate heisenberg_gate(double alpha) {
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  const Matrix p_singlet = singlet * singlet.adjoint();
  const Complex e1 = std::exp(kI * alpha);
  const Complex e3 = std::exp(-3.0 * kI * alpha);
  Matrix m = e1 * Matrix::Identity(4, 4) + (e3 - e1) * p_singlet;
  return Gate(2, m);
}

// |0⟩⟨0|⊗|0⟩⟨0| + |0⟩⟨1|⊗|1⟩⟨0| + |1⟩⟨0|⊗|0⟩⟨1| − |1⟩⟨1|⊗|1⟩⟨1|.
inline Gate adqc_gate() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = -1;
  return Gate(2, m);
}

// Controlled-unitary in a Haar-random control basis with Haar-random block
// targets, dressed by Haar-random locals on both sides. Always Class 1.
inline Gate controlled_random_gate(int d, int n_blocks, Rng& rng) {
  if (d < 2) throw InvariantError("controlled_random: d must be >= 2");
  if (n_blocks < 1 || n_blocks > d) {
    throw InvariantError("controlled_random: n_blocks must be in [1, d]");
  }
  const Matrix q = haar_random_unitary(d, rng);
  // Every block gets one level up front; the rest are assigned uniformly.
  std::vector<int> block_of(d);
  std::uniform_int_distribution<int> pick(0, n_blocks - 1);
  for (int j = 0; j < d; ++j) {
    block_of[j] = (j < n_blocks) ? j : pick(rng.engine());
  }
  Matrix core = Matrix::Zero(d * d, d * d);
  for (int n = 0; n < n_blocks; ++n) {
    Matrix proj = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      if (block_of[j] == n) proj += q.col(j) * q.col(j).adjoint();
    }
    core += kron(proj, haar_random_unitary(d, rng));
  }
  const Matrix a = haar_random_unitary(d, rng);
  const Matrix b = haar_random_unitary(d, rng);
  const Matrix c = haar_random_unitary(d, rng);
  const Matrix e = haar_random_unitary(d, rng);
  return Gate(d, kron(a, b) * core * kron(c, e));
}

inline Gate haar_gate(int d, Rng& rng) {
  if (d < 2) throw InvariantError("haar: d must be >= 2");
  return Gate(d, haar_random_unitary(d * d, rng));
}

// Random phases on the computational product basis; controlled from both sides.
inline Gate diagonal_random_gate(int d, Rng& rng) {
  if (d < 2) throw InvariantError("diagonal_random: d must be >= 2");
  Matrix m = Matrix::Zero(d * d, d * d);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    m(k, k) = std::exp(kI * angle(rng.engine()));
  }
  return Gate(d, m);
}

// ---------------------------------------------------------------------------
// GateSpec grammar: "name" or "name:key=value,key=value".
// ---------------------------------------------------------------------------

struct GateSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

inline GateSpec parse_gate_spec(const std::string& text) {
  GateSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw ParseError("gate spec: empty name");
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string item = rest.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
      throw ParseError("gate spec: expected key=value, got '" + item + "'");
    }
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return spec;
}

namespace detail {

class ParamReader {
 public:
  ParamReader(const GateSpec& spec) : spec_(spec) {}

  int get_int(const std::string& key, int fallback) {
    const std::string* raw = take(key);
    if (!raw) return fallback;
    try {
      std::size_t used = 0;
      const int v = std::stoi(*raw, &used);
      if (used != raw->size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("gate spec '" + spec_.name + "': parameter '" + key +
                       "' is not an integer: '" + *raw + "'");
    }
  }

  double get_real(const std::string& key, double fallback) {
    const std::string* raw = take(key);
    if (!raw) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(*raw, &used);
      if (used != raw->size() || !std::isfinite(v)) {
        throw std::invalid_argument("");
      }
      return v;
    } catch (const std::exception&) {
      throw ParseError("gate spec '" + spec_.name + "': parameter '" + key +
                       "' is not a real number: '" + *raw + "'");
    }
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    const std::string* raw = take(key);
    if (!raw) return fallback;
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(*raw, &used);
      if (used != raw->size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("gate spec '" + spec_.name + "': parameter '" + key +
                       "' is not an unsigned integer: '" + *raw + "'");
    }
  }

  // Rejects parameters the constructor did not consume.
  void finish() {
    for (const auto& [key, value] : spec_.params) {
      if (!consumed_.count(key)) {
        throw ParseError("gate spec '" + spec_.name + "': unknown parameter '" +
                         key + "'");
      }
    }
  }

 private:
  const std::string* take(const std::string& key) {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  const GateSpec& spec_;
  std::set<std::string> consumed_;
};

}  // namespace detail

inline std::vector<std::string> gallery_names() {
  return {"identity", "cnot",           "cz",   "swap",           "heisenberg",
          "adqc",     "controlled_random", "haar", "diagonal_random"};
}

inline Gate build_gate(const GateSpec& spec) {
  detail::ParamReader p(spec);
  if (spec.name == "identity") {
    const int d = p.get_int("d", 2);
    p.finish();
    return identity_gate(d);
  }
  if (spec.name == "cnot") {
    p.finish();
    return cnot_gate();
  }
  if (spec.name == "cz") {
    p.finish();
    return cz_gate();
  }
  if (spec.name == "swap") {
    const int d = p.get_int("d", 2);
    p.finish();
    return swap_gate(d);
  }
  if (spec.name == "heisenberg") {
    const double alpha = p.get_real("alpha", 0.0);
    p.finish();
    return heisenberg_gate(alpha);
  }
  if (spec.name == "adqc") {
    p.finish();
    return adqc_gate();
  }
  if (spec.name == "controlled_random") {
    const int d = p.get_int("d", 2);
    const int blocks = p.get_int("blocks", d >= 2 ? d : 2);
    const std::uint64_t seed = p.get_u64("seed", 0);
    p.finish();
    Rng rng(seed);
    return controlled_random_gate(d, blocks, rng);
  }
  if (spec.name == "haar") {
    const int d = p.get_int("d", 2);
    const std::uint64_t seed = p.get_u64("seed", 0);
    p.finish();
    Rng rng(seed);
    return haar_gate(d, rng);
  }
  if (spec.name == "diagonal_random") {
    const int d = p.get_int("d", 2);
    const std::uint64_t seed = p.get_u64("seed", 0);
    p.finish();
    Rng rng(seed);
    return diagonal_random_gate(d, rng);
  }
  throw ParseError("unknown gallery gate '" + spec.name + "'");
}

inline Gate build_gate(const std::string& spec_text) {
  return build_gate(parse_gate_spec(spec_text));
}

}  // namespace deloc
