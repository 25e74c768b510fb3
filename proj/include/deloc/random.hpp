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
#include <random>
#include <utility>

#include "deloc/matrix.hpp"

namespace deloc {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Seedable, reproducible generator. Single-owner: callers pass one Rng per
// thread of work; independent streams come from derive().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream for (seed, index); the first k streams of a run are
  // identical regardless of how many streams are drawn in total.
  Rng derive(std::uint64_t index) const {
    return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(index + 1)));
  }

  double gaussian() { return normal_(engine_); }

  Complex gaussian_complex() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re, im};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Matrix ginibre_matrix(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.gaussian_complex();
  return g;
}

// Haar-distributed unitary via QR of a Ginibre matrix with the R diagonal
// phase fixed (Mezzadri's construction).
inline Matrix haar_random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw InvariantError("haar_random_unitary: dim must be >= 1");
  const Matrix g = ginibre_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const Complex phase = (std::abs(rjj) > 0.0) ? rjj / std::abs(rjj) : 1.0;
    q.col(j) *= phase;
  }
  return q;
}

inline Matrix haar_random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(dim, rng);
}

// Haar-uniform unit vector (normalized complex Gaussian).
inline PureState haar_random_state(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.gaussian_complex();
  return PureState::normalized(std::move(v));
}

inline std::pair<PureState, PureState> random_product_state(int d, Rng& rng) {
  if (d < 2) throw InvariantError("random_product_state: d must be >= 2");
  PureState a = haar_random_state(d, rng);
  PureState b = haar_random_state(d, rng);
  return {std::move(a), std::move(b)};
}

inline std::pair<PureState, PureState> random_product_state(int d,
                                                            std::uint64_t seed) {
  Rng rng(seed);
  return random_product_state(d, rng);
}

}  // namespace deloc
