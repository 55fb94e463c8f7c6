// Copyright 2026 The qmeter Authors
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

// Counter-based random streams and random operator generators.
//
// Output of stream (seed, id) at position k is splitmix64 finalization of
// key(seed, id) + (k + 1) * golden_gamma, so any trial can be replayed on its
// own and the numbers are identical on every platform. Uniform doubles take
// the top 53 bits; normals use Box-Muller. The standard <random>
// distributions are not used because their outputs are implementation defined.

#pragma once

#include "qmeter/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qmeter {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() { return splitmix64(key_ + (++counter_) * kGamma); }

  /// [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0;
  bool has_spare_ = false;
};

/// Ginibre matrix: i.i.d. standard complex normal entries.
template <typename Real = double>
Matrix<Real> random_ginibre(CounterRng& rng, Index rows, Index cols) {
  Matrix<Real> m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const Real re = Real(rng.normal());
      const Real im = Real(rng.normal());
      m(i, j) = Complex<Real>(re, im) / std::sqrt(Real(2));
    }
  }
  return m;
}

/// Haar-random unitary (QR of a Ginibre matrix with the phases of R removed).
template <typename Real = double>
Matrix<Real> random_unitary(CounterRng& rng, Index dim) {
  const Matrix<Real> g = random_ginibre<Real>(rng, dim, dim);
  Eigen::HouseholderQR<Matrix<Real>> qr(g);
  Matrix<Real> q = qr.householderQ();
  const Matrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const Real mag = std::abs(r(k, k));
    if (mag > Real(0)) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// GUE-like Hermitian matrix (G + G^dagger) / 2.
template <typename Real = double>
Matrix<Real> random_hermitian(CounterRng& rng, Index dim) {
  const Matrix<Real> g = random_ginibre<Real>(rng, dim, dim);
  return (g + g.adjoint()) / Real(2);
}

/// Hermitian matrix with an integer spectrum containing repeated values,
/// rotated by a random unitary.
template <typename Real = double>
Matrix<Real> random_degenerate_hermitian(CounterRng& rng, Index dim) {
  const Index distinct = std::max<Index>(1, dim / 2);
  RealVector<Real> spectrum(dim);
  for (Index k = 0; k < dim; ++k) spectrum(k) = Real(static_cast<int>(rng.below(static_cast<std::uint64_t>(distinct))) - distinct / 2);
  const Matrix<Real> u = random_unitary<Real>(rng, dim);
  Matrix<Real> h = u * spectrum.template cast<Complex<Real>>().asDiagonal() * u.adjoint();
  return (h + h.adjoint()) / Real(2);
}

/// Single measurement operator: Ginibre with a random rank in [1, dim].
template <typename Real = double>
Matrix<Real> random_kraus_operator(CounterRng& rng, Index dim) {
  const Index rank = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dim)));
  return random_ginibre<Real>(rng, dim, rank) * random_ginibre<Real>(rng, rank, dim) / std::sqrt(Real(dim));
}

template <typename Real = double>
Vector<Real> random_state_vector(CounterRng& rng, Index dim) {
  Vector<Real> v = random_ginibre<Real>(rng, dim, 1).col(0);
  return v / v.norm();
}

template <typename Real = double>
Matrix<Real> random_density_matrix(CounterRng& rng, Index dim) {
  const Matrix<Real> g = random_ginibre<Real>(rng, dim, dim);
  Matrix<Real> rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / Real(2);
}

/// Complete set of `outcomes` operators: blocks of an isometry V (V^dagger V = 1)
/// from a Haar unitary on dim * outcomes, so sum_m M_m^dagger M_m = 1.
template <typename Real = double>
std::vector<Matrix<Real>> random_complete_set(CounterRng& rng, Index dim, Index outcomes) {
  const Matrix<Real> u = random_unitary<Real>(rng, dim * outcomes);
  std::vector<Matrix<Real>> ops;
  for (Index m = 0; m < outcomes; ++m) ops.push_back(u.block(m * dim, 0, dim, dim));
  return ops;
}

}  // namespace qmeter
