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

// Complex-matrix helpers, Hermitian spectral decomposition and truncated
// bosonic operators.

#pragma once

#include "qmeter/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <vector>

namespace qmeter {

/// A run of eigenvectors sharing one eigenvalue (within the degeneracy
/// tolerance). Columns [first, first + count) of the eigenvector matrix.
template <typename Real>
struct Eigenspace {
  Real value;
  Index first;
  Index count;
};

/// Hermitian matrix with its cached spectral decomposition.
///
/// Eigenvalues are ascending; vectors of a degenerate eigenspace form an
/// arbitrary orthonormal basis of it. Anything computed downstream must only
/// depend on the eigenprojectors, which is why the grouping into eigenspaces
/// is exposed.
template <typename Real = double>
class HermitianObservable {
 public:
  HermitianObservable() = default;

  const Matrix<Real>& matrix() const { return matrix_; }
  const RealVector<Real>& eigenvalues() const { return eigenvalues_; }
  const Matrix<Real>& eigenvectors() const { return eigenvectors_; }
  const std::vector<Eigenspace<Real>>& eigenspaces() const { return eigenspaces_; }
  Index dim() const { return matrix_.rows(); }

  /// Eigenvalue assigned to eigenvector column k (the eigenspace value).
  Real value_of(Index k) const { return grouped_values_(k); }
  const RealVector<Real>& grouped_values() const { return grouped_values_; }

  /// Columns of one eigenspace.
  auto eigenspace_basis(std::size_t group) const {
    const auto& g = eigenspaces_.at(group);
    return eigenvectors_.middleCols(g.first, g.count);
  }

  Matrix<Real> projector(std::size_t group) const {
    const auto basis = eigenspace_basis(group);
    return basis * basis.adjoint();
  }

  static HermitianObservable from_matrix(const Matrix<Real>& m, Real hermiticity_tol, Real degeneracy_tol);

 private:
  Matrix<Real> matrix_;
  RealVector<Real> eigenvalues_;
  RealVector<Real> grouped_values_;
  Matrix<Real> eigenvectors_;
  std::vector<Eigenspace<Real>> eigenspaces_;
};

template <typename Real>
HermitianObservable<Real> HermitianObservable<Real>::from_matrix(const Matrix<Real>& m, Real hermiticity_tol,
                                                                 Real degeneracy_tol) {
  detail::require_square(m, "observable");
  const Real asym = detail::max_abs<Real>(m - m.adjoint());
  if (!(asym <= hermiticity_tol)) {
    throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| = " + std::to_string(static_cast<double>(asym)));
  }
  HermitianObservable out;
  out.matrix_ = (m + m.adjoint()) / Real(2);

  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(out.matrix_);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DecompositionFailure, "self-adjoint eigensolver did not converge");
  }
  out.eigenvalues_ = solver.eigenvalues();
  out.eigenvectors_ = solver.eigenvectors();

  const Index d = out.matrix_.rows();
  const Real scale = std::max(Real(1), out.eigenvalues_.cwiseAbs().maxCoeff());
  out.grouped_values_.resize(d);
  Index start = 0;
  for (Index k = 1; k <= d; ++k) {
    if (k == d || out.eigenvalues_(k) - out.eigenvalues_(k - 1) > degeneracy_tol * scale) {
      const Index count = k - start;
      const Real mean = out.eigenvalues_.segment(start, count).mean();
      out.eigenspaces_.push_back({mean, start, count});
      out.grouped_values_.segment(start, count).setConstant(mean);
      start = k;
    }
  }
  return out;
}

template <typename Real>
HermitianObservable<Real> eigendecompose(const Matrix<Real>& m, Real hermiticity_tol = Real(tol::kHermiticity),
                                         Real degeneracy_tol = Real(tol::kDegeneracy)) {
  return HermitianObservable<Real>::from_matrix(m, hermiticity_tol, degeneracy_tol);
}

/// [a, b] = ab - ba
template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator operands must be square and of equal dimension");
  }
  Plain out = a * b - b * a;
  return out;
}

/// a b + b a
template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "anticommutator operands must be square and of equal dimension");
  }
  Plain out = a * b + b * a;
  return out;
}

// ---------------------------------------------------------------------------
// Small fixed operators

template <typename Real = double>
Matrix<Real> pauli_x() {
  Matrix<Real> m(2, 2);
  m << Real(0), Real(1), Real(1), Real(0);
  return m;
}

template <typename Real = double>
Matrix<Real> pauli_y() {
  Matrix<Real> m(2, 2);
  m << Real(0), Complex<Real>(0, -1), Complex<Real>(0, 1), Real(0);
  return m;
}

template <typename Real = double>
Matrix<Real> pauli_z() {
  Matrix<Real> m(2, 2);
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

template <typename Real = double>
Vector<Real> basis_ket(Index dim, Index k) {
  if (k < 0 || k >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Vector<Real> v = Vector<Real>::Zero(dim);
  v(k) = Real(1);
  return v;
}

/// |ket><bra|
template <typename Real>
Matrix<Real> outer(const Vector<Real>& ket, const Vector<Real>& bra) {
  return ket * bra.adjoint();
}

// ---------------------------------------------------------------------------
// Truncated Fock space

/// Fock levels 0..N-1.
class BosonicSpace {
 public:
  explicit BosonicSpace(Index truncation) : n_(truncation) {
    if (truncation < 2) throw Error(ErrorCode::InvalidArgument, "bosonic truncation must be >= 2");
  }
  Index dim() const { return n_; }

 private:
  Index n_;
};

template <typename Real>
struct BosonicOperators {
  Matrix<Real> lowering;  // a
  Matrix<Real> number;    // a^dagger a
  Matrix<Real> x;         // (a + a^dagger) / 2
  Matrix<Real> y;         // (a - a^dagger) / 2i
};

/// Quadratures follow [x, y] = i/2, so the vacuum variance is 1/4. Truncation
/// spoils the commutator only in the last diagonal entry.
template <typename Real = double>
BosonicOperators<Real> bosonic_operators(const BosonicSpace& space) {
  const Index n = space.dim();
  BosonicOperators<Real> ops;
  ops.lowering = Matrix<Real>::Zero(n, n);
  ops.number = Matrix<Real>::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    ops.number(k, k) = Real(k);
    if (k + 1 < n) ops.lowering(k, k + 1) = std::sqrt(Real(k + 1));
  }
  const Matrix<Real> raising = ops.lowering.adjoint();
  ops.x = (ops.lowering + raising) / Real(2);
  ops.y = (ops.lowering - raising) / Complex<Real>(0, 2);
  return ops;
}

template <typename Real>
struct CoherentState {
  Vector<Real> amplitudes;  // renormalized over the retained levels
  Real tail_mass;           // Poisson weight beyond the truncation
};

template <typename Real = double>
CoherentState<Real> coherent_state(Complex<Real> alpha, const BosonicSpace& space,
                                   Real tail_threshold = Real(tol::kCoherentTail)) {
  const Index n = space.dim();
  const Real mean = std::norm(alpha);
  Vector<Real> c(n);
  c(0) = std::exp(-mean / Real(2));
  for (Index k = 1; k < n; ++k) c(k) = c(k - 1) * alpha / std::sqrt(Real(k));

  // Sum the Poisson tail directly; 1 - sum|c|^2 would drown in rounding.
  Real tail = 0;
  Real term = std::norm(c(n - 1)) * mean / Real(n);
  for (Index k = n; k < n + 1000000; ++k) {
    tail += term;
    const bool decreasing = Real(k + 1) > mean;
    if (decreasing && term <= std::numeric_limits<Real>::min()) break;
    if (decreasing && term < std::numeric_limits<Real>::epsilon() * tail * Real(1e-4)) break;
    term *= mean / Real(k + 1);
  }
  if (mean == Real(0)) tail = 0;
  if (tail > tail_threshold) {
    throw Error(ErrorCode::TruncationError, "coherent-state tail mass " + std::to_string(static_cast<double>(tail)) +
                                                " exceeds threshold at N=" + std::to_string(n));
  }
  CoherentState<Real> out;
  out.amplitudes = c / c.norm();
  out.tail_mass = tail;
  return out;
}

}  // namespace qmeter
