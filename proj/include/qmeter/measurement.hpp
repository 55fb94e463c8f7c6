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

// Outcome statistics of a set of measurement operators and what a single
// outcome tells us about an unknown eigenstate input.
//
// Every estimate here assumes that each eigenstate of the estimated
// observable was equally likely to be the input. Under that prior the whole
// inference from outcome m is carried by R_m = M^dagger M / tr{M^dagger M}.

#pragma once

#include "qmeter/operator_core.hpp"
#include "qmeter/types.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace qmeter {

template <typename Real>
struct Outcome {
  std::string label;
  Matrix<Real> op;
};

/// Ordered measurement operators {M_m}, all square and of one dimension.
template <typename Real = double>
class KrausSet {
 public:
  KrausSet() = default;

  /// `declared_complete` records what the source claims; use
  /// validate_completeness() to check it. Single-operator "partial" sets are
  /// fine for characterizing one outcome.
  explicit KrausSet(std::vector<Outcome<Real>> outcomes, bool declared_complete = true)
      : outcomes_(std::move(outcomes)), declared_complete_(declared_complete) {
    if (outcomes_.empty()) throw Error(ErrorCode::InvalidArgument, "measurement set has no outcomes");
    const Index d = outcomes_.front().op.rows();
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      const auto& o = outcomes_[i];
      if (o.op.rows() == 0 || o.op.rows() != o.op.cols() || o.op.rows() != d) {
        throw Error(ErrorCode::DimensionMismatch, "outcome '" + o.label + "' is not a " + std::to_string(d) + "x" +
                                                      std::to_string(d) + " matrix");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (outcomes_[j].label == o.label) {
          throw Error(ErrorCode::InvalidArgument, "duplicate outcome label '" + o.label + "'");
        }
      }
    }
  }

  Index dim() const { return outcomes_.front().op.rows(); }
  std::size_t size() const { return outcomes_.size(); }
  bool declared_complete() const { return declared_complete_; }
  const std::vector<Outcome<Real>>& outcomes() const { return outcomes_; }
  const Outcome<Real>& operator[](std::size_t i) const { return outcomes_.at(i); }

  const Matrix<Real>& op(const std::string& label) const { return outcomes_[index_of(label)].op; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find_if(outcomes_.begin(), outcomes_.end(), [&](const auto& o) { return o.label == label; });
    if (it == outcomes_.end()) throw Error(ErrorCode::UnknownOutcome, "no outcome labelled '" + label + "'");
    return static_cast<std::size_t>(it - outcomes_.begin());
  }

 private:
  std::vector<Outcome<Real>> outcomes_;
  bool declared_complete_ = true;
};

template <typename Real>
struct CompletenessReport {
  Real max_deviation;
  Real tolerance;
  bool pass;
};

/// max-norm of sum_m M_m^dagger M_m - 1.
template <typename Real>
CompletenessReport<Real> validate_completeness(const KrausSet<Real>& set, Real tolerance = Real(tol::kCompleteness)) {
  const Index d = set.dim();
  Matrix<Real> sum = Matrix<Real>::Zero(d, d);
  for (const auto& o : set.outcomes()) sum.noalias() += o.op.adjoint() * o.op;
  sum -= Matrix<Real>::Identity(d, d);
  const Real dev = detail::max_abs<Real>(sum);
  return {dev, tolerance, dev <= tolerance};
}

namespace detail {

template <typename Real>
void require_density(const Matrix<Real>& rho, Index dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension does not match the measurement");
  }
  const Real tr_err = std::abs(rho.trace() - Complex<Real>(1));
  if (tr_err > Real(tol::kState)) throw Error(ErrorCode::InvalidState, "state trace differs from 1");
  if (max_abs<Real>(rho - rho.adjoint()) > Real(tol::kState)) {
    throw Error(ErrorCode::InvalidState, "state is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -Real(tol::kState)) {
    throw Error(ErrorCode::InvalidState, "state has a negative eigenvalue");
  }
}

/// tr{M^dagger M}, checked against the reachability threshold.
template <typename Real>
Real reachable_weight(const Matrix<Real>& m, Real threshold = Real(tol::kUnreachable)) {
  const Real w = m.squaredNorm();
  if (!(w >= threshold)) {
    throw Error(ErrorCode::UnreachableOutcome,
                "tr{M^dagger M} = " + std::to_string(static_cast<double>(w)) + " (outcome never occurs)");
  }
  return w;
}

/// Mean and variance of a Hermitian observable in the (unnormalized) state
/// F F^dagger / norm, computed as a Frobenius norm so the variance cannot go
/// negative.
template <typename Real, typename Factor>
std::pair<Real, Real> moments(const Matrix<Real>& a, const Factor& f, Real norm) {
  const Matrix<Real> af = a * f;
  const Real mean = (f.adjoint() * af).trace().real() / norm;
  const Real var = (af - mean * f).squaredNorm() / norm;
  return {mean, var};
}

}  // namespace detail

/// p(m) = tr{rho M^dagger M}
template <typename Real>
Real outcome_probability(const KrausSet<Real>& set, const Matrix<Real>& rho, const std::string& label) {
  const auto& m = set.op(label);
  detail::require_density(rho, set.dim());
  return (rho * m.adjoint() * m).trace().real();
}

/// M rho M^dagger / p(m)
template <typename Real>
Matrix<Real> post_measurement_state(const KrausSet<Real>& set, const Matrix<Real>& rho, const std::string& label) {
  const auto& m = set.op(label);
  detail::require_density(rho, set.dim());
  const Real p = (rho * m.adjoint() * m).trace().real();
  if (!(p > Real(tol::kUnreachable))) {
    throw Error(ErrorCode::ZeroProbabilityOutcome, "outcome '" + label + "' has zero probability for this state");
  }
  return m * rho * m.adjoint() / p;
}

/// Normalized statistical operator of one outcome; a "time-reversed" density
/// matrix describing what the outcome implies about the input.
template <typename Real = double>
struct RetrodictiveOperator {
  Matrix<Real> matrix;
  std::string source_outcome;

  Real expectation(const Matrix<Real>& a) const { return (a * matrix).trace().real(); }
};

template <typename Real>
RetrodictiveOperator<Real> retrodictive_operator(const Matrix<Real>& m, std::string label = {}) {
  detail::require_square(m, "measurement operator");
  const Real w = detail::reachable_weight(m);
  return {m.adjoint() * m / w, std::move(label)};
}

template <typename Real>
struct EigenvalueProbability {
  Real value;
  Real probability;
};

/// p(A|m) over the distinct eigenvalues of A. Degenerate eigenspaces are
/// aggregated, i.e. p = tr{P_A M^dagger M} / tr{M^dagger M}.
template <typename Real>
std::vector<EigenvalueProbability<Real>> conditional_input_distribution(const Matrix<Real>& m,
                                                                        const HermitianObservable<Real>& a) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, a.matrix(), "measurement operator vs observable");
  const Real w = detail::reachable_weight(m);
  const Matrix<Real> mv = m * a.eigenvectors();
  std::vector<EigenvalueProbability<Real>> out;
  out.reserve(a.eigenspaces().size());
  for (const auto& g : a.eigenspaces()) {
    out.push_back({g.value, mv.middleCols(g.first, g.count).squaredNorm() / w});
  }
  return out;
}

template <typename Real = double>
struct EstimateReport {
  Real estimate;  // A_m
  Real error;     // delta A_m^2, never negative
};

/// Optimal estimate A_m = tr{A R_m} and its resolution
/// delta A_m^2 = tr{A^2 R_m} - A_m^2.
template <typename Real>
EstimateReport<Real> optimal_estimate(const Matrix<Real>& m, const HermitianObservable<Real>& a) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, a.matrix(), "measurement operator vs observable");
  const Real w = detail::reachable_weight(m);
  // tr{X M^dagger M X} = ||M X||_F^2 with M^dagger playing the factor role.
  const Matrix<Real> md = m.adjoint();
  auto [mean, var] = detail::moments<Real>(a.matrix(), md, w);
  return {mean, detail::clamp_variance(var)};
}

/// Average quadratic error tr{(value - A)^2 R_m} of assigning `value` to
/// outcome m. Minimal at value = A_m.
template <typename Real>
Real quadratic_error(const Matrix<Real>& m, const HermitianObservable<Real>& a, Real value) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, a.matrix(), "measurement operator vs observable");
  const Real w = detail::reachable_weight(m);
  const Matrix<Real> shifted = m * (Matrix<Real>::Identity(m.rows(), m.rows()) * value - a.matrix());
  return shifted.squaredNorm() / w;
}

template <typename Real = double>
struct ResolutionPairReport {
  Real resolution_a;  // delta A_m^2
  Real resolution_b;  // delta B_m^2
  Real bound;         // |tr{R_m [A, B]}|^2 / 4
  Real slack;         // product - bound
  bool satisfied;
};

/// Joint-resolution relation delta A_m^2 delta B_m^2 >= |tr{R_m [A,B]}|^2 / 4.
template <typename Real>
ResolutionPairReport<Real> resolution_pair_check(const Matrix<Real>& m, const HermitianObservable<Real>& a,
                                                 const HermitianObservable<Real>& b,
                                                 Real slack_tol = Real(tol::kRelationSlack)) {
  detail::require_same_dim(a.matrix(), b.matrix(), "observable A vs B");
  const auto ea = optimal_estimate(m, a);
  const auto eb = optimal_estimate(m, b);
  const Real w = m.squaredNorm();
  const Matrix<Real> c = commutator(a.matrix(), b.matrix());
  const Complex<Real> expect = (m * c * m.adjoint()).trace() / w;
  const Real bound = std::norm(expect) / Real(4);
  const Real slack = ea.error * eb.error - bound;
  return {ea.error, eb.error, bound, slack, slack >= -slack_tol};
}

}  // namespace qmeter
