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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qmeter {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Default thresholds. Every one of these can be overridden per call and from
// the command line.
namespace tol {
inline constexpr double kHermiticity = 1e-9;     // max-norm of M - M^dagger
inline constexpr double kDegeneracy = 1e-9;      // eigenvalues closer than this share an eigenspace
inline constexpr double kUnreachable = 1e-14;    // tr{M^dagger M} below this: outcome never occurs
inline constexpr double kVarianceClamp = 1e-12;  // negative variances above -this are rounding
inline constexpr double kCompleteness = 1e-10;   // max-norm of sum M^dagger M - 1
inline constexpr double kRelationSlack = 1e-10;  // uncertainty relations checked with this slack
inline constexpr double kIdentity = 1e-10;       // structural identities (decompositions, trace forms)
inline constexpr double kMixture = 1e-12;        // mixture-averaging lemma
inline constexpr double kCoherentTail = 1e-8;    // truncated coherent-state norm loss
inline constexpr double kState = 1e-9;           // density-matrix trace / positivity checks
}  // namespace tol

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  DecompositionFailure,
  UnknownOutcome,
  InvalidState,
  ZeroProbabilityOutcome,
  UnreachableOutcome,
  UnreachableSequence,
  TruncationError,
  InvalidWeights,
  PreconditionViolated,
  CompletenessUnachievable,
  IncompleteKrausSet,
  NonUnitState,
  InternalConsistency,
  ParseError,
  UnknownObservable,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::UnreachableOutcome: return "UnreachableOutcome";
    case ErrorCode::UnreachableSequence: return "UnreachableSequence";
    case ErrorCode::TruncationError: return "TruncationError";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::CompletenessUnachievable: return "CompletenessUnachievable";
    case ErrorCode::IncompleteKrausSet: return "IncompleteKrausSet";
    case ErrorCode::NonUnitState: return "NonUnitState";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownObservable: return "UnknownObservable";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

template <typename Real>
void require_square(const Matrix<Real>& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

template <typename Real>
void require_same_dim(const Matrix<Real>& a, const Matrix<Real>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

// Variances are reported as non-negative; small negative values are rounding.
template <typename Real>
Real clamp_variance(Real v, Real clamp_tol = Real(tol::kVarianceClamp)) {
  if (v >= Real(0)) return v;
  if (v >= -clamp_tol) return Real(0);
  throw Error(ErrorCode::InternalConsistency, "negative variance " + std::to_string(static_cast<double>(v)));
}

template <typename Real>
Real max_abs(const Matrix<Real>& m) {
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

}  // namespace qmeter
