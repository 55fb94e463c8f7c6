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

// Back action of an outcome M_m on an observable B, probed by a precise
// projective B measurement on the output.
//
// The sequence (m, B_f) is described by the joint statistical operator
//   R_mf = M^dagger P_f M / tr{M^dagger P_f M}
// where P_f projects onto the B_f eigenspace. For a nondegenerate B_f this is
// the pure state |r_mf> = M^dagger |B_f> / norm. Sequences are grouped by
// eigenvalue so nothing depends on the basis chosen inside an eigenspace.

#pragma once

#include "qmeter/measurement.hpp"
#include "qmeter/mixture.hpp"
#include "qmeter/operator_core.hpp"
#include "qmeter/types.hpp"

#include <optional>
#include <vector>

namespace qmeter {

template <typename Real = double>
struct JointRetrodiction {
  std::size_t final_index;  // eigenspace of B
  Real final_value;         // B_f
  Real weight;              // w_m(B_f)
  Matrix<Real> factor;      // R_mf = factor * factor^dagger
  std::optional<Vector<Real>> state;  // |r_mf>, present for a one-dimensional eigenspace

  Matrix<Real> statistical_matrix() const { return factor * factor.adjoint(); }
};

namespace detail {

template <typename Real>
bool sequence_reachable(Real sequence_norm, Real outcome_norm) {
  return outcome_norm >= Real(tol::kUnreachable) && sequence_norm >= Real(tol::kUnreachable) * outcome_norm;
}

template <typename Real>
std::optional<JointRetrodiction<Real>> try_joint(const Matrix<Real>& md_v, const HermitianObservable<Real>& b,
                                                 std::size_t group, Real outcome_norm) {
  const auto& g = b.eigenspaces().at(group);
  const auto cols = md_v.middleCols(g.first, g.count);
  const Real norm = cols.squaredNorm();
  if (!sequence_reachable(norm, outcome_norm)) return std::nullopt;
  JointRetrodiction<Real> r{group, g.value, norm / outcome_norm, cols / std::sqrt(norm), std::nullopt};
  if (g.count == 1) r.state = r.factor.col(0);
  return r;
}

}  // namespace detail

/// Joint retrodiction for the sequence "outcome m, then B_f" where `group`
/// indexes the eigenspaces of B in ascending order.
template <typename Real>
JointRetrodiction<Real> joint_retrodictive_state(const Matrix<Real>& m, const HermitianObservable<Real>& b,
                                                 std::size_t group) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, b.matrix(), "measurement operator vs observable");
  if (group >= b.eigenspaces().size()) throw Error(ErrorCode::InvalidArgument, "eigenspace index out of range");
  const Matrix<Real> md_v = m.adjoint() * b.eigenvectors();
  auto r = detail::try_joint(md_v, b, group, m.squaredNorm());
  if (!r) {
    throw Error(ErrorCode::UnreachableSequence,
                "final value " + std::to_string(static_cast<double>(b.eigenspaces()[group].value)) +
                    " never follows this outcome");
  }
  return *r;
}

/// All reachable sequences of one outcome, in ascending B_f.
template <typename Real>
std::vector<JointRetrodiction<Real>> joint_retrodictions(const Matrix<Real>& m, const HermitianObservable<Real>& b) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, b.matrix(), "measurement operator vs observable");
  const Real outcome_norm = detail::reachable_weight(m);
  const Matrix<Real> md_v = m.adjoint() * b.eigenvectors();
  std::vector<JointRetrodiction<Real>> out;
  for (std::size_t g = 0; g < b.eigenspaces().size(); ++g) {
    if (auto r = detail::try_joint(md_v, b, g, outcome_norm)) out.push_back(std::move(*r));
  }
  return out;
}

template <typename Real = double>
struct JointEstimates {
  Real estimate_a;  // A_mf
  Real estimate_b;  // B_mf
  Real error_a;     // delta A_mf^2
  Real error_b;     // delta B_mf^2
};

template <typename Real>
JointEstimates<Real> joint_estimates(const JointRetrodiction<Real>& r, const HermitianObservable<Real>& a,
                                     const HermitianObservable<Real>& b) {
  detail::require_same_dim(a.matrix(), b.matrix(), "observable A vs B");
  if (r.factor.rows() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "retrodiction vs observable");
  const auto [ma, va] = detail::moments<Real>(a.matrix(), r.factor, Real(1));
  const auto [mb, vb] = detail::moments<Real>(b.matrix(), r.factor, Real(1));
  return {ma, mb, detail::clamp_variance(va), detail::clamp_variance(vb)};
}

template <typename Real = double>
struct DisturbanceRecord {
  std::size_t final_index;
  Real final_value;  // B_f
  Real weight;       // w_m(B_f)
  Real estimate;     // B_mf
  Real random;       // delta B_mf^2
  Real systematic;   // (B_f - B_mf)^2
  Real total;        // Delta B_mf^2 = <(B_f - B)^2> in R_mf
};

namespace detail {

template <typename Real>
DisturbanceRecord<Real> disturbance_record(const JointRetrodiction<Real>& r, const HermitianObservable<Real>& b) {
  const auto [mean, var] = moments<Real>(b.matrix(), r.factor, Real(1));
  const Index d = b.dim();
  const Matrix<Real> shifted = (Matrix<Real>::Identity(d, d) * r.final_value - b.matrix()) * r.factor;
  const Real shift = r.final_value - mean;
  return {r.final_index, r.final_value, r.weight, mean, clamp_variance(var), shift * shift, shifted.squaredNorm()};
}

}  // namespace detail

/// Disturbance of B conditioned on the final value B_f, split into the random
/// part delta B_mf^2 and the systematic shift (B_f - B_mf)^2.
template <typename Real>
DisturbanceRecord<Real> conditional_disturbance(const Matrix<Real>& m, const HermitianObservable<Real>& b,
                                                std::size_t group) {
  return detail::disturbance_record(joint_retrodictive_state(m, b, group), b);
}

template <typename Real = double>
struct DisturbanceReport {
  Real disturbance;  // Delta B_m^2 from the eigenbasis double sum
  Real trace_form;   // same quantity from the closed trace expression
  std::vector<DisturbanceRecord<Real>> records;  // reachable final values, ascending
};

/// Averaged disturbance
///   Delta B_m^2 = sum_{i,f} |<B_f|M|B_i>|^2 (B_f - B_i)^2 / tr{M^dagger M},
/// cross-checked against
///   (tr{M^dagger B^2 M} + tr{B^2 M^dagger M} - 2 tr{M^dagger B M B}) / tr{M^dagger M}.
template <typename Real>
DisturbanceReport<Real> averaged_disturbance(const Matrix<Real>& m, const HermitianObservable<Real>& b) {
  detail::require_square(m, "measurement operator");
  detail::require_same_dim(m, b.matrix(), "measurement operator vs observable");
  const Real w = detail::reachable_weight(m);
  const Index d = b.dim();
  const auto& v = b.eigenvectors();
  const auto& vals = b.grouped_values();

  const Matrix<Real> in_basis = v.adjoint() * m * v;
  Real sum = 0;
  for (Index f = 0; f < d; ++f) {
    for (Index i = 0; i < d; ++i) {
      const Real diff = vals(f) - vals(i);
      sum += std::norm(in_basis(f, i)) * diff * diff;
    }
  }

  const Matrix<Real>& bm = b.matrix();
  const Matrix<Real> bb = bm * bm;
  const Matrix<Real> md = m.adjoint();
  const Real trace_form =
      ((md * bb * m).trace().real() + (bb * md * m).trace().real() - Real(2) * (md * bm * m * bm).trace().real()) / w;

  DisturbanceReport<Real> out;
  out.disturbance = detail::clamp_variance(sum / w);
  out.trace_form = trace_form;
  const Real scale = std::max(Real(1), bm.squaredNorm());
  if (std::abs(out.disturbance - trace_form) > Real(tol::kIdentity) * scale) {
    throw Error(ErrorCode::InternalConsistency, "eigenbasis and trace forms of the disturbance disagree");
  }
  for (const auto& r : joint_retrodictions(m, b)) out.records.push_back(detail::disturbance_record(r, b));
  return out;
}

template <typename Real = double>
struct DecompositionReport {
  Real reconstruction_error;       // max |R_m - sum_f w R_mf|
  Real resolution;                 // delta A_m^2
  Real averaged_joint_resolution;  // sum_f w delta A_mf^2
  Real gap;                        // resolution - averaged_joint_resolution
  Real spread;                     // sum_f w (A_mf - A_m)^2
};

/// Checks R_m = sum_f w_m(B_f) R_mf and reports how delta A_m^2 relates to
/// the average of the sequence errors. With A_mf as the sequence estimate the
/// relation is delta A_m^2 = sum_f w [delta A_mf^2 + (A_mf - A_m)^2], so the
/// gap equals the spread of the sequence estimates.
template <typename Real>
DecompositionReport<Real> decomposition_check(const Matrix<Real>& m, const HermitianObservable<Real>& a,
                                              const HermitianObservable<Real>& b) {
  const auto rm = retrodictive_operator(m);
  const auto est = optimal_estimate(m, a);
  const auto seqs = joint_retrodictions(m, b);

  Matrix<Real> rebuilt = Matrix<Real>::Zero(m.rows(), m.cols());
  Real avg = 0, spread = 0;
  for (const auto& r : seqs) {
    rebuilt.noalias() += r.weight * r.statistical_matrix();
    const auto je = joint_estimates(r, a, b);
    avg += r.weight * je.error_a;
    const Real d = je.estimate_a - est.estimate;
    spread += r.weight * d * d;
  }
  return {detail::max_abs<Real>(rm.matrix - rebuilt), est.error, avg, est.error - avg, spread};
}

template <typename Real = double>
struct SequenceUncertaintyReport {
  JointEstimates<Real> estimates;
  Real disturbance;        // Delta B_mf^2
  Real bound;              // |<[A,B]>_mf|^2 / 4
  Real slack_joint;        // delta A_mf^2 delta B_mf^2 - bound
  Real slack_disturbance;  // delta A_mf^2 Delta B_mf^2 - bound
  bool satisfied;
};

template <typename Real>
SequenceUncertaintyReport<Real> sequence_uncertainty_check(const Matrix<Real>& m, const HermitianObservable<Real>& a,
                                                           const HermitianObservable<Real>& b, std::size_t group,
                                                           Real slack_tol = Real(tol::kRelationSlack)) {
  const auto r = joint_retrodictive_state(m, b, group);
  const auto je = joint_estimates(r, a, b);
  const auto rec = detail::disturbance_record(r, b);
  const Matrix<Real> c = commutator(a.matrix(), b.matrix());
  const Real bound = std::norm((r.factor.adjoint() * c * r.factor).trace()) / Real(4);
  SequenceUncertaintyReport<Real> out{je, rec.total, bound, je.error_a * je.error_b - bound,
                                      je.error_a * rec.total - bound, false};
  out.satisfied = out.slack_joint >= -slack_tol && out.slack_disturbance >= -slack_tol;
  return out;
}

template <typename Real = double>
struct ResolutionDisturbanceReport {
  Real resolution;                 // delta A_m^2
  Real disturbance;                // Delta B_m^2
  Real bound;                      // |tr{R_m [A,B]}|^2 / 4
  Real slack;                      // resolution * disturbance - bound
  bool satisfied;
  Real averaged_joint_resolution;  // sum_f w delta A_mf^2
  Real averaged_disturbance;       // sum_f w Delta B_mf^2
  MixtureReport<Real> mixture;     // averaging lemma over the sequences
  Real intermediate_bound;         // (sum_f w |<[A,B]>_mf|)^2 / 4
  bool chain_satisfied;            // intermediate_bound >= bound
};

/// Resolution-disturbance relation delta A_m^2 Delta B_m^2 >= |tr{R_m[A,B]}|^2 / 4
/// together with the intermediate steps: the averaging lemma applied to the
/// per-sequence relations, and the triangle bound on the averaged commutator.
template <typename Real>
ResolutionDisturbanceReport<Real> resolution_disturbance_check(const Matrix<Real>& m,
                                                               const HermitianObservable<Real>& a,
                                                               const HermitianObservable<Real>& b,
                                                               Real slack_tol = Real(tol::kRelationSlack)) {
  detail::require_same_dim(a.matrix(), b.matrix(), "observable A vs B");
  const auto est = optimal_estimate(m, a);
  const auto dist = averaged_disturbance(m, b);
  const Real w = m.squaredNorm();
  const Matrix<Real> c = commutator(a.matrix(), b.matrix());
  const Real bound = std::norm((m * c * m.adjoint()).trace() / w) / Real(4);

  std::vector<MixtureComponent<Real>> components;
  Real avg_res = 0, avg_dist = 0, avg_abs = 0, total_weight = 0;
  for (const auto& r : joint_retrodictions(m, b)) {
    const auto je = joint_estimates(r, a, b);
    const auto rec = detail::disturbance_record(r, b);
    const Real u = std::abs((r.factor.adjoint() * c * r.factor).trace()) / Real(2);
    components.push_back({r.weight, je.error_a, rec.total, u});
    avg_res += r.weight * je.error_a;
    avg_dist += r.weight * rec.total;
    avg_abs += r.weight * u;
    total_weight += r.weight;
  }
  // Dropped (unreachable) sequences carry at most d * 1e-14 weight.
  for (auto& comp : components) comp.weight /= total_weight;

  ResolutionDisturbanceReport<Real> out;
  out.resolution = est.error;
  out.disturbance = dist.disturbance;
  out.bound = bound;
  out.slack = est.error * dist.disturbance - bound;
  out.satisfied = out.slack >= -slack_tol;
  out.averaged_joint_resolution = avg_res;
  out.averaged_disturbance = avg_dist;
  out.mixture = mixture_bound_check(components);
  out.intermediate_bound = avg_abs * avg_abs;
  out.chain_satisfied = out.intermediate_bound >= bound - slack_tol;
  return out;
}

}  // namespace qmeter
