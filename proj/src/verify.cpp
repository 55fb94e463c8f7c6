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

#include "qmeter/verify.hpp"

#include "qmeter/backaction.hpp"
#include "qmeter/measurement.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/random.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace qmeter {

namespace {

constexpr std::size_t kRelations = 6;
constexpr std::size_t kIdentities = 5;

const std::array<std::pair<const char*, const char*>, kRelations> kRelationNames{{
    {"resolution-pair", "dA_m^2 dB_m^2 >= |tr{R_m[A,B]}|^2/4"},
    {"sequence-joint", "dA_mf^2 dB_mf^2 >= |<[A,B]>_mf|^2/4"},
    {"sequence-disturbance", "dA_mf^2 DB_mf^2 >= |<[A,B]>_mf|^2/4"},
    {"mixture-average", "(sum w dA_mf^2)(sum w DB_mf^2) >= (sum w |<[A,B]>_mf|)^2/4"},
    {"triangle", "(sum w |<[A,B]>_mf|)^2/4 >= |tr{R_m[A,B]}|^2/4"},
    {"resolution-disturbance", "dA_m^2 DB_m^2 >= |tr{R_m[A,B]}|^2/4"},
}};

const std::array<std::pair<const char*, const char*>, kIdentities> kIdentityNames{{
    {"retrodiction-decomposition", "R_m = sum_f w_m(B_f) R_mf"},
    {"disturbance-trace-form", "eigenbasis double sum = closed trace form"},
    {"conditional-disturbance-split", "DB_mf^2 = dB_mf^2 + (B_f - B_mf)^2"},
    {"disturbance-average", "DB_m^2 = sum_f w DB_mf^2"},
    {"resolution-gap", "dA_m^2 - sum_f w dA_mf^2 = sum_f w (A_mf - A_m)^2 >= 0"},
}};

struct CaseOutcome {
  std::array<double, kRelations> slack{};
  std::array<double, kIdentities> residual{};
  std::string error;  // non-empty if a routine threw
};

struct Case {
  Index dim;
  std::size_t sample;
  bool anchor;
};

struct CaseOperators {
  Matrix<double> m, a, b;
};

CaseOperators draw_case(const VerifyConfig& cfg, const Case& c) {
  if (c.anchor) {
    const double s = 1.0 / std::sqrt(2.0);
    Vector<double> y_plus(2);
    y_plus << s, std::complex<double>(0, s);
    return {basis_ket<double>(2, 0) * y_plus.adjoint(), pauli_z<double>(), pauli_x<double>()};
  }
  CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(c.dim) << 40) ^ static_cast<std::uint64_t>(c.sample));
  CaseOperators ops;
  ops.m = random_kraus_operator<double>(rng, c.dim);
  ops.a = rng.uniform() < 0.2 ? random_degenerate_hermitian<double>(rng, c.dim) : random_hermitian<double>(rng, c.dim);
  ops.b = rng.uniform() < 0.2 ? random_degenerate_hermitian<double>(rng, c.dim) : random_hermitian<double>(rng, c.dim);
  return ops;
}

CaseOutcome evaluate(const VerifyConfig& cfg, const CaseOperators& ops) {
  CaseOutcome out;
  const double s = cfg.bound_scale;
  try {
    const auto a = eigendecompose(ops.a);
    const auto b = eigendecompose(ops.b);
    const auto rp = resolution_pair_check(ops.m, a, b);
    out.slack[0] = rp.resolution_a * rp.resolution_b - s * rp.bound;

    out.slack[1] = out.slack[2] = std::numeric_limits<double>::infinity();
    for (const auto& r : joint_retrodictions(ops.m, b)) {
      const auto seq = sequence_uncertainty_check(ops.m, a, b, r.final_index);
      out.slack[1] = std::min(out.slack[1], seq.estimates.error_a * seq.estimates.error_b - s * seq.bound);
      out.slack[2] = std::min(out.slack[2], seq.estimates.error_a * seq.disturbance - s * seq.bound);
      const auto rec = conditional_disturbance(ops.m, b, r.final_index);
      out.residual[2] = std::max(out.residual[2], std::abs(rec.total - rec.random - rec.systematic));
    }

    const auto rd = resolution_disturbance_check(ops.m, a, b);
    out.slack[3] = rd.averaged_joint_resolution * rd.averaged_disturbance - s * rd.intermediate_bound;
    out.slack[4] = rd.intermediate_bound - s * rd.bound;
    out.slack[5] = rd.resolution * rd.disturbance - s * rd.bound;

    const auto dec = decomposition_check(ops.m, a, b);
    const auto dist = averaged_disturbance(ops.m, b);
    out.residual[0] = dec.reconstruction_error;
    out.residual[1] = std::abs(dist.disturbance - dist.trace_form);
    double avg = 0;
    for (const auto& rec : dist.records) avg += rec.weight * rec.total;
    out.residual[3] = std::abs(dist.disturbance - avg);
    out.residual[4] = std::max(std::abs(dec.gap - dec.spread), -dec.gap);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

VerifyResult run_property_suite(const VerifyConfig& cfg) {
  std::vector<Case> cases;
  bool anchored = false;
  for (Index d : cfg.dims) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    if (d == 2 && !anchored) {
      cases.push_back({2, 0, true});
      anchored = true;
    }
    for (std::size_t s = 0; s < cfg.samples; ++s) cases.push_back({d, s, false});
  }

  std::vector<CaseOutcome> outcomes(cases.size());
  parallel_for(cases.size(), cfg.threads,
               [&](std::size_t i) { outcomes[i] = evaluate(cfg, draw_case(cfg, cases[i])); });

  VerifyResult result;
  for (const auto& [name, statement] : kRelationNames) {
    result.relations.push_back({name, statement, 0, std::numeric_limits<double>::infinity(), 0});
  }
  for (const auto& [name, statement] : kIdentityNames) result.identities.push_back({name, statement, 0, 0.0, 0});

  auto note_failure = [&](std::size_t i, const std::string& what, double value) {
    if (result.first_failure) return;
    const auto ops = draw_case(cfg, cases[i]);
    result.first_failure = Counterexample{what, cases[i].dim, cases[i].sample, value, ops.m, ops.a, ops.b};
  };

  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.error.empty()) {
      note_failure(i, o.error, std::numeric_limits<double>::quiet_NaN());
      for (auto& r : result.relations) ++r.violations;
      continue;
    }
    for (std::size_t k = 0; k < kRelations; ++k) {
      auto& r = result.relations[k];
      ++r.cases;
      r.min_slack = std::min(r.min_slack, o.slack[k]);
      if (!(o.slack[k] >= -cfg.slack_tol)) {
        ++r.violations;
        note_failure(i, r.name, o.slack[k]);
      }
    }
    for (std::size_t k = 0; k < kIdentities; ++k) {
      auto& r = result.identities[k];
      ++r.cases;
      r.max_residual = std::max(r.max_residual, o.residual[k]);
      if (!(o.residual[k] <= cfg.identity_tol)) {
        ++r.violations;
        note_failure(i, r.name, o.residual[k]);
      }
    }
  }
  result.pass = !result.first_failure.has_value();
  return result;
}

}  // namespace qmeter
