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

#include "qmeter/types.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace qmeter {

/// One member of a statistical mixture with its own uncertainty product
/// var_a * var_b >= bound^2.
template <typename Real = double>
struct MixtureComponent {
  Real weight;
  Real var_a;
  Real var_b;
  Real bound;
};

template <typename Real = double>
struct MixtureReport {
  Real lhs;               // (sum p var_a)(sum p var_b)
  Real symmetric_sum;     // sum_ij p_i p_j (var_a_i var_b_j + var_a_j var_b_i) / 2
  Real geometric_square;  // (sum_i p_i sqrt(var_a_i var_b_i))^2
  Real rhs;               // (sum p bound)^2
  bool symmetric_link;    // symmetric_sum >= geometric_square
  bool geometric_link;    // geometric_square >= rhs
  bool satisfied;         // lhs >= rhs
};

/// Averaging lemma: if every component satisfies its own product bound, the
/// averaged variances satisfy the averaged bound. The two intermediate links
/// of the chain are evaluated separately so each can be checked on its own.
template <typename Real>
MixtureReport<Real> mixture_bound_check(std::span<const MixtureComponent<Real>> components,
                                        Real tolerance = Real(tol::kMixture)) {
  if (components.empty()) throw Error(ErrorCode::InvalidWeights, "mixture has no components");
  Real total = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (!(c.weight >= Real(0) && c.weight <= Real(1))) {
      throw Error(ErrorCode::InvalidWeights, "weight " + std::to_string(static_cast<double>(c.weight)) +
                                                 " outside [0,1] at component " + std::to_string(i));
    }
    total += c.weight;
    if (!(c.var_a >= Real(0) && c.var_b >= Real(0) && c.bound >= Real(0))) {
      throw Error(ErrorCode::PreconditionViolated, "negative variance or bound at component " + std::to_string(i));
    }
    if (c.var_a * c.var_b < c.bound * c.bound - tolerance) {
      throw Error(ErrorCode::PreconditionViolated,
                  "component " + std::to_string(i) + " violates var_a * var_b >= bound^2");
    }
  }
  if (std::abs(total - Real(1)) > Real(tol::kIdentity)) {
    throw Error(ErrorCode::InvalidWeights, "weights sum to " + std::to_string(static_cast<double>(total)));
  }

  Real mean_a = 0, mean_b = 0, mean_bound = 0, mean_geo = 0;
  for (const auto& c : components) {
    mean_a += c.weight * c.var_a;
    mean_b += c.weight * c.var_b;
    mean_bound += c.weight * c.bound;
    mean_geo += c.weight * std::sqrt(c.var_a * c.var_b);
  }
  Real symmetric = 0;
  for (const auto& ci : components) {
    for (const auto& cj : components) {
      symmetric += ci.weight * cj.weight * (ci.var_a * cj.var_b + cj.var_a * ci.var_b) / Real(2);
    }
  }

  MixtureReport<Real> r;
  r.lhs = mean_a * mean_b;
  r.symmetric_sum = symmetric;
  r.geometric_square = mean_geo * mean_geo;
  r.rhs = mean_bound * mean_bound;
  r.symmetric_link = r.symmetric_sum >= r.geometric_square - tolerance;
  r.geometric_link = r.geometric_square >= r.rhs - tolerance;
  r.satisfied = r.lhs >= r.rhs - tolerance;
  return r;
}

template <typename Real>
MixtureReport<Real> mixture_bound_check(const std::vector<MixtureComponent<Real>>& components,
                                        Real tolerance = Real(tol::kMixture)) {
  return mixture_bound_check(std::span<const MixtureComponent<Real>>(components), tolerance);
}

}  // namespace qmeter
