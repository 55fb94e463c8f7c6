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

#include "qmeter/characterize.hpp"

#include <algorithm>

namespace qmeter {

namespace {

const NamedObservable& find_observable(std::span<const NamedObservable> observables, const std::string& name) {
  auto it = std::find_if(observables.begin(), observables.end(), [&](const auto& o) { return o.name == name; });
  if (it == observables.end()) throw Error(ErrorCode::UnknownObservable, "no observable named '" + name + "'");
  return *it;
}

}  // namespace

Characterization characterize(const KrausSet<double>& set, std::span<const NamedObservable> observables,
                              std::span<const std::pair<std::string, std::string>> pairs,
                              const std::optional<std::string>& only_outcome, double completeness_tol,
                              double slack_tol) {
  for (const auto& o : observables) {
    detail::require_same_dim(o.observable.matrix(), set[0].op, ("observable '" + o.name + "'").c_str());
  }
  for (const auto& [a, b] : pairs) {
    find_observable(observables, a);
    find_observable(observables, b);
  }
  if (only_outcome) set.index_of(*only_outcome);

  Characterization out;
  out.completeness = validate_completeness(set, completeness_tol);
  for (const auto& outcome : set.outcomes()) {
    if (only_outcome && outcome.label != *only_outcome) continue;
    const double weight = outcome.op.squaredNorm();
    for (const auto& obs : observables) {
      CharacterizationRow row{outcome.label, obs.name, "ok", weight};
      try {
        const auto est = optimal_estimate(outcome.op, obs.observable);
        row.estimate = est.estimate;
        row.resolution = est.error;
        row.disturbance = averaged_disturbance(outcome.op, obs.observable).disturbance;
      } catch (const Error& e) {
        row.status = to_string(e.code());
      }
      out.rows.push_back(std::move(row));
    }
    for (const auto& [name_a, name_b] : pairs) {
      const auto& a = find_observable(observables, name_a).observable;
      const auto& b = find_observable(observables, name_b).observable;
      PairRow row{outcome.label, name_a, name_b, "ok"};
      try {
        const auto rp = resolution_pair_check(outcome.op, a, b, slack_tol);
        const auto rd = resolution_disturbance_check(outcome.op, a, b, slack_tol);
        row.resolution_a = rp.resolution_a;
        row.resolution_b = rp.resolution_b;
        row.disturbance_b = rd.disturbance;
        row.bound = rd.bound;
        row.resolution_slack = rp.slack;
        row.disturbance_slack = rd.slack;
        row.intermediate_bound = rd.intermediate_bound;
        row.satisfied = rp.satisfied && rd.satisfied && rd.chain_satisfied;
      } catch (const Error& e) {
        row.status = to_string(e.code());
      }
      out.pairs.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace qmeter
