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

#include "qmeter/backaction.hpp"
#include "qmeter/measurement.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qmeter {

struct NamedObservable {
  std::string name;
  HermitianObservable<double> observable;
};

/// One row per outcome x observable.
struct CharacterizationRow {
  std::string outcome;
  std::string observable;
  std::string status;  // "ok" or the error code, e.g. "UnreachableOutcome"
  double weight = 0;   // tr{M^dagger M}
  double estimate = 0;
  double resolution = 0;
  double disturbance = 0;
};

/// One row per outcome x (A, B) pair.
struct PairRow {
  std::string outcome;
  std::string a;
  std::string b;
  std::string status;
  double resolution_a = 0;
  double resolution_b = 0;
  double disturbance_b = 0;
  double bound = 0;               // |tr{R_m [A,B]}|^2 / 4
  double resolution_slack = 0;    // delta A^2 delta B^2 - bound
  double disturbance_slack = 0;   // delta A^2 Delta B^2 - bound
  double intermediate_bound = 0;  // sequence-averaged bound, >= bound
  bool satisfied = false;
};

struct Characterization {
  CompletenessReport<double> completeness;
  std::vector<CharacterizationRow> rows;
  std::vector<PairRow> pairs;
};

/// Resolution and disturbance of every outcome (or only `only_outcome`) for
/// each observable, plus both uncertainty relations for each pair.
/// Unreachable outcomes become rows with a status instead of aborting.
Characterization characterize(const KrausSet<double>& set, std::span<const NamedObservable> observables,
                              std::span<const std::pair<std::string, std::string>> pairs,
                              const std::optional<std::string>& only_outcome = std::nullopt,
                              double completeness_tol = tol::kCompleteness, double slack_tol = tol::kRelationSlack);

}  // namespace qmeter
