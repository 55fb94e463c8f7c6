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

// Randomized check of the uncertainty relations and structural identities
// over random measurement operators and observable pairs.

#pragma once

#include "qmeter/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmeter {

struct VerifyConfig {
  std::vector<Index> dims{2, 3, 4, 5, 6};
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double slack_tol = tol::kRelationSlack;
  double identity_tol = tol::kIdentity;
  /// Multiplies every bound before comparison. 1 in normal runs; values above
  /// 1 serve as a negative control.
  double bound_scale = 1.0;
  unsigned threads = 1;
};

/// Minimum of (lhs - bound) over all cases for one inequality.
struct RelationSummary {
  std::string name;
  std::string statement;
  std::size_t cases = 0;
  double min_slack = 0;
  std::size_t violations = 0;
};

/// Maximum residual over all cases for one identity.
struct IdentitySummary {
  std::string name;
  std::string statement;
  std::size_t cases = 0;
  double max_residual = 0;
  std::size_t violations = 0;
};

struct Counterexample {
  std::string relation;
  Index dim;
  std::size_t sample;
  double value;
  Matrix<double> m;
  Matrix<double> a;
  Matrix<double> b;
};

struct VerifyResult {
  std::vector<RelationSummary> relations;  // six inequalities
  std::vector<IdentitySummary> identities;
  std::optional<Counterexample> first_failure;
  bool pass = false;
};

/// Each (dim, sample) case draws its operators from its own counter stream,
/// so any single case can be reproduced. A fixed tight anchor case (outcome
/// |0><y+| with sigma_z, sigma_x) runs first for every dimension 2 entry.
VerifyResult run_property_suite(const VerifyConfig& config);

}  // namespace qmeter
