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

// File formats.
//
// Matrix literal:
//   {"rows": R, "cols": C, "data": [[re, im], ...]}   row-major, R*C entries
//
// Measurement set:
//   {"dim": d, "outcomes": [{"label": s, "matrix": <matrix>}, ...], "complete": bool}
//   "complete" defaults to true.
//
// Observables:
//   {"dim": d, "observables": [{"name": s, "matrix": <matrix>} | {"name": s, "preset": p}, ...]}
//   presets: sz sx sy (dim 2), n x y (truncated Fock space of dim d).

#pragma once

#include "qmeter/characterize.hpp"
#include "qmeter/measurement.hpp"
#include "qmeter/scenarios.hpp"
#include "qmeter/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qmeter {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

json matrix_to_json(const Matrix<double>& m);
Matrix<double> matrix_from_json(const json& j, const std::string& where = "matrix");

/// Column vector from a matrix literal with one column or a bare [[re, im], ...] list.
Vector<double> vector_from_json(const json& j, const std::string& where = "vector");

json kraus_set_to_json(const KrausSet<double>& set);
KrausSet<double> kraus_set_from_json(const json& j, const std::string& where = "$");

/// Named preset observable: sz, sx, sy (dim must be 2), n, x, y (Fock space).
Matrix<double> observable_preset(const std::string& name, Index dim);

std::vector<NamedObservable> observables_from_json(const json& j, double hermiticity_tol = tol::kHermiticity,
                                                  const std::string& where = "$");

/// Parses a file; syntax errors are reported with line and column.
json read_json_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string timestamp;  // ISO-8601 UTC; the only field allowed to differ between identical runs
};

json to_json(const RunManifest& m);
std::string utc_timestamp();

json to_json(const CompletenessReport<double>& r);
json to_json(const Characterization& c);
json to_json(const TeleportationReport& r);
json to_json(const EavesdropReport& r);
json to_json(const CloningReport& r);
json to_json(const VerifyResult& r);
json to_json(const DisturbanceReport<double>& r);

// CSV: one header line, comma-separated, numbers in shortest round-trip form.
std::string characterization_csv(const Characterization& c);
std::string eavesdrop_csv(const EavesdropReport& r);
std::string cloning_csv(const CloningReport& r);
std::string verify_csv(const VerifyResult& r);
std::string teleportation_csv(const TeleportationReport& r);
/// Columns: outcome, observable, B_f, w, delta2, systematic, Delta2
std::string disturbance_csv(const std::string& outcome, const std::string& observable,
                            const DisturbanceReport<double>& r);

/// Gnuplot-ready: sigma, resolution, disturbance, bound, product.
std::string frontier_tsv(const std::vector<FrontierPoint>& points);

}  // namespace qmeter
