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

#include "cli.hpp"
#include "qmeter/io.hpp"
#include "qmeter/random.hpp"
#include "test_util.hpp"

#include <filesystem>
#include <sstream>

namespace qmeter {
namespace {

using namespace testing;
namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;

  json report() const { return json::parse(out).at("report"); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QMETER_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmeter_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(CliValidate, ExitCodes) {
  EXPECT_EQ(run({"validate", data("projective_qubit.json")}).code, 0);
  const auto partial = run({"validate", data("photon_partial.json")});
  EXPECT_EQ(partial.code, 1);
  EXPECT_DOUBLE_EQ(partial.report()["completeness"]["max_deviation"].get<double>(), 1.0);
  const auto declared = run({"validate", data("photon_partial_declared.json")});
  EXPECT_EQ(declared.code, 0);
  EXPECT_EQ(declared.report()["status"], "partial");
}

TEST(CliValidate, MalformedJsonReportsPosition) {
  const auto r = run({"validate", data("malformed.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("malformed.json:4:"), std::string::npos) << r.err;
}

TEST(CliValidate, MissingFileAndBadFlags) {
  EXPECT_EQ(run({"validate", data("does_not_exist.json")}).code, 2);
  EXPECT_EQ(run({"validate"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"validate", data("projective_qubit.json"), "--format", "xml"}).code, 2);
}

TEST(CliValidate, ToleranceIsRecorded) {
  const auto r = run({"validate", data("projective_qubit.json"), "--tol", "1e-6"});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["manifest"]["tolerances"]["completeness"].get<double>(), 1e-6);
  EXPECT_EQ(doc["manifest"]["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(CliCharacterize, PhotonPreset) {
  const auto r = run({"characterize", "--preset", "photon"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = r.report()["rows"];
  ASSERT_EQ(rows[0]["observable"], "n");
  EXPECT_NEAR(rows[0]["estimate"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(rows[0]["resolution"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(rows[0]["disturbance"].get<double>(), 1.0, 1e-12);
}

TEST(CliCharacterize, TeleportPreset) {
  const auto r = run({"characterize", "--preset", "classical-teleport", "--alpha", "0.5+0.3i", "--dim", "60"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = r.report()["teleportation"];
  EXPECT_NEAR(t["estimate"][0].get<double>(), 0.5, 1e-6);
  EXPECT_NEAR(t["estimate"][1].get<double>(), 0.3, 1e-6);
  EXPECT_NEAR(t["resolution_x"].get<double>(), 0.25, 1e-6);
  EXPECT_NEAR(t["disturbance_y"].get<double>(), 0.5, 1e-4);
}

TEST(CliCharacterize, NegativeImaginaryAlpha) {
  const auto r = run({"characterize", "--preset", "classical-teleport", "--alpha", "-0.2-0.4i", "--dim", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["teleportation"]["estimate"][1].get<double>(), -0.4, 1e-6);
  EXPECT_EQ(run({"characterize", "--preset", "classical-teleport", "--alpha", "1+zi"}).code, 2);
}

TEST(CliCharacterize, PairsAndUnreachableRows) {
  const auto r = run({"characterize", data("cloning_y.json"), data("qubit_observables.json"), "--pair", "sz,sx"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  for (const auto& p : rep["pairs"]) {
    if (p["outcome"] == "never") {
      EXPECT_EQ(p["status"], "UnreachableOutcome");
      continue;
    }
    EXPECT_GE(p["resolution_slack"].get<double>(), 0.0 - 1e-12);
    EXPECT_GE(p["disturbance_slack"].get<double>(), 0.0 - 1e-12);
    EXPECT_NEAR(p["bound"].get<double>(), 1.0, 1e-12);
  }
  bool saw_unreachable = false;
  for (const auto& row : rep["rows"]) saw_unreachable |= row["status"] == "UnreachableOutcome";
  EXPECT_TRUE(saw_unreachable);
}

TEST(CliCharacterize, OutcomeFilterAndPresetObservables) {
  const auto r = run({"characterize", data("cloning_y.json"), "--observables", "sz,sx", "--outcome", "y+"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["rows"].size(), 2u);
  EXPECT_EQ(run({"characterize", data("cloning_y.json"), "--observables", "sz", "--outcome", "nope"}).code, 2);
}

TEST(CliCharacterize, UnknownObservable) {
  const auto r = run({"characterize", data("cloning_y.json"), data("qubit_observables.json"), "--pair", "sz,q"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("UnknownObservable"), std::string::npos);
}

TEST(CliCharacterize, CsvFormat) {
  const auto r = run({"characterize", "--preset", "photon", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# manifest ", 0), 0u);
  EXPECT_NE(r.out.find("outcome,observable,status,weight,estimate,resolution,disturbance\n"), std::string::npos);
}

TEST(CliVerify, SmallRunPasses) {
  const auto r = run({"verify", "--samples", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["relations"].size(), 6u);
  EXPECT_TRUE(r.report()["pass"].get<bool>());
}

TEST(CliVerify, DeterministicSingleCase) {
  const auto a = run({"verify", "--samples", "1", "--seed", "99", "--dims", "3"});
  const auto b = run({"verify", "--samples", "1", "--seed", "99", "--dims", "3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.report().dump(), b.report().dump());
  EXPECT_EQ(a.report()["relations"][0]["cases"], 1);
}

TEST(CliVerify, FaultHookFailsWithCounterexample) {
  const auto dir = scratch("fault");
  const auto r = run({"verify", "--samples", "5", "--fault-bound-scale", "1.01", "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  const auto counter = read_json_file(dir / "counterexample.json");
  const auto m = matrix_from_json(counter.at("M"));
  EXPECT_GE(m.rows(), 1);
  EXPECT_TRUE(fs::exists(dir / "verify.json"));
  EXPECT_TRUE(fs::exists(dir / "verify.csv"));
}

TEST(CliScenario, EavesdropProjective) {
  const auto r = run({"scenario", data("eavesdrop_projective.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  EXPECT_EQ(res["basis_A"]["empirical"]["mean"].get<double>(), 0.0);
  EXPECT_NEAR(res["basis_B"]["analytic"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(res["basis_B"]["agrees"].get<bool>());
}

TEST(CliScenario, EavesdropIdentity) {
  const auto r = run({"scenario", data("eavesdrop_identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["basis_A"]["empirical"]["mean"].get<double>(), 0.0);
  EXPECT_EQ(r.report()["result"]["basis_B"]["empirical"]["mean"].get<double>(), 0.0);
}

TEST(CliScenario, ReportsAreReproducible) {
  const auto a = run({"scenario", data("eavesdrop_projective.json")});
  const auto b = run({"scenario", data("eavesdrop_projective.json")});
  EXPECT_EQ(a.report().dump(), b.report().dump());
  auto ma = json::parse(a.out)["manifest"], mb = json::parse(b.out)["manifest"];
  ma.erase("timestamp");
  mb.erase("timestamp");
  EXPECT_EQ(ma.dump(), mb.dump());
  const auto seeded = run({"scenario", data("eavesdrop_projective.json"), "--seed", "8"});
  EXPECT_NE(seeded.report().dump(), a.report().dump());
}

TEST(CliScenario, SchemaErrorNamesField) {
  const auto r = run({"scenario", data("eavesdrop_missing_b.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("$.B"), std::string::npos) << r.err;
  EXPECT_EQ(run({"scenario", data("malformed.json")}).code, 2);
}

TEST(CliScenario, QndHasZeroNumberDisturbance) {
  const auto r = run({"scenario", data("qnd.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  EXPECT_LE(res["completeness"]["max_deviation"].get<double>(), 1e-10);
  for (const auto& row : res["rows"]) {
    if (row["observable"] == "n") EXPECT_LE(std::abs(row["disturbance"].get<double>()), 1e-12);
  }
}

TEST(CliScenario, OtherScenarios) {
  const auto t = run({"scenario", data("teleport.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_LE(t.report()["grid_check"]["deviation"].get<double>(), 1e-6);
  const auto c = run({"scenario", data("cloning.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NEAR(c.report()["result"]["outcomes"][0]["clone_error_B"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(run({"scenario", data("photon.json")}).code, 0);
}

TEST(CliScenario, FrontierWritesTsv) {
  const auto dir = scratch("frontier");
  const auto r = run({"scenario", data("frontier.json"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string tsv = read_file(dir / "frontier.tsv");
  EXPECT_EQ(tsv.rfind("# sigma\t", 0), 0u);
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(dir / "frontier.json"));
  EXPECT_TRUE(fs::exists(dir / "frontier.csv"));
}

TEST(Io, KrausSetRoundTrip) {
  CounterRng rng(71, 0);
  for (int k = 0; k < 50; ++k) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const auto ops = random_complete_set<double>(rng, d, 1 + static_cast<Index>(rng.below(4)));
    std::vector<Outcome<double>> outcomes;
    for (std::size_t i = 0; i < ops.size(); ++i) outcomes.push_back({"m" + std::to_string(i), ops[i]});
    const KrausSet<double> set(outcomes, k % 2 == 0);
    const auto back = kraus_set_from_json(json::parse(kraus_set_to_json(set).dump()));
    ASSERT_EQ(back.size(), set.size());
    EXPECT_EQ(back.declared_complete(), set.declared_complete());
    for (std::size_t i = 0; i < set.size(); ++i) {
      EXPECT_EQ(back[i].label, set[i].label);
      EXPECT_TRUE((back[i].op.array() == set[i].op.array()).all());
    }
  }
}

TEST(Io, SchemaErrors) {
  EXPECT_ERROR_CODE(kraus_set_from_json(json::parse(R"({"dim": 2})")), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(kraus_set_from_json(json::parse(
                        R"({"dim": 2, "outcomes": [{"label": "a", "matrix": {"rows": 2, "cols": 2, "data": [1]}}]})")),
                    ErrorCode::ParseError);
  EXPECT_ERROR_CODE(observable_preset("sz", 3), ErrorCode::DimensionMismatch);
  EXPECT_ERROR_CODE(observable_preset("q", 3), ErrorCode::UnknownObservable);
}

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace qmeter
