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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include "cli.hpp"
#include "qmeter/characterize.hpp"
#include "qmeter/io.hpp"
#include "qmeter/mixture.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/random.hpp"
#include "qmeter/scenarios.hpp"
#include "qmeter/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

namespace {

using namespace qmeter;
using Mat = Matrix<double>;
using cd = std::complex<double>;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < limit_s, "runtime " + num(secs) + " s over limit");
  if (!o.pass) ++failures;
  std::printf("%s  %d %-28s %.3f s (limit %g s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name, secs, limit_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

Outcome photon_detection() {
  Outcome o;
  double worst = 0;
  for (Index n : {2, 3, 10, 40}) {
    const BosonicSpace space(n);
    const std::vector<NamedObservable> obs{{"n", eigendecompose(bosonic_operators<double>(space).number)}};
    const auto ch = characterize(photon_detector_preset(space), obs, {});
    const auto& row = ch.rows.at(0);
    o.require(row.status == "ok", "status " + row.status);
    worst = std::max({worst, std::abs(row.estimate - 1), std::abs(row.resolution), std::abs(row.disturbance - 1)});
  }
  o.require(worst <= 1e-12, "max error " + num(worst));
  if (o.pass) o.detail = "A_m=1, dn^2=0, Dn^2=1 for N in {2,3,10,40}; max error " + num(worst);
  return o;
}

Outcome qnd() {
  Outcome o;
  const double sigma = 5;
  const Index levels = 30;
  const BosonicSpace space(levels);
  const auto grid = outcome_grid(-10, 40);
  const auto set = qnd_preset(space, sigma, grid);
  const auto completeness = validate_completeness(set);
  o.require(completeness.max_deviation <= 1e-10, "completeness " + num(completeness.max_deviation));

  const auto n = eigendecompose(bosonic_operators<double>(space).number);
  double worst_dist = 0, worst_res = 0;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double m = grid[k];
    worst_dist = std::max(worst_dist, std::abs(averaged_disturbance(set[k].op, n).disturbance));
    // Oracle: p(n|m) from the Gaussian pointer weights normalized per n.
    double total = 0, mean = 0, second = 0;
    for (Index j = 0; j < levels; ++j) {
      double z = 0;
      for (double g : grid) z += std::exp(-(g - j) * (g - j) / (2 * sigma * sigma));
      const double p = std::exp(-(m - j) * (m - j) / (2 * sigma * sigma)) / z;
      total += p;
      mean += j * p;
      second += double(j) * j * p;
    }
    mean /= total;
    const double var = second / total - mean * mean;
    worst_res = std::max(worst_res, std::abs(optimal_estimate(set[k].op, n).error - var));
  }
  o.require(worst_dist <= 1e-12, "max Dn^2 " + num(worst_dist));
  o.require(worst_res <= 1e-10, "dn^2 vs oracle " + num(worst_res));
  if (o.pass) {
    o.detail = "deviation " + num(completeness.max_deviation) + ", max Dn^2 " + num(worst_dist) +
               ", dn^2 vs oracle " + num(worst_res) + " over " + std::to_string(set.size()) + " outcomes";
  }
  return o;
}

Outcome teleportation() {
  Outcome o;
  double est = 0, res = 0, dist = 0;
  for (cd alpha : {cd(0, 0), cd(0.5, 0.3), cd(1, 1)}) {
    const auto r = classical_teleportation_preset(alpha, BosonicSpace(60));
    est = std::max(est, std::abs(r.estimate - alpha));
    res = std::max({res, std::abs(r.resolution_x - 0.25), std::abs(r.resolution_y - 0.25)});
    dist = std::max({dist, std::abs(r.disturbance_x - 0.5), std::abs(r.disturbance_y - 0.5)});
  }
  o.require(est <= 1e-6, "estimate error " + num(est));
  o.require(res <= 1e-6, "resolution error " + num(res));
  o.require(dist <= 1e-4, "disturbance error " + num(dist));
  if (o.pass) o.detail = "max errors: estimate " + num(est) + ", dx^2/dy^2 " + num(res) + ", Dx^2/Dy^2 " + num(dist);
  return o;
}

VerifyResult suite_result;

Outcome relations() {
  Outcome o;
  VerifyConfig cfg;
  cfg.dims = {2, 3, 4, 5, 6};
  cfg.samples = 1000;
  cfg.seed = 1;
  cfg.threads = thread_budget();
  suite_result = run_property_suite(cfg);
  std::string summary;
  for (const auto& r : suite_result.relations) {
    o.require(r.violations == 0 && r.min_slack >= -1e-10, r.name + " min slack " + num(r.min_slack));
    o.require(r.cases == 5 * cfg.samples + 1, r.name + " ran " + std::to_string(r.cases) + " cases");
    summary += (summary.empty() ? "" : ", ") + r.name + " " + num(r.min_slack);
  }
  if (o.pass) o.detail = "min slack: " + summary;
  return o;
}

Outcome identities() {
  Outcome o;
  o.require(!suite_result.identities.empty(), "suite did not run");
  std::string summary;
  for (const auto& r : suite_result.identities) {
    o.require(r.violations == 0 && r.max_residual <= 1e-10, r.name + " residual " + num(r.max_residual));
    summary += (summary.empty() ? "" : ", ") + r.name + " " + num(r.max_residual);
  }
  if (o.pass) o.detail = "max residual: " + summary;
  return o;
}

Outcome mixture_lemma() {
  Outcome o;
  CounterRng rng(20260101, 0);
  double worst = 0;
  std::size_t bad_links = 0;
  for (int k = 0; k < 100000; ++k) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<MixtureComponent<double>> comps(n);
    double total = 0;
    for (auto& c : comps) total += (c.weight = rng.uniform() + 1e-6);
    for (auto& c : comps) {
      c.weight /= total;
      c.var_a = 2 * rng.uniform();
      c.var_b = 2 * rng.uniform();
      // Tight components (U^2 = var_a var_b) are drawn a third of the time.
      c.bound = std::sqrt(c.var_a * c.var_b) * (rng.below(3) == 0 ? 1.0 : rng.uniform());
    }
    const auto r = mixture_bound_check(comps);
    double sa = 0, sb = 0, sym = 0, geo = 0, su = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sa += comps[i].weight * comps[i].var_a;
      sb += comps[i].weight * comps[i].var_b;
      geo += comps[i].weight * std::sqrt(comps[i].var_a * comps[i].var_b);
      su += comps[i].weight * comps[i].bound;
      for (std::size_t j = 0; j < n; ++j) {
        sym += comps[i].weight * comps[j].weight * 0.5 *
               (comps[i].var_a * comps[j].var_b + comps[j].var_a * comps[i].var_b);
      }
    }
    worst = std::min(worst, sa * sb - su * su);
    const bool links = std::abs(sa * sb - sym) <= 1e-12 && sym >= geo * geo - 1e-12 && geo * geo >= su * su - 1e-12;
    const bool agree = std::abs(r.lhs - sa * sb) <= 1e-12 && std::abs(r.rhs - su * su) <= 1e-12 &&
                       std::abs(r.symmetric_sum - sym) <= 1e-12 && std::abs(r.geometric_square - geo * geo) <= 1e-12;
    if (!links || !agree || !r.satisfied || !r.symmetric_link || !r.geometric_link) ++bad_links;
  }
  o.require(worst >= -1e-12, "min lhs - rhs " + num(worst));
  o.require(bad_links == 0, std::to_string(bad_links) + " mixtures broke a chain link");
  if (o.pass) o.detail = "100000 mixtures, min lhs - rhs " + num(worst) + ", every chain link holds";
  return o;
}

std::string report_without_timestamp(const std::string& text) {
  auto doc = json::parse(text);
  doc["manifest"].erase("timestamp");
  return doc.dump();
}

Outcome monte_carlo() {
  Outcome o;
  const KrausSet<double> eve({{"0", Mat(Eigen::Vector2cd(1, 0).asDiagonal())},
                              {"1", Mat(Eigen::Vector2cd(0, 1).asDiagonal())}});
  EavesdropConfig cfg{eve, eigendecompose(pauli_z<double>()), eigendecompose(pauli_x<double>())};
  cfg.trials = 100000;
  cfg.seed = 42;
  cfg.threads = thread_budget();
  const auto r = eavesdrop_simulation(cfg);
  const auto& bx = r.basis_b.empirical;
  o.require(std::abs(bx.mean - 2.0) <= 3 * bx.std_error, "Dsx^2 " + num(bx.mean) + " +- " + num(bx.std_error));
  o.require(r.basis_b.agrees, "empirical vs analytic disagree");
  o.require(r.basis_a.empirical.mean == 0.0 && r.basis_a.analytic == 0.0, "Dsz^2 not exactly 0");

  cfg.threads = 1;
  const auto serial = eavesdrop_simulation(cfg);
  o.require(serial.basis_b.empirical.mean == bx.mean && serial.basis_b.empirical.std_error == bx.std_error,
            "thread count changed the result");

  // Two consecutive CLI runs of the same config.
  const auto dir = std::filesystem::temp_directory_path() / "qmeter_acceptance";
  std::filesystem::create_directories(dir);
  json config = {{"scenario", "eavesdrop"}, {"eve", kraus_set_to_json(eve)}, {"A", "sz"}, {"B", "sx"},
                 {"trials", 100000},        {"seed", 42}};
  write_file(dir / "eavesdrop.json", config.dump(2));
  std::string reports[2];
  for (auto& text : reports) {
    std::ostringstream out, err;
    const int code = cli::run({"scenario", (dir / "eavesdrop.json").string()}, out, err);
    o.require(code == 0, "cli exit " + std::to_string(code));
    text = out.str();
  }
  o.require(report_without_timestamp(reports[0]) == report_without_timestamp(reports[1]),
            "consecutive runs differ");
  if (o.pass) {
    o.detail = "Dsx^2 " + num(bx.mean) + " +- " + num(bx.std_error) + " (analytic " + num(r.basis_b.analytic) +
               "), Dsz^2 = 0, consecutive reports identical";
  }
  return o;
}

}  // namespace

int main() {
  criterion(1, "photon-detection", 1, photon_detection);
  criterion(2, "qnd", 5, qnd);
  criterion(3, "classical-teleportation", 10, teleportation);
  criterion(4, "uncertainty-relations", 120, relations);
  criterion(5, "structural-identities", 120, identities);
  criterion(6, "mixture-lemma", 10, mixture_lemma);
  criterion(7, "monte-carlo-consistency", 60, monte_carlo);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
