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

#include "qmeter/characterize.hpp"
#include "qmeter/format.hpp"
#include "qmeter/io.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/scenarios.hpp"
#include "qmeter/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace qmeter::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  double tol = tol::kCompleteness;
  double slack_tol = tol::kRelationSlack;
  double identity_tol = tol::kIdentity;
  double herm_tol = tol::kHermiticity;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
};

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + where + "': " + what);
}

int exit_code_for(const Error& e) { return e.code() == ErrorCode::InternalConsistency ? 1 : 2; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Error(ErrorCode::InvalidArgument, "cannot parse " + what + " '" + s + "'");
  return v;
}

/// Accepts "a", "a+bi", "a-bi", "bi" and "i".
std::complex<double> parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty complex number");
  if (s.back() != 'i') return {parse_double(s, "complex number"), 0.0};
  s.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const std::string re = split_at == std::string::npos ? "0" : s.substr(0, split_at);
  std::string im = split_at == std::string::npos ? s : s.substr(split_at);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {parse_double(re, "complex number"), parse_double(im, "complex number")};
}

std::string complex_label(std::complex<double> z) {
  const std::string im = format_number(std::abs(z.imag()));
  return format_number(z.real()) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

std::vector<Index> parse_dims(const std::string& s) {
  std::vector<Index> dims;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = static_cast<Index>(parse_double(s.substr(0, dots), "dimension"));
    const auto hi = static_cast<Index>(parse_double(s.substr(dots + 2), "dimension"));
    for (Index d = lo; d <= hi; ++d) dims.push_back(d);
  } else {
    for (const auto& p : split(s, ',')) dims.push_back(static_cast<Index>(parse_double(p, "dimension")));
  }
  if (dims.empty() || std::any_of(dims.begin(), dims.end(), [](Index d) { return d < 1; })) {
    throw Error(ErrorCode::InvalidArgument, "bad dimension list '" + s + "'");
  }
  return dims;
}

/// "start:stop" or "start:stop:step".
std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2 && parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "grid must be start:stop[:step]");
  const double step = parts.size() == 3 ? parse_double(parts[2], "grid step") : 1.0;
  return outcome_grid(parse_double(parts[0], "grid start"), parse_double(parts[1], "grid stop"), step);
}

std::vector<double> default_qnd_grid(Index dim, double sigma) {
  const double pad = std::ceil(4 * sigma);
  return outcome_grid(-pad, static_cast<double>(dim - 1) + pad);
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& s : specs) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, "pair must be A,B: '" + s + "'");
    pairs.emplace_back(parts[0], parts[1]);
  }
  return pairs;
}

std::vector<NamedObservable> preset_observables(const std::vector<std::string>& names, Index dim, double herm_tol) {
  std::vector<NamedObservable> out;
  for (const auto& n : names) out.push_back({n, eigendecompose(observable_preset(n, dim), herm_tol)});
  return out;
}

RunManifest make_manifest(const std::string& command, const Common& c) {
  RunManifest m;
  m.command = command;
  m.seed = c.seed.value_or(0);
  m.timestamp = utc_timestamp();
  return m;
}

json load_input(const fs::path& path, RunManifest& manifest) {
  manifest.inputs.emplace_back(path.string(), sha256_hex(read_file(path)));
  return read_json_file(path);
}

int emit(const Common& c, const RunManifest& manifest, const std::string& name, json body, const std::string& csv,
         std::ostream& out, const std::vector<std::pair<std::string, std::string>>& extras = {}) {
  json doc = {{"manifest", to_json(manifest)}, {"report", std::move(body)}};
  const std::string json_text = doc.dump(2) + "\n";
  const std::string csv_text = "# manifest " + to_json(manifest).dump() + "\n" + csv;
  if (c.out_dir.empty()) {
    out << (c.format == "csv" ? csv_text : json_text);
    return 0;
  }
  const fs::path dir(c.out_dir);
  write_file(dir / (name + ".json"), json_text);
  write_file(dir / (name + ".csv"), csv_text);
  out << "wrote " << (dir / (name + ".json")).string() << "\n";
  out << "wrote " << (dir / (name + ".csv")).string() << "\n";
  for (const auto& [file, contents] : extras) {
    write_file(dir / file, contents);
    out << "wrote " << (dir / file).string() << "\n";
  }
  return 0;
}

bool pairs_satisfied(const Characterization& ch) {
  return std::all_of(ch.pairs.begin(), ch.pairs.end(), [](const PairRow& p) { return p.status != "ok" || p.satisfied; });
}

// validate ------------------------------------------------------------------

int cmd_validate(const Common& c, const std::string& file, std::ostream& out, std::ostream& err) {
  auto manifest = make_manifest("validate", c);
  manifest.tolerances = {{"completeness", c.tol}};
  const auto set = kraus_set_from_json(load_input(file, manifest));
  const auto report = validate_completeness(set, c.tol);
  const char* status = report.pass ? "complete" : set.declared_complete() ? "incomplete" : "partial";
  json body = {{"dim", set.dim()},
               {"outcomes", set.size()},
               {"declared_complete", set.declared_complete()},
               {"status", status},
               {"completeness", to_json(report)}};
  std::ostringstream csv;
  csv << "dim,outcomes,declared_complete,status,max_deviation,tolerance\n"
      << set.dim() << ',' << set.size() << ',' << (set.declared_complete() ? "true" : "false") << ',' << status << ','
      << format_number(report.max_deviation) << ',' << format_number(report.tolerance) << '\n';
  err << "max deviation " << format_number(report.max_deviation) << " (tolerance " << format_number(c.tol)
      << "): " << status << "\n";
  emit(c, manifest, "validate", std::move(body), csv.str(), out);
  return report.pass || !set.declared_complete() ? 0 : 1;
}

// characterize --------------------------------------------------------------

struct CharacterizeArgs {
  std::string kraus_file;
  std::string observables_file;
  std::optional<std::string> outcome;
  std::vector<std::string> pairs;
  std::string preset;
  std::string alpha = "0";
  std::optional<Index> dim;
  double sigma = 5;
  std::string grid;
  std::string observables;
};

int cmd_characterize(const Common& c, const CharacterizeArgs& a, std::ostream& out, std::ostream& err) {
  auto manifest = make_manifest("characterize", c);
  manifest.tolerances = {{"completeness", c.tol}, {"slack", c.slack_tol}, {"hermiticity", c.herm_tol}};

  std::optional<KrausSet<double>> set;
  std::optional<TeleportationReport> teleport;
  std::vector<std::string> default_observables;
  std::vector<std::string> default_pairs;
  json preset_info;
  if (!a.preset.empty()) {
    if (!a.kraus_file.empty()) throw Error(ErrorCode::InvalidArgument, "--preset replaces the measurement file");
    if (a.preset == "photon") {
      const BosonicSpace space(a.dim.value_or(2));
      set = photon_detector_preset(space);
      default_observables = {"n", "x"};
      default_pairs = {"n,x"};
      preset_info = {{"name", "photon"}, {"dim", space.dim()}};
    } else if (a.preset == "qnd") {
      if (!(a.sigma > 0)) throw Error(ErrorCode::InvalidArgument, "--sigma must be positive");
      const BosonicSpace space(a.dim.value_or(30));
      const auto grid = a.grid.empty() ? default_qnd_grid(space.dim(), a.sigma) : parse_grid(a.grid);
      set = qnd_preset(space, a.sigma, grid);
      default_observables = {"n", "x"};
      default_pairs = {"n,x"};
      preset_info = {{"name", "qnd"}, {"dim", space.dim()}, {"sigma", a.sigma}, {"grid", grid}};
    } else if (a.preset == "classical-teleport") {
      const BosonicSpace space(a.dim.value_or(60));
      const auto alpha = parse_complex(a.alpha);
      teleport = classical_teleportation_preset(alpha, space);
      set = KrausSet<double>({{"alpha=" + complex_label(alpha), coherent_projection(alpha, space)}}, false);
      default_observables = {"x", "y"};
      default_pairs = {"x,y", "y,x"};
      preset_info = {{"name", "classical-teleport"}, {"dim", space.dim()}, {"alpha", {alpha.real(), alpha.imag()}}};
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown preset '" + a.preset + "' (photon, qnd, classical-teleport)");
    }
  } else {
    if (a.kraus_file.empty()) throw Error(ErrorCode::InvalidArgument, "need a measurement file or --preset");
    set = kraus_set_from_json(load_input(a.kraus_file, manifest));
  }

  std::vector<NamedObservable> observables;
  if (!a.observables.empty()) {
    observables = preset_observables(split(a.observables, ','), set->dim(), c.herm_tol);
  } else if (!a.observables_file.empty()) {
    observables = observables_from_json(load_input(a.observables_file, manifest), c.herm_tol);
  } else if (!default_observables.empty()) {
    observables = preset_observables(default_observables, set->dim(), c.herm_tol);
  } else {
    throw Error(ErrorCode::InvalidArgument, "need an observables file or --observables");
  }
  const auto pairs = parse_pairs(a.pairs.empty() && a.observables.empty() && a.observables_file.empty()
                                     ? default_pairs
                                     : a.pairs);

  const auto ch = characterize(*set, observables, pairs, a.outcome, c.tol, c.slack_tol);
  json body = to_json(ch);
  if (!preset_info.is_null()) body["preset"] = preset_info;
  if (teleport) body["teleportation"] = to_json(*teleport);
  for (const auto& row : ch.rows) {
    if (row.status != "ok") err << "outcome " << row.outcome << ", " << row.observable << ": " << row.status << "\n";
  }
  const bool ok = pairs_satisfied(ch);
  if (!ok) err << "uncertainty relation violated beyond slack tolerance\n";
  emit(c, manifest, "characterize", std::move(body), characterization_csv(ch), out);
  return ok ? 0 : 1;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string dims = "2..6";
  std::size_t samples = 1000;
  double fault_bound_scale = 1.0;
};

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  VerifyConfig cfg;
  cfg.dims = parse_dims(a.dims);
  cfg.samples = a.samples;
  cfg.seed = c.seed.value_or(1);
  cfg.slack_tol = c.slack_tol;
  cfg.identity_tol = c.identity_tol;
  cfg.bound_scale = a.fault_bound_scale;
  cfg.threads = thread_budget();

  auto manifest = make_manifest("verify", c);
  manifest.seed = cfg.seed;
  manifest.tolerances = {{"slack", cfg.slack_tol}, {"identity", cfg.identity_tol}};
  if (cfg.bound_scale != 1.0) manifest.tolerances["bound_scale"] = cfg.bound_scale;

  const auto result = run_property_suite(cfg);
  json body = to_json(result);
  body["dims"] = cfg.dims;
  body["samples"] = cfg.samples;
  for (const auto& r : result.relations) {
    err << r.name << ": " << r.cases << " cases, min slack " << format_number(r.min_slack) << ", " << r.violations
        << " violations\n";
  }
  for (const auto& r : result.identities) {
    err << r.name << ": " << r.cases << " cases, max residual " << format_number(r.max_residual) << ", "
        << r.violations << " violations\n";
  }
  std::vector<std::pair<std::string, std::string>> extras;
  if (result.first_failure) {
    const auto& f = *result.first_failure;
    err << "first failure: " << f.relation << " (dim " << f.dim << ", sample " << f.sample << ")\n";
    extras.emplace_back("counterexample.json", body["first_failure"].dump(2) + "\n");
  }
  emit(c, manifest, "verify", std::move(body), verify_csv(result), out, extras);
  return result.pass ? 0 : 1;
}

// scenario ------------------------------------------------------------------

const json* optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& required_field(const json& j, const char* key, const std::string& where) {
  if (const json* v = optional_field(j, key)) return *v;
  config_error(where + "." + key, "missing");
}

double number_field(const json& j, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  const json* v = optional_field(j, key);
  if (!v) {
    if (fallback) return *fallback;
    config_error(where + "." + key, "missing");
  }
  if (!v->is_number()) config_error(where + "." + key, "expected a number");
  return v->get<double>();
}

std::int64_t int_field(const json& j, const char* key, const std::string& where,
                       std::optional<std::int64_t> fallback = {}) {
  const json* v = optional_field(j, key);
  if (!v) {
    if (fallback) return *fallback;
    config_error(where + "." + key, "missing");
  }
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
    config_error(where + "." + key, "expected a non-negative integer");
  }
  return v->get<std::int64_t>();
}

std::complex<double> complex_field(const json& j, const std::string& where) {
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  config_error(where, "expected \"a+bi\", a number or [re, im]");
}

/// A preset name, {"preset": name} or {"matrix": <matrix>}.
HermitianObservable<double> observable_field(const json& j, Index dim, double herm_tol, const std::string& where) {
  if (j.is_string()) return eigendecompose(observable_preset(j.get<std::string>(), dim), herm_tol);
  if (j.is_object()) {
    if (const json* p = optional_field(j, "preset")) {
      if (!p->is_string()) config_error(where + ".preset", "expected a string");
      return eigendecompose(observable_preset(p->get<std::string>(), dim), herm_tol);
    }
    const auto m = matrix_from_json(required_field(j, "matrix", where), where + ".matrix");
    if (m.rows() != dim || m.cols() != dim) config_error(where + ".matrix", "dimension differs from the scenario");
    return eigendecompose(m, herm_tol);
  }
  config_error(where, "expected a preset name or an object");
}

std::vector<double> grid_field(const json& cfg, Index dim, double sigma) {
  const json* g = optional_field(cfg, "grid");
  if (!g) return default_qnd_grid(dim, sigma);
  if (g->is_array()) {
    std::vector<double> grid;
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!(*g)[i].is_number()) config_error("$.grid[" + std::to_string(i) + "]", "expected a number");
      grid.push_back((*g)[i].get<double>());
    }
    if (grid.empty()) config_error("$.grid", "empty");
    return grid;
  }
  return outcome_grid(number_field(*g, "start", "$.grid"), number_field(*g, "stop", "$.grid"),
                      number_field(*g, "step", "$.grid", 1.0));
}

struct ObservableSelection {
  std::vector<NamedObservable> observables;
  std::vector<std::pair<std::string, std::string>> pairs;
};

ObservableSelection selection_field(const json& cfg, Index dim, double herm_tol) {
  ObservableSelection sel;
  std::vector<std::string> names{"n", "x"};
  if (const json* list = optional_field(cfg, "observables")) {
    if (!list->is_array()) config_error("$.observables", "expected a list of preset names");
    names.clear();
    for (std::size_t i = 0; i < list->size(); ++i) {
      if (!(*list)[i].is_string()) config_error("$.observables[" + std::to_string(i) + "]", "expected a preset name");
      names.push_back((*list)[i].get<std::string>());
    }
  }
  sel.observables = preset_observables(names, dim, herm_tol);
  if (const json* list = optional_field(cfg, "pairs")) {
    if (!list->is_array()) config_error("$.pairs", "expected a list of [A, B]");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const json& p = (*list)[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
        config_error("$.pairs[" + std::to_string(i) + "]", "expected [A, B]");
      }
      sel.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  } else if (names.size() >= 2) {
    sel.pairs.emplace_back(names[0], names[1]);
  }
  return sel;
}

int scenario_characterization(const Common& c, RunManifest& manifest, const std::string& name,
                              const KrausSet<double>& set, const json& cfg, json info, std::ostream& out,
                              std::ostream& err) {
  const auto sel = selection_field(cfg, set.dim(), c.herm_tol);
  std::optional<std::string> only;
  if (const json* o = optional_field(cfg, "outcome")) {
    if (o->is_string()) {
      only = o->get<std::string>();
    } else if (o->is_number()) {
      only = format_number(o->get<double>());
    } else {
      config_error("$.outcome", "expected a label");
    }
  }
  const auto ch = characterize(set, sel.observables, sel.pairs, only, c.tol, c.slack_tol);
  json body = {{"scenario", name}, {"config", std::move(info)}, {"result", to_json(ch)}};
  const bool ok = pairs_satisfied(ch);
  if (!ok) err << "uncertainty relation violated beyond slack tolerance\n";
  emit(c, manifest, name, std::move(body), characterization_csv(ch), out);
  return ok ? 0 : 1;
}

int cmd_scenario(const Common& c, const std::string& file, std::ostream& out, std::ostream& err) {
  auto manifest = make_manifest("scenario", c);
  manifest.tolerances = {{"completeness", c.tol}, {"slack", c.slack_tol}, {"hermiticity", c.herm_tol}};
  const json cfg = load_input(file, manifest);
  if (!cfg.is_object()) config_error("$", "expected an object");
  const json& kind_j = required_field(cfg, "scenario", "$");
  if (!kind_j.is_string()) config_error("$.scenario", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "eavesdrop") {
    const json& eve_j = required_field(cfg, "eve", "$");
    std::optional<KrausSet<double>> eve;
    if (eve_j.is_string()) {
      const fs::path p = fs::path(file).parent_path() / eve_j.get<std::string>();
      eve = kraus_set_from_json(load_input(p, manifest), "$.eve");
    } else {
      eve = kraus_set_from_json(eve_j, "$.eve");
    }
    const Index dim = eve->dim();
    EavesdropConfig ec{*eve, observable_field(required_field(cfg, "A", "$"), dim, c.herm_tol, "$.A"),
                       observable_field(required_field(cfg, "B", "$"), dim, c.herm_tol, "$.B")};
    auto label = [](const json& j, const char* fallback) {
      if (j.is_string()) return j.get<std::string>();
      if (j.is_object() && j.contains("preset") && j["preset"].is_string()) return j["preset"].get<std::string>();
      return std::string(fallback);
    };
    ec.name_a = label(cfg["A"], "A");
    ec.name_b = label(cfg["B"], "B");
    ec.trials = static_cast<std::uint64_t>(int_field(cfg, "trials", "$", 100000));
    ec.seed = c.seed ? *c.seed : static_cast<std::uint64_t>(int_field(cfg, "seed", "$", 0));
    ec.threads = thread_budget();
    ec.completeness_tol = c.tol;
    if (const json* f = optional_field(cfg, "forward")) {
      if (*f == "resend") {
        ec.forward = ForwardStrategy::Resend;
      } else if (*f == "reprepare") {
        ec.forward = ForwardStrategy::Reprepare;
      } else {
        config_error("$.forward", "expected \"resend\" or \"reprepare\"");
      }
    }
    if (const json* states = optional_field(cfg, "reprepare_states")) {
      if (!states->is_array()) config_error("$.reprepare_states", "expected a list of vectors");
      for (std::size_t i = 0; i < states->size(); ++i) {
        ec.reprepare_states.push_back(vector_from_json((*states)[i], "$.reprepare_states[" + std::to_string(i) + "]"));
      }
    }
    manifest.seed = ec.seed;
    const auto report = eavesdrop_simulation(ec);
    for (const BasisDisturbance* b : {&report.basis_a, &report.basis_b}) {
      err << b->observable << ": analytic " << format_number(b->analytic) << ", empirical "
          << format_number(b->empirical.mean) << " +- " << format_number(b->empirical.std_error) << "\n";
    }
    json body = {{"scenario", kind}, {"result", to_json(report)}};
    return emit(c, manifest, kind, std::move(body), eavesdrop_csv(report), out);
  }

  if (kind == "photon") {
    const BosonicSpace space(int_field(cfg, "dim", "$", 2));
    return scenario_characterization(c, manifest, kind, photon_detector_preset(space), cfg, {{"dim", space.dim()}},
                                     out, err);
  }

  if (kind == "qnd") {
    const BosonicSpace space(int_field(cfg, "dim", "$"));
    const double sigma = number_field(cfg, "sigma", "$");
    if (!(sigma > 0)) config_error("$.sigma", "must be positive");
    const auto grid = grid_field(cfg, space.dim(), sigma);
    return scenario_characterization(c, manifest, kind, qnd_preset(space, sigma, grid), cfg,
                                     {{"dim", space.dim()}, {"sigma", sigma}, {"grid", grid}}, out, err);
  }

  if (kind == "teleport") {
    const BosonicSpace space(int_field(cfg, "dim", "$", 60));
    const auto alpha = complex_field(required_field(cfg, "alpha", "$"), "$.alpha");
    const double tail = number_field(cfg, "tail_threshold", "$", tol::kCoherentTail);
    manifest.tolerances["coherent_tail"] = tail;
    const auto report = classical_teleportation_preset(alpha, space, tail);
    json body = {{"scenario", kind}, {"config", {{"dim", space.dim()}}}, {"result", to_json(report)}};
    if (const json* g = optional_field(cfg, "grid_check")) {
      const double half = number_field(*g, "half_width", "$.grid_check");
      const double h = number_field(*g, "spacing", "$.grid_check");
      const auto levels = int_field(*g, "levels", "$.grid_check");
      if (!(half > 0) || !(h > 0) || levels < 1) config_error("$.grid_check", "needs positive values");
      body["grid_check"] = {{"half_width", half},
                            {"spacing", h},
                            {"levels", levels},
                            {"deviation", teleportation_grid_deviation(space, half, h, levels)}};
    }
    return emit(c, manifest, kind, std::move(body), teleportation_csv(report), out);
  }

  if (kind == "cloning") {
    const json& list = required_field(cfg, "states", "$");
    if (!list.is_array() || list.empty()) config_error("$.states", "expected a non-empty list of vectors");
    std::vector<Vector<double>> states;
    for (std::size_t i = 0; i < list.size(); ++i) {
      states.push_back(vector_from_json(list[i], "$.states[" + std::to_string(i) + "]"));
      if (states.back().size() != states.front().size()) {
        config_error("$.states[" + std::to_string(i) + "]", "length differs from the first state");
      }
    }
    const Index dim = states.front().size();
    const auto a = observable_field(required_field(cfg, "A", "$"), dim, c.herm_tol, "$.A");
    const auto b = observable_field(required_field(cfg, "B", "$"), dim, c.herm_tol, "$.B");
    const auto report = cloning_error(states, a, b);
    json body = {{"scenario", kind}, {"result", to_json(report)}};
    return emit(c, manifest, kind, std::move(body), cloning_csv(report), out);
  }

  if (kind == "frontier") {
    const BosonicSpace space(int_field(cfg, "dim", "$"));
    const json& list = required_field(cfg, "sigmas", "$");
    if (!list.is_array() || list.empty()) config_error("$.sigmas", "expected a non-empty list");
    std::vector<double> sigmas;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_number() || !(list[i].get<double>() > 0)) {
        config_error("$.sigmas[" + std::to_string(i) + "]", "expected a positive number");
      }
      sigmas.push_back(list[i].get<double>());
    }
    const double outcome = number_field(cfg, "outcome", "$");
    const auto grid = grid_field(cfg, space.dim(), *std::max_element(sigmas.begin(), sigmas.end()));
    const auto points = qnd_frontier(space, sigmas, grid, outcome);
    json rows = json::array();
    std::ostringstream csv;
    csv << "sigma,outcome,resolution,disturbance,bound\n";
    for (const auto& p : points) {
      rows.push_back({{"sigma", p.sigma},
                      {"outcome", p.outcome},
                      {"resolution", p.resolution},
                      {"disturbance", p.disturbance},
                      {"bound", p.bound}});
      csv << format_number(p.sigma) << ',' << p.outcome << ',' << format_number(p.resolution) << ','
          << format_number(p.disturbance) << ',' << format_number(p.bound) << '\n';
    }
    json body = {{"scenario", kind}, {"config", {{"dim", space.dim()}, {"grid", grid}}}, {"points", rows}};
    return emit(c, manifest, kind, std::move(body), csv.str(), out, {{"frontier.tsv", frontier_tsv(points)}});
  }

  config_error("$.scenario", "unknown scenario '" + kind + "' (eavesdrop, photon, qnd, teleport, cloning, frontier)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement resolution, back action and uncertainty checks for quantum measurements", "qmeter"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Common common;
  std::optional<std::uint64_t> seed;
  app.add_option("--tol", common.tol, "completeness tolerance")->capture_default_str();
  app.add_option("--slack-tol", common.slack_tol, "allowed negative slack of uncertainty relations")
      ->capture_default_str();
  app.add_option("--identity-tol", common.identity_tol, "residual tolerance of structural identities")
      ->capture_default_str();
  app.add_option("--herm-tol", common.herm_tol, "hermiticity tolerance for observables")->capture_default_str();
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", common.out_dir, "write reports into this directory");
  app.add_option("--format", common.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check that a measurement set is complete");
  validate->add_option("file", validate_file, "measurement set JSON")->required();

  CharacterizeArgs ca;
  auto* charact = app.add_subcommand("characterize", "resolution and disturbance per outcome and observable");
  charact->add_option("measurements", ca.kraus_file, "measurement set JSON");
  charact->add_option("observables-file", ca.observables_file, "observables JSON");
  charact->add_option("--outcome", ca.outcome, "only this outcome label");
  charact->add_option("--pair", ca.pairs, "observable pair A,B (repeatable)");
  charact->add_option("--preset", ca.preset, "photon | qnd | classical-teleport");
  charact->add_option("--alpha", ca.alpha, "coherent amplitude, e.g. 0.5+0.3i")->capture_default_str();
  charact->add_option("--dim", ca.dim, "Fock space dimension for presets");
  charact->add_option("--sigma", ca.sigma, "QND pointer width")->capture_default_str();
  charact->add_option("--grid", ca.grid, "QND outcome grid start:stop[:step]");
  charact->add_option("--observables", ca.observables, "comma-separated preset observables (sz sx sy n x y)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "randomized check of the uncertainty relations");
  verify->add_option("--dims", va.dims, "dimensions, 2..6 or 2,3,4")->capture_default_str();
  verify->add_option("--samples", va.samples, "random cases per dimension")->capture_default_str();
  verify->add_option("--fault-bound-scale", va.fault_bound_scale)->group("");

  std::string scenario_file;
  auto* scenario = app.add_subcommand("scenario", "run a scenario config");
  scenario->add_option("config", scenario_file, "scenario JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  common.seed = seed;

  try {
    if (*validate) return cmd_validate(common, validate_file, out, err);
    if (*charact) return cmd_characterize(common, ca, out, err);
    if (*verify) return cmd_verify(common, va, out, err);
    return cmd_scenario(common, scenario_file, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qmeter::cli
