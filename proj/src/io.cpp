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

#include "qmeter/io.hpp"

#include "qmeter/format.hpp"
#include "qmeter/operator_core.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qmeter {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + where + "': " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where + "." + key, "missing");
  return *it;
}

std::int64_t positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) schema_error(where, "expected a positive integer");
  return j.get<std::int64_t>();
}

std::complex<double> complex_entry(const json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    schema_error(where, "expected [re, im]");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

std::string csv_num(double v) { return format_number(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json resolution_disturbance_json(const ResolutionDisturbanceReport<double>& r) {
  return {{"resolution", r.resolution},
          {"disturbance", r.disturbance},
          {"bound", r.bound},
          {"slack", r.slack},
          {"satisfied", r.satisfied},
          {"averaged_joint_resolution", r.averaged_joint_resolution},
          {"averaged_disturbance", r.averaged_disturbance},
          {"intermediate_bound", r.intermediate_bound},
          {"chain_satisfied", r.chain_satisfied},
          {"mixture",
           {{"lhs", r.mixture.lhs},
            {"symmetric_sum", r.mixture.symmetric_sum},
            {"geometric_square", r.mixture.geometric_square},
            {"rhs", r.mixture.rhs},
            {"satisfied", r.mixture.satisfied}}}};
}

json stat_json(const EmpiricalStat& s) { return {{"count", s.count}, {"mean", s.mean}, {"std_error", s.std_error}}; }

}  // namespace

json matrix_to_json(const Matrix<double>& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back(complex_json(m(i, k)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix<double> matrix_from_json(const json& j, const std::string& where) {
  const auto rows = positive_int(field(j, "rows", where), where + ".rows");
  const auto cols = positive_int(field(j, "cols", where), where + ".cols");
  const json& data = field(j, "data", where);
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    schema_error(where + ".data", "expected " + std::to_string(rows * cols) + " entries");
  }
  Matrix<double> m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      m(i, k) = complex_entry(data[idx], where + ".data[" + std::to_string(idx) + "]");
    }
  }
  return m;
}

Vector<double> vector_from_json(const json& j, const std::string& where) {
  if (j.is_object()) {
    const Matrix<double> m = matrix_from_json(j, where);
    if (m.cols() != 1) schema_error(where + ".cols", "expected a single column");
    return m.col(0);
  }
  if (!j.is_array() || j.empty()) schema_error(where, "expected a matrix literal or a list of [re, im]");
  Vector<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_entry(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

json kraus_set_to_json(const KrausSet<double>& set) {
  json outcomes = json::array();
  for (const auto& o : set.outcomes()) outcomes.push_back({{"label", o.label}, {"matrix", matrix_to_json(o.op)}});
  return {{"dim", set.dim()}, {"outcomes", std::move(outcomes)}, {"complete", set.declared_complete()}};
}

KrausSet<double> kraus_set_from_json(const json& j, const std::string& root) {
  const auto dim = positive_int(field(j, "dim", root), root + ".dim");
  const json& list = field(j, "outcomes", root);
  if (!list.is_array() || list.empty()) schema_error(root + ".outcomes", "expected a non-empty list");
  bool complete = true;
  if (auto it = j.find("complete"); it != j.end()) {
    if (!it->is_boolean()) schema_error(root + ".complete", "expected true or false");
    complete = it->get<bool>();
  }
  std::vector<Outcome<double>> outcomes;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = root + ".outcomes[" + std::to_string(i) + "]";
    const json& label = field(list[i], "label", where);
    std::string name;
    if (label.is_string()) {
      name = label.get<std::string>();
    } else if (label.is_number_integer()) {
      name = std::to_string(label.get<std::int64_t>());
    } else {
      schema_error(where + ".label", "expected a string or integer");
    }
    Matrix<double> m = matrix_from_json(field(list[i], "matrix", where), where + ".matrix");
    if (m.rows() != dim || m.cols() != dim) schema_error(where + ".matrix", "expected " + std::to_string(dim) + "x" + std::to_string(dim));
    outcomes.push_back({std::move(name), std::move(m)});
  }
  try {
    return KrausSet<double>(std::move(outcomes), complete);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Matrix<double> observable_preset(const std::string& name, Index dim) {
  if (name == "sz" || name == "sx" || name == "sy") {
    if (dim != 2) throw Error(ErrorCode::DimensionMismatch, "preset '" + name + "' needs dim 2");
    return name == "sz" ? pauli_z<double>() : name == "sx" ? pauli_x<double>() : pauli_y<double>();
  }
  if (name == "n" || name == "x" || name == "y") {
    const auto ops = bosonic_operators<double>(BosonicSpace(dim));
    return name == "n" ? ops.number : name == "x" ? ops.x : ops.y;
  }
  throw Error(ErrorCode::UnknownObservable, "no preset observable '" + name + "' (known: sz sx sy n x y)");
}

std::vector<NamedObservable> observables_from_json(const json& j, double hermiticity_tol,
                                                  const std::string& root) {
  const auto dim = positive_int(field(j, "dim", root), root + ".dim");
  const json& list = field(j, "observables", root);
  if (!list.is_array()) schema_error(root + ".observables", "expected a list");
  std::vector<NamedObservable> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = root + ".observables[" + std::to_string(i) + "]";
    const json& name = field(list[i], "name", where);
    if (!name.is_string()) schema_error(where + ".name", "expected a string");
    Matrix<double> m;
    if (auto p = list[i].find("preset"); p != list[i].end()) {
      if (!p->is_string()) schema_error(where + ".preset", "expected a string");
      m = observable_preset(p->get<std::string>(), dim);
    } else {
      m = matrix_from_json(field(list[i], "matrix", where), where + ".matrix");
      if (m.rows() != dim || m.cols() != dim) schema_error(where + ".matrix", "dimension differs from $.dim");
    }
    out.push_back({name.get<std::string>(), eigendecompose(m, hermiticity_tol)});
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << contents;
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InternalConsistency, "sha256 failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const RunManifest& m) {
  json inputs = json::array();
  for (const auto& [path, digest] : m.inputs) inputs.push_back({{"path", path}, {"sha256", digest}});
  json tolerances = json::object();
  for (const auto& [k, v] : m.tolerances) tolerances[k] = v;
  return {{"command", m.command}, {"inputs", std::move(inputs)}, {"tolerances", std::move(tolerances)},
          {"seed", m.seed},       {"version", m.version},        {"timestamp", m.timestamp}};
}

json to_json(const CompletenessReport<double>& r) {
  return {{"max_deviation", r.max_deviation}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

json to_json(const Characterization& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"outcome", r.outcome},
                    {"observable", r.observable},
                    {"status", r.status},
                    {"weight", r.weight},
                    {"estimate", r.estimate},
                    {"resolution", r.resolution},
                    {"disturbance", r.disturbance}});
  }
  json pairs = json::array();
  for (const auto& p : c.pairs) {
    pairs.push_back({{"outcome", p.outcome},
                     {"A", p.a},
                     {"B", p.b},
                     {"status", p.status},
                     {"resolution_A", p.resolution_a},
                     {"resolution_B", p.resolution_b},
                     {"disturbance_B", p.disturbance_b},
                     {"bound", p.bound},
                     {"resolution_slack", p.resolution_slack},
                     {"disturbance_slack", p.disturbance_slack},
                     {"intermediate_bound", p.intermediate_bound},
                     {"satisfied", p.satisfied}});
  }
  return {{"completeness", to_json(c.completeness)}, {"rows", std::move(rows)}, {"pairs", std::move(pairs)}};
}

json to_json(const TeleportationReport& r) {
  return {{"alpha", complex_json(r.alpha)},
          {"estimate", complex_json(r.estimate)},
          {"resolution_x", r.resolution_x},
          {"resolution_y", r.resolution_y},
          {"disturbance_x", r.disturbance_x},
          {"disturbance_y", r.disturbance_y},
          {"tail_mass", r.tail_mass},
          {"x_vs_y", resolution_disturbance_json(r.x_vs_y)},
          {"y_vs_x", resolution_disturbance_json(r.y_vs_x)}};
}

json to_json(const EavesdropReport& r) {
  auto basis = [](const BasisDisturbance& b) {
    json per = json::array();
    for (const auto& o : b.per_outcome) {
      per.push_back({{"outcome", o.outcome},
                     {"weight", o.weight},
                     {"analytic", o.analytic},
                     {"empirical", stat_json(o.empirical)},
                     {"agrees", o.agrees}});
    }
    return json{{"observable", b.observable},
                {"analytic", b.analytic},
                {"empirical", stat_json(b.empirical)},
                {"agrees", b.agrees},
                {"per_outcome", std::move(per)}};
  };
  return {{"trials", r.trials},
          {"seed", r.seed},
          {"forward", r.forward == ForwardStrategy::Resend ? "resend" : "reprepare"},
          {"completeness_deviation", r.completeness_deviation},
          {"basis_A", basis(r.basis_a)},
          {"basis_B", basis(r.basis_b)}};
}

json to_json(const CloningReport& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back({{"outcome", o.outcome},
                        {"estimate_A", o.estimate_a.estimate},
                        {"resolution_A", o.estimate_a.error},
                        {"estimate_B", o.estimate_b.estimate},
                        {"resolution_B", o.estimate_b.error},
                        {"clone_error_A", o.disturbance_a},
                        {"clone_error_B", o.disturbance_b},
                        {"A_vs_B", resolution_disturbance_json(o.a_vs_b)}});
  }
  return {{"completeness_deviation", r.completeness_deviation}, {"outcomes", std::move(outcomes)}};
}

json to_json(const VerifyResult& r) {
  json relations = json::array();
  for (const auto& s : r.relations) {
    relations.push_back({{"name", s.name},
                         {"statement", s.statement},
                         {"cases", s.cases},
                         {"min_slack", s.min_slack},
                         {"violations", s.violations}});
  }
  json identities = json::array();
  for (const auto& s : r.identities) {
    identities.push_back({{"name", s.name},
                          {"statement", s.statement},
                          {"cases", s.cases},
                          {"max_residual", s.max_residual},
                          {"violations", s.violations}});
  }
  json out = {{"pass", r.pass}, {"relations", std::move(relations)}, {"identities", std::move(identities)}};
  if (r.first_failure) {
    const auto& f = *r.first_failure;
    out["first_failure"] = {{"relation", f.relation}, {"dim", f.dim},          {"sample", f.sample},
                            {"value", f.value},       {"M", matrix_to_json(f.m)}, {"A", matrix_to_json(f.a)},
                            {"B", matrix_to_json(f.b)}};
  }
  return out;
}

json to_json(const DisturbanceReport<double>& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"B_f", rec.final_value},
                       {"w", rec.weight},
                       {"B_mf", rec.estimate},
                       {"delta2", rec.random},
                       {"systematic", rec.systematic},
                       {"Delta2", rec.total}});
  }
  return {{"disturbance", r.disturbance}, {"trace_form", r.trace_form}, {"records", std::move(records)}};
}

std::string characterization_csv(const Characterization& c) {
  std::ostringstream ss;
  ss << "outcome,observable,status,weight,estimate,resolution,disturbance\n";
  for (const auto& r : c.rows) {
    ss << csv_field(r.outcome) << ',' << csv_field(r.observable) << ',' << r.status << ',' << csv_num(r.weight) << ','
       << csv_num(r.estimate) << ',' << csv_num(r.resolution) << ',' << csv_num(r.disturbance) << '\n';
  }
  return ss.str();
}

std::string eavesdrop_csv(const EavesdropReport& r) {
  std::ostringstream ss;
  ss << "observable,outcome,weight,analytic,count,empirical_mean,std_error,agrees\n";
  for (const BasisDisturbance* b : {&r.basis_a, &r.basis_b}) {
    for (const auto& o : b->per_outcome) {
      ss << csv_field(b->observable) << ',' << csv_field(o.outcome) << ',' << csv_num(o.weight) << ','
         << csv_num(o.analytic) << ',' << o.empirical.count << ',' << csv_num(o.empirical.mean) << ','
         << csv_num(o.empirical.std_error) << ',' << (o.agrees ? "true" : "false") << '\n';
    }
    ss << csv_field(b->observable) << ",all,1," << csv_num(b->analytic) << ',' << b->empirical.count << ','
       << csv_num(b->empirical.mean) << ',' << csv_num(b->empirical.std_error) << ',' << (b->agrees ? "true" : "false")
       << '\n';
  }
  return ss.str();
}

std::string cloning_csv(const CloningReport& r) {
  std::ostringstream ss;
  ss << "outcome,estimate_A,resolution_A,clone_error_A,estimate_B,resolution_B,clone_error_B,bound,slack\n";
  for (const auto& o : r.outcomes) {
    ss << o.outcome << ',' << csv_num(o.estimate_a.estimate) << ',' << csv_num(o.estimate_a.error) << ','
       << csv_num(o.disturbance_a) << ',' << csv_num(o.estimate_b.estimate) << ',' << csv_num(o.estimate_b.error) << ','
       << csv_num(o.disturbance_b) << ',' << csv_num(o.a_vs_b.bound) << ',' << csv_num(o.a_vs_b.slack) << '\n';
  }
  return ss.str();
}

std::string verify_csv(const VerifyResult& r) {
  std::ostringstream ss;
  ss << "kind,name,cases,value,violations\n";
  for (const auto& s : r.relations) {
    ss << "relation," << s.name << ',' << s.cases << ',' << csv_num(s.min_slack) << ',' << s.violations << '\n';
  }
  for (const auto& s : r.identities) {
    ss << "identity," << s.name << ',' << s.cases << ',' << csv_num(s.max_residual) << ',' << s.violations << '\n';
  }
  return ss.str();
}

std::string teleportation_csv(const TeleportationReport& r) {
  std::ostringstream ss;
  ss << "alpha_re,alpha_im,x,y,resolution_x,resolution_y,disturbance_x,disturbance_y,tail_mass\n";
  ss << csv_num(r.alpha.real()) << ',' << csv_num(r.alpha.imag()) << ',' << csv_num(r.estimate.real()) << ','
     << csv_num(r.estimate.imag()) << ',' << csv_num(r.resolution_x) << ',' << csv_num(r.resolution_y) << ','
     << csv_num(r.disturbance_x) << ',' << csv_num(r.disturbance_y) << ',' << csv_num(r.tail_mass) << '\n';
  return ss.str();
}

std::string disturbance_csv(const std::string& outcome, const std::string& observable,
                            const DisturbanceReport<double>& r) {
  std::ostringstream ss;
  ss << "outcome,observable,B_f,w,delta2,systematic,Delta2\n";
  for (const auto& rec : r.records) {
    ss << csv_field(outcome) << ',' << csv_field(observable) << ',' << csv_num(rec.final_value) << ','
       << csv_num(rec.weight) << ',' << csv_num(rec.random) << ',' << csv_num(rec.systematic) << ','
       << csv_num(rec.total) << '\n';
  }
  return ss.str();
}

std::string frontier_tsv(const std::vector<FrontierPoint>& points) {
  std::ostringstream ss;
  ss << "# sigma\tresolution\tdisturbance\tbound\tproduct\n";
  for (const auto& p : points) {
    ss << csv_num(p.sigma) << '\t' << csv_num(p.resolution) << '\t' << csv_num(p.disturbance) << '\t'
       << csv_num(p.bound) << '\t' << csv_num(p.resolution * p.disturbance) << '\n';
  }
  return ss.str();
}

}  // namespace qmeter
