// Copyright 2026 The BellForge Authors
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

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellforge/bargmann.hpp"
#include "bellforge/certificates.hpp"
#include "bellforge/circuit.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/error.hpp"
#include "bellforge/fock.hpp"
#include "bellforge/search.hpp"

// JSON encodings of the public types. Readers throw SchemaViolation with the
// offending field named; writers never emit NaN.

namespace bellforge::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

[[noreturn]] inline void violation(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) violation(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) violation(where, std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) violation(where, "expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) violation(where, "expected an integer");
  return j.get<int>();
}

inline std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) violation(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(integer(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace detail

inline json to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline Complex complex_from_json(const json& j, const std::string& where) {
  return {detail::number(detail::field(j, "re", where), where + ".re"),
          detail::number(detail::field(j, "im", where), where + ".im")};
}

inline json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(Complex(m(i, j))));
    rows.push_back(row);
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) detail::violation(where, "expected an array of rows");
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  ComplexMatrix m;
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array()) detail::violation(rw, "expected an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(n, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      detail::violation(rw, "ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  if (n == 0) m.resize(0, 0);
  return m;
}

inline json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(Complex(v(i))));
  return out;
}

// -- circuits ---------------------------------------------------------------

inline json to_json(const Element& e) {
  json j;
  j["kind"] = std::string(to_string(e.kind));
  switch (e.kind) {
    case ElementKind::BeamSplitter:
      j["modes"] = {e.mode_a, e.mode_b};
      j["params"] = {{"theta", e.amount}, {"phi", e.phase}};
      break;
    case ElementKind::PhaseShifter:
      j["modes"] = {e.mode_a};
      j["params"] = {{"phi", e.phase}};
      break;
    case ElementKind::SingleModeSqueezer:
      j["modes"] = {e.mode_a};
      j["params"] = {{"r", e.amount}, {"phi", e.phase}};
      break;
    case ElementKind::TwoModeSqueezer:
      j["modes"] = {e.mode_a, e.mode_b};
      j["params"] = {{"r", e.amount}, {"phi", e.phase}};
      break;
  }
  return j;
}

inline Element element_from_json(const json& j, const std::string& where) {
  const json& kind = detail::field(j, "kind", where);
  if (!kind.is_string()) detail::violation(where + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  const std::vector<int> modes = detail::int_list(detail::field(j, "modes", where), where + ".modes");
  const json& params = detail::field(j, "params", where);
  if (!params.is_object()) detail::violation(where + ".params", "expected an object");
  auto param = [&](const char* name, bool required) -> double {
    const auto it = params.find(name);
    if (it == params.end()) {
      if (required) detail::violation(where + ".params", std::string("missing '") + name + "'");
      return 0.0;
    }
    return detail::number(*it, where + ".params." + name);
  };
  auto need_modes = [&](std::size_t n) {
    if (modes.size() != n) detail::violation(where + ".modes", k + " takes " + std::to_string(n) + " mode(s)");
  };
  if (k == "beam_splitter") {
    need_modes(2);
    return Element::beam_splitter(modes[0], modes[1], param("theta", true), param("phi", false));
  }
  if (k == "phase_shifter") {
    need_modes(1);
    return Element::phase_shifter(modes[0], param("phi", true));
  }
  if (k == "single_mode_squeezer") {
    need_modes(1);
    return Element::single_mode_squeezer(modes[0], param("r", true), param("phi", false));
  }
  if (k == "two_mode_squeezer") {
    need_modes(2);
    return Element::two_mode_squeezer(modes[0], modes[1], param("r", true), param("phi", false));
  }
  detail::violation(where + ".kind", "unknown element kind '" + k + "'");
}

inline json to_json(const CircuitSpec& spec) {
  json j;
  j["n_modes"] = spec.n_modes;
  j["elements"] = json::array();
  for (const Element& e : spec.elements) j["elements"].push_back(to_json(e));
  if (!spec.mode_labels.empty()) j["mode_labels"] = spec.mode_labels;
  return j;
}

inline CircuitSpec circuit_from_json(const json& j) {
  CircuitSpec spec;
  spec.n_modes = detail::integer(detail::field(j, "n_modes", "circuit"), "circuit.n_modes");
  const json& elements = detail::field(j, "elements", "circuit");
  if (!elements.is_array()) detail::violation("circuit.elements", "expected an array");
  for (std::size_t k = 0; k < elements.size(); ++k)
    spec.elements.push_back(element_from_json(elements[k], "circuit.elements[" + std::to_string(k) + "]"));
  if (const auto it = j.find("mode_labels"); it != j.end()) {
    if (!it->is_array()) detail::violation("circuit.mode_labels", "expected an array of strings");
    for (const json& s : *it) {
      if (!s.is_string()) detail::violation("circuit.mode_labels", "expected strings");
      spec.mode_labels.push_back(s.get<std::string>());
    }
  }
  return spec;
}

// -- states -----------------------------------------------------------------

inline json to_json(const GaussianBargmann& g) {
  return json{{"n_modes", g.n_modes()}, {"B", to_json(g.B)}, {"norm", g.norm}, {"xi_scale", g.xi_scale}};
}

/// Only B is read; norm and xi_scale are recomputed.
inline GaussianBargmann state_from_json(const json& j, const Config& cfg = default_config()) {
  const ComplexMatrix b = matrix_from_json(detail::field(j, "B", "state"), "state.B");
  if (b.rows() != b.cols()) detail::violation("state.B", "must be square");
  return GaussianBargmann::from_matrix(b, cfg);
}

inline json to_json(const BargmannPolynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back(json{{"monomial", m}, {"re", c.real()}, {"im", c.imag()}});
  return terms;
}

inline BargmannPolynomial polynomial_from_json(const json& terms, int n_modes, const std::string& where) {
  if (!terms.is_array()) detail::violation(where, "expected an array of terms");
  BargmannPolynomial p(n_modes);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const Monomial m = detail::int_list(detail::field(terms[k], "monomial", w), w + ".monomial");
    if (static_cast<int>(m.size()) != n_modes) detail::violation(w + ".monomial", "wrong number of modes");
    for (int e : m)
      if (e < 0) detail::violation(w + ".monomial", "negative exponent");
    p.add(m, {detail::number(detail::field(terms[k], "re", w), w + ".re"),
              detail::number(detail::field(terms[k], "im", w), w + ".im")});
  }
  return p;
}

inline json to_json(const DetectionPattern& p) {
  return json{{"detected", p.detected}, {"vacuum", p.vacuum}, {"outputs", p.outputs}};
}

inline json to_json(const ConditionalState& c) {
  json j;
  j["detected"] = c.pattern.detected;
  j["outputs"] = c.pattern.outputs;
  j["vacuum"] = c.pattern.vacuum;
  j["terms"] = to_json(c.poly);
  j["residual_B"] = to_json(c.residual_B);
  if (c.has_linear()) j["residual_linear"] = to_json(c.residual_linear);
  return j;
}

inline ConditionalState conditional_from_json(const json& j) {
  ConditionalState c;
  c.pattern.detected = detail::int_list(detail::field(j, "detected", "conditional"), "conditional.detected");
  c.residual_B = matrix_from_json(detail::field(j, "residual_B", "conditional"), "conditional.residual_B");
  if (c.residual_B.rows() != c.residual_B.cols()) detail::violation("conditional.residual_B", "must be square");
  const int n_out = static_cast<int>(c.residual_B.rows());
  if (const auto it = j.find("outputs"); it != j.end()) {
    c.pattern.outputs = detail::int_list(*it, "conditional.outputs");
  } else {
    for (int k = 0; k < n_out; ++k) c.pattern.outputs.push_back(k);
  }
  if (static_cast<int>(c.pattern.outputs.size()) != n_out) {
    detail::violation("conditional.outputs", "length differs from residual_B");
  }
  if (const auto it = j.find("vacuum"); it != j.end()) c.pattern.vacuum = detail::int_list(*it, "conditional.vacuum");
  c.poly = polynomial_from_json(detail::field(j, "terms", "conditional"), n_out, "conditional.terms");
  c.residual_linear = ComplexVector::Zero(n_out);
  if (const auto it = j.find("residual_linear"); it != j.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != n_out) {
      detail::violation("conditional.residual_linear", "expected one entry per output mode");
    }
    for (int k = 0; k < n_out; ++k) c.residual_linear(k) = complex_from_json((*it)[static_cast<std::size_t>(k)], "conditional.residual_linear");
  }
  if (asymmetry(c.residual_B) > default_config().symmetry_tol) {
    throw Error(ErrorCode::NonSymmetricInput, "conditional.residual_B is not symmetric");
  }
  return c;
}

// -- reports ----------------------------------------------------------------

inline json to_json(const EntanglementReport& r) {
  return json{{"bell_fidelity", r.bell_fidelity},
              {"sector_fidelity", r.sector_fidelity},
              {"vacuum_weight", r.vacuum_weight},
              {"entropy_bits", r.entropy_bits},
              {"pollution", r.pollution}};
}

inline json to_json(const NoGoCertificate& c) {
  return json{{"det_M", to_json(c.det_m)},
              {"rank_M", c.rank_m},
              {"singular_values", c.singular_values},
              {"vacuum_term", to_json(c.vacuum_term)},
              {"verdict", std::string(to_string(c.verdict))},
              {"max_fidelity_bound", c.max_fidelity_bound},
              {"quadratic_fidelity", c.quadratic_fidelity},
              {"degenerate", c.degenerate},
              {"M", to_json(c.m_tilde)}};
}

inline std::string_view to_string(FourPhotonTermKind k) {
  switch (k) {
    case FourPhotonTermKind::Pairing: return "pairing";
    case FourPhotonTermKind::PairingCross: return "pairing_cross";
    case FourPhotonTermKind::Quartic: return "quartic";
  }
  return "unknown";
}

inline json to_json(const std::vector<FourPhotonTerm>& terms) {
  json out = json::array();
  for (const FourPhotonTerm& t : terms) {
    json pairs = json::array();
    for (const auto& p : t.pairs) pairs.push_back({p[0], p[1]});
    out.push_back(json{{"kind", std::string(to_string(t.kind))}, {"pairs", pairs}, {"singles", t.singles}, {"terms", to_json(t.poly)}});
  }
  return out;
}

// -- search -----------------------------------------------------------------

inline json to_json(const SearchConfig& c) {
  return json{{"n_modes", c.n_modes},       {"n_detected", c.n_detected},
              {"xi_cap", c.xi_cap},         {"budget", c.budget},
              {"seed", c.seed},             {"objective", std::string(to_string(c.objective))},
              {"evals_per_start", c.evals_per_start}};
}

inline SearchConfig search_config_from_json(const json& j) {
  if (!j.is_object()) detail::violation("search config", "expected an object");
  SearchConfig c;
  c.n_modes = detail::integer(detail::field(j, "n_modes", "search config"), "search config.n_modes");
  c.n_detected = detail::integer(detail::field(j, "n_detected", "search config"), "search config.n_detected");
  c.xi_cap = detail::number(detail::field(j, "xi_cap", "search config"), "search config.xi_cap");
  auto unsigned_field = [&](const char* key, std::uint64_t fallback, bool required) -> std::uint64_t {
    const auto it = j.find(key);
    if (it == j.end()) {
      if (required) detail::violation("search config", std::string("missing field '") + key + "'");
      return fallback;
    }
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      detail::violation(std::string("search config.") + key, "expected a non-negative integer");
    }
    return it->get<std::uint64_t>();
  };
  c.budget = unsigned_field("budget", 0, true);
  c.seed = unsigned_field("seed", 0, true);
  c.evals_per_start = unsigned_field("evals_per_start", c.evals_per_start, false);
  if (const auto it = j.find("objective"); it != j.end()) {
    if (!it->is_string()) detail::violation("search config.objective", "expected a string");
    c.objective = objective_from_string(it->get<std::string>());
  }
  return c;
}

inline json trace_to_json(const std::vector<TracePoint>& trace) {
  json out = json::array();
  for (const TracePoint& p : trace) out.push_back({p.eval_index, p.best_fidelity});
  return out;
}

inline std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream os;
  os << "eval_index,best_fidelity\n" << std::setprecision(17);
  for (const TracePoint& p : trace) os << p.eval_index << ',' << p.best_fidelity << '\n';
  return os.str();
}

/// wall_time is omitted when `with_wall_time` is false so reruns compare byte for byte.
inline json to_json(const SearchResult& r, bool with_wall_time) {
  json j{{"best_B", to_json(r.best_state)},
         {"best_params", r.best_params},
         {"best_report", to_json(r.best_report)},
         {"evaluations", r.evaluations},
         {"starts", r.starts},
         {"trace", trace_to_json(r.trace)}};
  if (with_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

// -- files ------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, where + ": not valid JSON (" + e.what() + ")");
  }
}

}  // namespace bellforge::io
