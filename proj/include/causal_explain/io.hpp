/*
 * Copyright 2026 The causal-explain Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "causal_explain/axioms.hpp"
#include "causal_explain/causal_model.hpp"
#include "causal_explain/causes.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"
#include "causal_explain/indices.hpp"
#include "causal_explain/rational.hpp"
#include "causal_explain/sampling.hpp"

namespace causal_explain {

// nlohmann::json keeps object keys in a std::map, so every document written
// through it is key-sorted.
using Json = nlohmann::json;

// A parsed input file: a game, plus the causal model behind it when the file
// describes one.
struct LoadedInput {
  std::string type;
  Game game;
  std::optional<CausalModel> model;
  std::optional<FeaturePoint> point;
  std::optional<ConstraintSet> constraints;
  std::string effect;  // "total" or "direct" for causal models
};

namespace io_detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParse, where + ": " + what);
}

inline const Json& field(const Json& object, const std::string& key, const std::string& where) {
  if (!object.is_object()) bad(where, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) bad(where, "missing field \"" + key + "\"");
  return *it;
}

inline std::string scalar_text(const Json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_boolean()) return value.get<bool>() ? "1" : "0";
  bad(where, "expected a string or integer, got " + std::string(value.type_name()));
}

inline std::vector<std::string> string_list(const Json& value, const std::string& where) {
  if (!value.is_array()) bad(where, "expected an array");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < value.size(); ++k) out.push_back(scalar_text(value[k], where + "/" + std::to_string(k)));
  return out;
}

inline Rational exact_number(const Json& value, const std::string& where) {
  if (value.is_number_float()) {
    bad(where, "write non-integer numbers as strings (e.g. \"0.5\") so they parse exactly");
  }
  const std::string text = scalar_text(value, where);
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    bad(where, e.message());
  }
}

inline std::size_t feature_count(const Json& doc) {
  const Json& n = field(doc, "n", "/");
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0)) bad("/n", "expected a non-negative integer");
  const auto value = n.get<std::uint64_t>();
  if (value == 0) bad("/n", "a game needs at least one feature");
  if (value > kMaxFeatures) {
    fail(ErrorCode::kCapacity, "/n: " + std::to_string(value) + " features exceed the limit of " + std::to_string(kMaxFeatures));
  }
  return static_cast<std::size_t>(value);
}

inline Coalition one_based_coalition(const Json& value, std::size_t n, const std::string& where) {
  if (!value.is_array()) bad(where, "expected an array of 1-based feature numbers");
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < value.size(); ++k) {
    const Json& item = value[k];
    if (!item.is_number_integer() || item.get<long long>() < 1 || item.get<long long>() > static_cast<long long>(n)) {
      bad(where + "/" + std::to_string(k), "feature numbers run from 1 to " + std::to_string(n));
    }
    members.push_back(static_cast<std::size_t>(item.get<long long>() - 1));
  }
  return Coalition::of(n, members);
}

inline std::vector<bool> decode_hex_table(const std::string& hex, std::size_t n) {
  if (n > kMaxTableFeatures) {
    fail(ErrorCode::kCapacity, "truth tables are limited to " + std::to_string(kMaxTableFeatures) + " features");
  }
  const std::size_t masks = std::size_t{1} << n;
  const std::size_t digits = (masks + 3) / 4;
  if (hex.size() != digits) {
    bad("/table", "expected " + std::to_string(digits) + " hex digits for n=" + std::to_string(n) + ", got " +
                      std::to_string(hex.size()));
  }
  std::vector<bool> table(masks, false);
  for (std::size_t j = 0; j < digits; ++j) {
    const char c = hex[j];
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else bad("/table", std::string("invalid hex digit '") + c + "' at offset " + std::to_string(j));
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t mask = 4 * j + b;
      const bool bit = ((digit >> b) & 1) != 0;
      if (mask >= masks) {
        if (bit) bad("/table", "padding bits past coalition " + std::to_string(masks - 1) + " must be zero");
        continue;
      }
      table[mask] = bit;
    }
  }
  return table;
}

inline std::vector<std::string> optional_names(const Json& doc, std::size_t n) {
  auto it = doc.find("names");
  if (it == doc.end()) return {};
  auto names = string_list(*it, "/names");
  if (names.size() != n) bad("/names", "expected " + std::to_string(n) + " names");
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("/names", "names must be distinct");
  return names;
}

inline Game load_game(const Json& doc, const std::string& type) {
  const std::size_t n = feature_count(doc);
  Game game = [&]() -> Game {
    if (type == "weighted_voting") {
      const Json& weights = field(doc, "weights", "/");
      if (!weights.is_array() || weights.size() != n) bad("/weights", "expected an array of n = " + std::to_string(n) + " weights");
      std::vector<Rational> w;
      for (std::size_t k = 0; k < n; ++k) w.push_back(exact_number(weights[k], "/weights/" + std::to_string(k)));
      return make_weighted_voting(w, exact_number(field(doc, "threshold", "/"), "/threshold"));
    }
    if (type == "truth_table") {
      const Json& table = field(doc, "table", "/");
      if (!table.is_string()) bad("/table", "expected a hex string");
      return make_truth_table(n, decode_hex_table(table.get<std::string>(), n));
    }
    const Json& causes = field(doc, "causes", "/");
    if (!causes.is_array()) bad("/causes", "expected an array of causes");
    std::vector<Coalition> family;
    for (std::size_t k = 0; k < causes.size(); ++k) {
      family.push_back(one_based_coalition(causes[k], n, "/causes/" + std::to_string(k)));
    }
    return make_explicit_cause_game(n, family);
  }();
  auto names = optional_names(doc, n);
  return names.empty() ? game : game.with_names(std::move(names));
}

inline std::vector<std::string> split_key(const std::string& key, std::size_t parts) {
  std::vector<std::string> out;
  if (parts == 0) {
    return out;
  }
  std::string current;
  for (char c : key) {
    if (c == ',') {
      out.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

inline FeaturePoint read_point(const CausalModel& model, const Json& value, const std::string& where, bool fill_endogenous) {
  if (!value.is_object()) bad(where, "expected an object mapping variable names to values");
  const auto& features = model.features();
  FeaturePoint point(features.size(), -1);
  for (const auto& [name, raw] : value.items()) {
    auto v = model.find(name);
    if (!v) bad(where, "unknown variable '" + name + "'");
    if (*v == model.output()) bad(where, "the output '" + name + "' is not a feature");
    const std::size_t k = static_cast<std::size_t>(std::find(features.begin(), features.end(), *v) - features.begin());
    try {
      point[k] = model.value_index(*v, scalar_text(raw, where + "/" + name));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) throw;
      bad(where + "/" + name, e.message());
    }
  }
  if (fill_endogenous) {
    // Endogenous features left out are computed from the exogenous context.
    std::vector<int> context;
    for (std::size_t v : model.exogenous()) {
      const std::size_t k = static_cast<std::size_t>(std::find(features.begin(), features.end(), v) - features.begin());
      if (point[k] < 0) bad(where, "exogenous variable '" + model.variable(v).name + "' needs a value");
      context.push_back(point[k]);
    }
    const FeaturePoint computed = model.project(model.evaluate(context));
    for (std::size_t k = 0; k < point.size(); ++k) {
      if (point[k] < 0) point[k] = computed[k];
    }
  }
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (point[k] < 0) bad(where, "missing a value for '" + model.variable(features[k]).name + "'");
  }
  return point;
}

inline LoadedInput load_causal_model(const Json& doc) {
  const Json& vars = field(doc, "variables", "/");
  if (!vars.is_array() || vars.empty()) bad("/variables", "expected a non-empty array");
  std::vector<VariableSpec> specs;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string where = "/variables/" + std::to_string(k);
    const Json& var = vars[k];
    VariableSpec spec;
    spec.name = scalar_text(field(var, "name", where), where + "/name");
    const std::string kind = scalar_text(field(var, "kind", where), where + "/kind");
    if (kind == "exogenous") spec.kind = VariableKind::kExogenous;
    else if (kind == "endogenous") spec.kind = VariableKind::kEndogenous;
    else bad(where + "/kind", "expected \"exogenous\" or \"endogenous\", got \"" + kind + "\"");
    spec.domain = string_list(field(var, "domain", where), where + "/domain");
    if (auto it = var.find("parents"); it != var.end()) spec.parents = string_list(*it, where + "/parents");
    if (auto it = var.find("table"); it != var.end()) {
      if (!it->is_object()) bad(where + "/table", "expected an object keyed by comma-joined parent values");
      for (const auto& [key, value] : it->items()) {
        auto parts = split_key(key, spec.parents.size());
        if (parts.size() != spec.parents.size()) {
          bad(where + "/table", "key \"" + key + "\" has " + std::to_string(parts.size()) + " values for " +
                                    std::to_string(spec.parents.size()) + " parents");
        }
        spec.table[parts] = scalar_text(value, where + "/table/" + key);
      }
    }
    specs.push_back(std::move(spec));
  }
  const std::string output = scalar_text(field(doc, "output", "/"), "/output");
  CausalModel model = CausalModel::build(specs, output);
  FeaturePoint point = read_point(model, field(doc, "point_of_interest", "/"), "/point_of_interest", true);
  validate_point_of_interest(model, point);

  const Json& c = field(doc, "constraint_set", "/");
  ConstraintSet constraints = [&] {
    if (c.is_string()) {
      if (c.get<std::string>() != "all_domain_points") bad("/constraint_set", "expected \"all_domain_points\" or a list");
      return ConstraintSet::all_domain_points(model);
    }
    if (!c.is_array()) bad("/constraint_set", "expected \"all_domain_points\" or a list of assignments");
    std::vector<FeaturePoint> points;
    for (std::size_t k = 0; k < c.size(); ++k) {
      points.push_back(read_point(model, c[k], "/constraint_set/" + std::to_string(k), false));
    }
    return ConstraintSet(model.feature_domain_sizes(), points);
  }();

  std::string effect = "total";
  if (auto it = doc.find("effect"); it != doc.end()) {
    effect = scalar_text(*it, "/effect");
    if (effect != "total" && effect != "direct") bad("/effect", "expected \"total\" or \"direct\"");
  }
  Game game = effect == "total" ? total_effect_game(model, point, constraints)
                                : direct_effect_game(model, point, constraints);
  return LoadedInput{"causal_model", std::move(game), std::move(model), std::move(point), std::move(constraints), effect};
}

}  // namespace io_detail

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, column] = io_detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string message = e.what();
    // Drop the library prefix "[json.exception.parse_error.101] ".
    if (auto pos = message.find("] "); pos != std::string::npos) message = message.substr(pos + 2);
    // ...and its own "parse error at line L, column C: " (we report L:C above).
    if (auto pos = message.find(": "); message.rfind("parse error", 0) == 0 && pos != std::string::npos) {
      message = message.substr(pos + 2);
    }
    fail(ErrorCode::kParse, origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message);
  }
}

inline LoadedInput load_input(const std::string& text, const std::string& origin = "<input>") {
  const Json doc = parse_json_text(text, origin);
  try {
    if (!doc.is_object()) io_detail::bad("/", "expected a JSON object");
    const std::string type = io_detail::scalar_text(io_detail::field(doc, "type", "/"), "/type");
    if (type == "weighted_voting" || type == "truth_table" || type == "explicit_causes") {
      return LoadedInput{type, io_detail::load_game(doc, type), std::nullopt, std::nullopt, std::nullopt, ""};
    }
    if (type == "causal_model") return io_detail::load_causal_model(doc);
    io_detail::bad("/type", "unknown type \"" + type +
                                "\" (expected weighted_voting, truth_table, explicit_causes or causal_model)");
  } catch (const Error& e) {
    throw Error(e.code(), origin + ": " + e.message());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kParse, path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline LoadedInput load_input_file(const std::string& path) { return load_input(read_file(path), path); }

// ---------------------------------------------------------------------------
// Serialization. Features are written 1-based, with names when the game has
// them.

inline Json coalition_json(const Coalition& s) {
  Json out = Json::array();
  for (std::size_t i : s.members()) out.push_back(i + 1);
  return out;
}

inline Json coalition_labels(const Coalition& s, const Game& game) {
  Json out = Json::array();
  for (std::size_t i : s.members()) out.push_back(game.label(i));
  return out;
}

inline std::string coalition_key(const Coalition& s) {
  std::string out;
  for (std::size_t i : s.members()) out += (out.empty() ? "" : ",") + std::to_string(i + 1);
  return out;
}

inline Json rational_json(const Rational& value) { return Json{{"exact", to_string(value)}, {"approx", to_double(value)}}; }

inline Json family_json(const CauseFamily& family, const Game& game) {
  Json causes = Json::array(), labels = Json::array();
  Json critical = Json::object();
  for (std::size_t k = 0; k < family.size(); ++k) {
    causes.push_back(coalition_json(family.cause(k)));
    labels.push_back(coalition_labels(family.cause(k), game));
    critical[coalition_key(family.cause(k))] = coalition_json(family.critical(k));
  }
  Json features = Json::array();
  for (std::size_t i = 0; i < game.size(); ++i) features.push_back(game.label(i));
  return Json{{"kind", std::string(cause_kind_name(family.kind()))},
              {"n", family.universe()},
              {"features", features},
              {"count", family.size()},
              {"causes", causes},
              {"cause_labels", labels},
              {"critical", critical}};
}

inline Json index_json(const IndexVector& index, const Game& game) {
  Json values = Json::array();
  for (std::size_t i = 0; i < index.size(); ++i) {
    values.push_back(Json{{"feature", i + 1},
                          {"name", game.label(i)},
                          {"exact", to_string(index[i])},
                          {"approx", to_double(index[i])}});
  }
  return Json{{"kind", std::string(index_kind_name(index.kind))},
              {"scale", std::string(scale_name(index.scale))},
              {"n", index.size()},
              {"values", values}};
}

inline Json report_json(const EstimateReport& report, const Game& game) {
  Json out = index_json(report.estimates, game);
  out["samples"] = report.samples;
  out["seed"] = report.seed;
  out["exhaustive"] = report.exhaustive;
  out["epsilon"] = report.epsilon ? Json(*report.epsilon) : Json(nullptr);
  out["delta"] = report.delta ? Json(*report.delta) : Json(nullptr);
  out["hits"] = report.hits;
  out["oracle_calls"] = report.oracle_calls;
  return out;
}

inline Json synthetic_family_json(const SyntheticQuasiFamily& family) {
  Json sets = Json::array();
  for (std::size_t k = 0; k < family.sets.size(); ++k) {
    sets.push_back(Json{{"set", coalition_json(family.sets[k])}, {"chi", coalition_json(family.critical[k])}});
  }
  return Json{{"n", family.n}, {"sets", sets}};
}

inline Json witness_json(const AxiomInstance& instance) {
  Json games = Json::array();
  for (const auto& causes : instance.games) {
    Json game = Json::array();
    for (const Coalition& s : causes) game.push_back(coalition_json(s));
    games.push_back(game);
  }
  Json families = Json::array();
  for (const auto& family : instance.families) families.push_back(synthetic_family_json(family));
  Json permutation = Json::array();
  for (std::size_t p : instance.permutation) permutation.push_back(p + 1);
  return Json{{"n", instance.n},
              {"games", games},
              {"families", families},
              {"feature", instance.feature ? Json(*instance.feature + 1) : Json(nullptr)},
              {"permutation", permutation},
              {"merged", instance.merged ? coalition_json(*instance.merged) : Json(nullptr)},
              {"estimator_seed", instance.estimator_seed}};
}

inline Json axiom_check_json(const AxiomCheck& check) {
  Json out{{"axiom", std::string(axiom_name(check.axiom))},
           {"index", check.procedure},
           {"passed", check.passed},
           {"trials", check.trials},
           {"attempts", check.attempts},
           {"tags", check.tags}};
  if (check.witness) {
    out["witness"] = witness_json(*check.witness);
    out["detail"] = check.detail;
  }
  return out;
}

inline Json impossibility_json(const ImpossibilityTrace& trace) {
  auto values = [](const std::vector<Rational>& xs) {
    Json out = Json::array();
    for (const Rational& x : xs) out.push_back(to_string(x));
    return out;
  };
  Json steps = Json::array();
  for (const ProofStep& step : trace.steps) {
    Json cites = Json::array();
    for (AxiomId a : step.cites) cites.push_back(std::string(axiom_name(a)));
    steps.push_back(Json{{"claim", step.claim}, {"cites", cites}, {"values", values(step.values)}});
  }
  return Json{{"steps", steps},
              {"forced_v", values(trace.forced_v)},
              {"forced_v_prime", values(trace.forced_v_prime)},
              {"forced_sum", to_string(trace.forced_sum)},
              {"required_sum", to_string(trace.required_sum)},
              {"contradiction", trace.contradiction}};
}

}  // namespace causal_explain
