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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causal_explain/coalition.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"

namespace causal_explain {

enum class VariableKind { kExogenous, kEndogenous };

// Values are carried as indices into each variable's domain list.
using Assignment = std::vector<int>;    // one entry per model variable
using FeaturePoint = std::vector<int>;  // one entry per feature (all variables but the output)

// Declarative description of one variable, as read from a model file.
struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::kEndogenous;
  std::vector<std::string> domain;
  std::vector<std::string> parents;
  // Parent value tuple (in `parents` order) -> value.
  std::map<std::vector<std::string>, std::string> table;
};

struct InterventionSpec;

// Acyclic structural causal model with finite domains and a binary sink
// output. The features are all variables except the output, in declaration
// order.
class CausalModel {
 public:
  struct Variable {
    std::string name;
    VariableKind kind;
    std::vector<std::string> domain;
    std::vector<std::size_t> parents;
    std::vector<int> table;  // row-major over parent domains, first parent slowest
    std::optional<int> fixed;
  };

  static CausalModel build(const std::vector<VariableSpec>& specs, const std::string& output) {
    CausalModel model;
    std::map<std::string, std::size_t> ids;
    for (const VariableSpec& spec : specs) {
      if (spec.name.empty()) fail(ErrorCode::kInvalidGame, "variable with an empty name");
      if (!ids.emplace(spec.name, ids.size()).second) {
        fail(ErrorCode::kInvalidGame, "duplicate variable '" + spec.name + "'");
      }
      if (spec.domain.empty()) fail(ErrorCode::kInvalidGame, "variable '" + spec.name + "' has an empty domain");
      std::set<std::string> distinct(spec.domain.begin(), spec.domain.end());
      if (distinct.size() != spec.domain.size()) {
        fail(ErrorCode::kInvalidGame, "variable '" + spec.name + "' repeats a domain value");
      }
    }
    auto output_it = ids.find(output);
    if (output_it == ids.end()) fail(ErrorCode::kInvalidGame, "output variable '" + output + "' is not declared");
    model.output_ = output_it->second;

    for (const VariableSpec& spec : specs) {
      Variable var{spec.name, spec.kind, spec.domain, {}, {}, std::nullopt};
      for (const std::string& parent : spec.parents) {
        auto it = ids.find(parent);
        if (it == ids.end()) {
          fail(ErrorCode::kInvalidGame, "variable '" + spec.name + "' has unknown parent '" + parent + "'");
        }
        if (it->second == model.output_) {
          fail(ErrorCode::kInvalidGame, "output '" + output + "' must be a sink but is a parent of '" +
                                            spec.name + "'");
        }
        var.parents.push_back(it->second);
      }
      if (spec.kind == VariableKind::kExogenous) {
        if (!spec.parents.empty() || !spec.table.empty()) {
          fail(ErrorCode::kInvalidGame, "exogenous variable '" + spec.name + "' cannot have parents or a table");
        }
      }
      model.variables_.push_back(std::move(var));
    }
    if (model.variables_[model.output_].kind != VariableKind::kEndogenous) {
      fail(ErrorCode::kInvalidGame, "output '" + output + "' must be endogenous");
    }
    if (model.variables_[model.output_].domain.size() != 2) {
      fail(ErrorCode::kInvalidGame, "output '" + output + "' must be binary (domain of size 2)");
    }

    // Tables: total over the product of parent domains, values in range.
    for (std::size_t v = 0; v < specs.size(); ++v) {
      Variable& var = model.variables_[v];
      if (var.kind == VariableKind::kExogenous) continue;
      std::size_t rows = 1;
      for (std::size_t p : var.parents) rows *= model.variables_[p].domain.size();
      var.table.assign(rows, -1);
      for (const auto& [key, value] : specs[v].table) {
        if (key.size() != var.parents.size()) {
          fail(ErrorCode::kInvalidGame, "table row of '" + var.name + "' has " + std::to_string(key.size()) +
                                            " parent values, expected " + std::to_string(var.parents.size()));
        }
        std::size_t row = 0;
        for (std::size_t k = 0; k < key.size(); ++k) {
          const Variable& parent = model.variables_[var.parents[k]];
          row = row * parent.domain.size() + model.value_index(var.parents[k], key[k]);
        }
        var.table[row] = model.value_index(v, value);
      }
      for (std::size_t row = 0; row < rows; ++row) {
        if (var.table[row] < 0) {
          fail(ErrorCode::kModelIncomplete,
               "table of '" + var.name + "' has no entry for parent values (" + model.describe_row(v, row) + ")");
        }
      }
    }

    model.order_ = model.topological_order();
    for (std::size_t v = 0; v < model.variables_.size(); ++v) {
      if (v != model.output_) model.features_.push_back(v);
      if (model.variables_[v].kind == VariableKind::kExogenous) model.exogenous_.push_back(v);
    }
    check_feature_count(model.features_.size());
    return model;
  }

  std::size_t num_variables() const { return variables_.size(); }
  const Variable& variable(std::size_t v) const { return variables_[v]; }
  std::size_t output() const { return output_; }
  const std::vector<std::size_t>& features() const { return features_; }
  const std::vector<std::size_t>& exogenous() const { return exogenous_; }
  std::size_t num_features() const { return features_.size(); }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> out;
    for (std::size_t v : features_) out.push_back(variables_[v].name);
    return out;
  }

  std::vector<std::size_t> feature_domain_sizes() const {
    std::vector<std::size_t> out;
    for (std::size_t v : features_) out.push_back(variables_[v].domain.size());
    return out;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      if (variables_[v].name == name) return v;
    }
    return std::nullopt;
  }

  int value_index(std::size_t v, const std::string& value) const {
    const auto& domain = variables_[v].domain;
    auto it = std::find(domain.begin(), domain.end(), value);
    if (it == domain.end()) {
      fail(ErrorCode::kInvalidGame, "value '" + value + "' is not in the domain of '" + variables_[v].name + "'");
    }
    return static_cast<int>(it - domain.begin());
  }

  // Computes every variable from an exogenous context (one value per
  // exogenous variable, in declaration order).
  Assignment evaluate(const std::vector<int>& context) const {
    if (context.size() != exogenous_.size()) {
      fail(ErrorCode::kInvalidArgument, "context needs " + std::to_string(exogenous_.size()) + " values");
    }
    Assignment state(variables_.size(), -1);
    for (std::size_t k = 0; k < exogenous_.size(); ++k) {
      check_value(exogenous_[k], context[k]);
      state[exogenous_[k]] = context[k];
    }
    for (std::size_t v : order_) {
      const Variable& var = variables_[v];
      if (var.fixed) {
        state[v] = *var.fixed;
      } else if (var.kind == VariableKind::kEndogenous) {
        state[v] = lookup(v, state);
      }
    }
    return state;
  }

  CausalModel intervene(const InterventionSpec& spec) const;

  // Exogenous features in S take alt, exogenous features outside S stay at
  // base, endogenous features in S are pinned to alt, and everything else
  // (including the output) is recomputed through the structural functions.
  Assignment propagate(const FeaturePoint& base, const Coalition& s, const FeaturePoint& alt) const {
    check_point(base);
    check_point(alt);
    return propagate_unchecked(base, s.mask(), alt);
  }

  // True iff alt is exactly what intervening S <- alt_S at base produces.
  bool sat(const Coalition& s, const FeaturePoint& alt, const FeaturePoint& base) const {
    check_point(base);
    check_point(alt);
    return sat_unchecked(s.mask(), alt, base);
  }

  // F(x): the output's structural function applied to the point.
  int output_of(const FeaturePoint& point) const {
    Assignment state(variables_.size(), -1);
    for (std::size_t k = 0; k < features_.size(); ++k) state[features_[k]] = point[k];
    return variables_[output_].fixed ? *variables_[output_].fixed : lookup(output_, state);
  }

  FeaturePoint project(const Assignment& state) const {
    FeaturePoint out;
    for (std::size_t v : features_) out.push_back(state[v]);
    return out;
  }

  void check_point(const FeaturePoint& point) const {
    if (point.size() != features_.size()) {
      fail(ErrorCode::kInvalidArgument, "point needs " + std::to_string(features_.size()) + " values, got " +
                                            std::to_string(point.size()));
    }
    for (std::size_t k = 0; k < features_.size(); ++k) check_value(features_[k], point[k]);
  }

  std::string describe(const FeaturePoint& point) const {
    std::string out;
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const Variable& var = variables_[features_[k]];
      out += (k ? ", " : "") + var.name + "=" + var.domain[static_cast<std::size_t>(point[k])];
    }
    return out;
  }

  // Internal fast paths (points already validated).
  Assignment propagate_unchecked(const FeaturePoint& base, std::uint64_t s, const FeaturePoint& alt) const {
    Assignment state(variables_.size(), -1);
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const std::size_t v = features_[k];
      const bool in_s = ((s >> k) & 1U) != 0;
      if (in_s) {
        state[v] = alt[k];
      } else if (variables_[v].kind == VariableKind::kExogenous) {
        state[v] = base[k];
      }
    }
    for (std::size_t v : order_) {
      if (state[v] >= 0) continue;
      const Variable& var = variables_[v];
      state[v] = var.fixed ? *var.fixed : lookup(v, state);
    }
    return state;
  }

  bool sat_unchecked(std::uint64_t s, const FeaturePoint& alt, const FeaturePoint& base) const {
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const bool in_s = ((s >> k) & 1U) != 0;
      if (!in_s && variables_[features_[k]].kind == VariableKind::kExogenous && alt[k] != base[k]) return false;
    }
    const Assignment state = propagate_unchecked(base, s, alt);
    for (std::size_t k = 0; k < features_.size(); ++k) {
      if (state[features_[k]] != alt[k]) return false;
    }
    return true;
  }

 private:
  CausalModel() = default;

  void check_value(std::size_t v, int value) const {
    if (value < 0 || static_cast<std::size_t>(value) >= variables_[v].domain.size()) {
      fail(ErrorCode::kInvalidArgument, "value index " + std::to_string(value) + " outside the domain of '" +
                                            variables_[v].name + "'");
    }
  }

  int lookup(std::size_t v, const Assignment& state) const {
    const Variable& var = variables_[v];
    std::size_t row = 0;
    for (std::size_t p : var.parents) row = row * variables_[p].domain.size() + static_cast<std::size_t>(state[p]);
    return var.table[row];
  }

  std::string describe_row(std::size_t v, std::size_t row) const {
    const Variable& var = variables_[v];
    std::vector<std::string> parts(var.parents.size());
    for (std::size_t k = var.parents.size(); k-- > 0;) {
      const Variable& parent = variables_[var.parents[k]];
      parts[k] = parent.name + "=" + parent.domain[row % parent.domain.size()];
      row /= parent.domain.size();
    }
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? ", " : "") + parts[k];
    return out;
  }

  std::vector<std::size_t> topological_order() const {
    const std::size_t count = variables_.size();
    std::vector<std::size_t> indegree(count, 0);
    std::vector<std::vector<std::size_t>> children(count);
    for (std::size_t v = 0; v < count; ++v) {
      for (std::size_t p : variables_[v].parents) {
        ++indegree[v];
        children[p].push_back(v);
      }
    }
    // Kahn's algorithm, always releasing the lowest declared index first.
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < count; ++v) {
      if (indegree[v] == 0) ready.insert(v);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      const std::size_t v = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(v);
      for (std::size_t c : children[v]) {
        if (--indegree[c] == 0) ready.insert(c);
      }
    }
    if (order.size() != count) fail(ErrorCode::kInvalidGame, "the causal network has a cycle");
    return order;
  }

  std::vector<Variable> variables_;
  std::size_t output_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> features_;
  std::vector<std::size_t> exogenous_;

  friend struct InterventionSpec;
};

// X <- x: `values[k]` is the value index for the k-th smallest feature in
// `targets`.
struct InterventionSpec {
  Coalition targets;
  std::vector<int> values;

  static InterventionSpec from_names(const CausalModel& model,
                                     const std::vector<std::pair<std::string, std::string>>& settings) {
    std::map<std::size_t, int> chosen;
    for (const auto& [name, value] : settings) {
      auto v = model.find(name);
      if (!v) fail(ErrorCode::kInvalidIntervention, "unknown variable '" + name + "'");
      if (*v == model.output()) fail(ErrorCode::kInvalidIntervention, "the output '" + name + "' cannot be intervened on");
      const auto& features = model.features();
      const std::size_t k = static_cast<std::size_t>(std::find(features.begin(), features.end(), *v) - features.begin());
      if (!chosen.emplace(k, model.value_index(*v, value)).second) {
        fail(ErrorCode::kInvalidIntervention, "variable '" + name + "' is set twice");
      }
    }
    std::uint64_t mask = 0;
    InterventionSpec spec{Coalition::empty(model.num_features()), {}};
    for (const auto& [k, value] : chosen) {
      mask |= std::uint64_t{1} << k;
      spec.values.push_back(value);
    }
    spec.targets = Coalition(model.num_features(), mask);
    return spec;
  }
};

inline CausalModel CausalModel::intervene(const InterventionSpec& spec) const {
  if (spec.targets.universe() != features_.size()) {
    fail(ErrorCode::kInvalidIntervention, "intervention targets are over the wrong feature set");
  }
  const auto targets = spec.targets.members();
  if (targets.size() != spec.values.size()) {
    fail(ErrorCode::kInvalidIntervention, "intervention needs one value per target");
  }
  CausalModel out = *this;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::size_t v = features_[targets[k]];
    check_value(v, spec.values[k]);
    out.variables_[v].fixed = spec.values[k];
  }
  return out;
}

// Rejects a point of interest whose endogenous coordinates do not follow
// from its exogenous ones, suggesting the propagated values instead.
inline void validate_point_of_interest(const CausalModel& model, const FeaturePoint& point) {
  model.check_point(point);
  const FeaturePoint propagated = model.project(model.propagate_unchecked(point, 0, point));
  if (propagated != point) {
    fail(ErrorCode::kInvalidGame, "point of interest is inconsistent with the model; propagating its exogenous values "
                                  "gives: " + model.describe(propagated));
  }
}

// Explicit finite list of feasible alternatives, held in lexicographic order
// of value indices without duplicates.
class ConstraintSet {
 public:
  static constexpr std::size_t kMaxPoints = std::size_t{1} << 20;

  ConstraintSet(std::vector<std::size_t> domain_sizes, std::vector<FeaturePoint> points)
      : domain_sizes_(std::move(domain_sizes)), points_(std::move(points)) {
    for (const FeaturePoint& p : points_) {
      if (p.size() != domain_sizes_.size()) fail(ErrorCode::kInvalidArgument, "constraint point has the wrong length");
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] < 0 || static_cast<std::size_t>(p[k]) >= domain_sizes_[k]) {
          fail(ErrorCode::kInvalidArgument, "constraint point value outside its domain");
        }
      }
    }
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
      fail(ErrorCode::kInvalidArgument, "constraint set lists the same point twice");
    }
  }

  ConstraintSet(const CausalModel& model, std::vector<FeaturePoint> points)
      : ConstraintSet(model.feature_domain_sizes(), std::move(points)) {}

  // Cartesian product of the domains, rejected beyond 2^20 points.
  static ConstraintSet product(const std::vector<std::size_t>& domain_sizes) {
    std::size_t total = 1;
    for (std::size_t d : domain_sizes) {
      if (d == 0 || total > kMaxPoints / d) {
        fail(ErrorCode::kCapacity, "all_domain_points would exceed 2^20 candidates");
      }
      total *= d;
    }
    std::vector<FeaturePoint> points;
    points.reserve(total);
    FeaturePoint current(domain_sizes.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
      points.push_back(current);
      for (std::size_t k = domain_sizes.size(); k-- > 0;) {
        if (static_cast<std::size_t>(++current[k]) < domain_sizes[k]) break;
        current[k] = 0;
      }
    }
    return ConstraintSet(domain_sizes, std::move(points));
  }

  static ConstraintSet all_domain_points(const CausalModel& model) { return product(model.feature_domain_sizes()); }

  const std::vector<FeaturePoint>& points() const { return points_; }
  const std::vector<std::size_t>& domain_sizes() const { return domain_sizes_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<std::size_t> domain_sizes_;
  std::vector<FeaturePoint> points_;
};

namespace detail {

class TotalEffectImpl final : public GameImpl {
 public:
  TotalEffectImpl(std::shared_ptr<const CausalModel> model, FeaturePoint base, std::vector<FeaturePoint> flipping)
      : model_(std::move(model)), base_(std::move(base)), flipping_(std::move(flipping)) {}

  bool eval(std::uint64_t mask) const override { return witness(mask).has_value(); }

  std::optional<std::size_t> witness(std::uint64_t mask) const {
    for (std::size_t c = 0; c < flipping_.size(); ++c) {
      if (model_->sat_unchecked(mask, flipping_[c], base_)) return c;
    }
    return std::nullopt;
  }

  const std::vector<FeaturePoint>& flipping() const { return flipping_; }

 private:
  std::shared_ptr<const CausalModel> model_;
  FeaturePoint base_;
  std::vector<FeaturePoint> flipping_;  // candidates with F(x') != F(x), in canonical order
};

class DirectEffectImpl final : public GameImpl {
 public:
  explicit DirectEffectImpl(std::vector<std::uint64_t> changed) : changed_(std::move(changed)) {}
  bool eval(std::uint64_t mask) const override {
    return std::any_of(changed_.begin(), changed_.end(), [mask](std::uint64_t c) { return (c & ~mask) == 0; });
  }

 private:
  std::vector<std::uint64_t> changed_;  // coordinates where a flipping candidate differs from x
};

}  // namespace detail

// v(S) = max over x' in C with Sat(S, x', x) of |F(x') - F(x)|; 0 when no
// candidate is consistent.
inline Game total_effect_game(const CausalModel& model, const FeaturePoint& point, const ConstraintSet& constraints) {
  validate_point_of_interest(model, point);
  if (constraints.domain_sizes() != model.feature_domain_sizes()) {
    fail(ErrorCode::kInvalidArgument, "constraint set does not match the model's features");
  }
  const int reference = model.output_of(point);
  std::vector<FeaturePoint> flipping;
  for (const FeaturePoint& candidate : constraints.points()) {
    if (model.output_of(candidate) != reference) flipping.push_back(candidate);
  }
  auto impl = std::make_shared<detail::TotalEffectImpl>(std::make_shared<const CausalModel>(model), point,
                                                        std::move(flipping));
  return Game(model.num_features(), GameKind::kCausalValue, std::move(impl), model.feature_names());
}

// Lexicographically first x' in C that flips the output under S, if any.
inline std::optional<FeaturePoint> total_effect_witness(const Game& game, const Coalition& s) {
  const auto* impl = game.backend<detail::TotalEffectImpl>();
  if (impl == nullptr) fail(ErrorCode::kInvalidArgument, "game is not a total-effect game");
  if (s.universe() != game.size()) fail(ErrorCode::kInvalidArgument, "coalition over the wrong universe");
  auto c = impl->witness(s.mask());
  if (!c) return std::nullopt;
  return impl->flipping()[*c];
}

using OutputFunction = std::function<int(const FeaturePoint&)>;

// v(S) = max over x' in C agreeing with x outside S of |F(x') - F(x)|.
// F is a black box; its outputs must differ by at most 1.
inline Game direct_effect_game(const OutputFunction& output, const FeaturePoint& point,
                               const ConstraintSet& constraints) {
  const std::size_t n = point.size();
  check_feature_count(n);
  if (constraints.domain_sizes().size() != n) {
    fail(ErrorCode::kInvalidArgument, "constraint set does not match the point's dimension");
  }
  const int reference = output(point);
  std::vector<std::uint64_t> changed;
  for (const FeaturePoint& candidate : constraints.points()) {
    const int diff = output(candidate) - reference;
    if (diff == 0) continue;
    if (diff != 1 && diff != -1) {
      fail(ErrorCode::kInvalidArgument, "black-box output is not binary (|F(x')-F(x)| = " +
                                            std::to_string(diff < 0 ? -diff : diff) + ")");
    }
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (candidate[k] != point[k]) mask |= std::uint64_t{1} << k;
    }
    changed.push_back(mask);
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  return Game(n, GameKind::kCausalValue, std::make_shared<detail::DirectEffectImpl>(std::move(changed)));
}

// Direct-effect game using the model's output function, without propagation.
inline Game direct_effect_game(const CausalModel& model, const FeaturePoint& point, const ConstraintSet& constraints) {
  model.check_point(point);
  auto shared = std::make_shared<const CausalModel>(model);
  Game game = direct_effect_game([shared](const FeaturePoint& p) { return shared->output_of(p); }, point, constraints);
  return game.with_names(model.feature_names());
}

}  // namespace causal_explain
