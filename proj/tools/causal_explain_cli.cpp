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

// causal-explain: command-line front end.

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "causal_explain/causal_explain.hpp"

namespace ce = causal_explain;
using ce::Json;

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    ce::fail(ce::ErrorCode::kInvariantViolation, "SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int k = 0; k < length; ++k) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return out.str();
}

std::size_t worker_count() {
  const char* env = std::getenv("CAUSAL_EXPLAIN_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const unsigned long value = std::strtoul(env, &end, 10);
  if (*end != '\0' || value == 0) {
    ce::fail(ce::ErrorCode::kInvalidArgument, "CAUSAL_EXPLAIN_WORKERS must be a positive integer");
  }
  return value;
}

struct Options {
  std::string input;
  std::string format = "json";
  std::string cause_kind = "minimal";
  std::string index_kind = "all";
  std::string scale = "raw";
  std::string estimate_kind = "johnston";
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::string procedure = "responsibility";
  std::vector<std::string> axioms;
  std::size_t trials = 200;
  bool impossibility = false;
  std::vector<std::vector<std::uint64_t>> multisets;
  std::size_t random_count = 0;
  std::size_t max_size = 12;
  std::uint64_t max_value = 20;
};

// Every report carries the manifest that produced it.
Json manifest(const std::string& subcommand, const Options& o, const std::string& input_text, Json config) {
  Json inputs = Json::array();
  if (!o.input.empty()) inputs.push_back(Json{{"path", o.input}, {"sha256", sha256_hex(input_text)}});
  return Json{{"tool", "causal-explain"},
              {"version", ce::kVersion},
              {"subcommand", subcommand},
              {"inputs", inputs},
              {"config", std::move(config)}};
}

void emit(const Json& manifest_json, const Json& result) {
  std::cout << Json{{"manifest", manifest_json}, {"result", result}}.dump(2) << "\n";
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

void print_index_table(const ce::IndexVector& index, const ce::Game& game) {
  std::vector<std::size_t> order(index.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return index[a] > index[b]; });
  std::size_t width = 7;
  for (std::size_t i = 0; i < index.size(); ++i) width = std::max(width, game.label(i).size());
  std::cout << "# " << ce::index_kind_name(index.kind) << " (" << ce::scale_name(index.scale) << ")\n";
  std::cout << pad("feature", width) << "  " << pad("exact", 14) << "  approx\n";
  for (std::size_t i : order) {
    std::ostringstream approx;
    approx << std::setprecision(10) << ce::to_double(index[i]);
    std::cout << pad(game.label(i), width) << "  " << pad(ce::to_string(index[i]), 14) << "  " << approx.str() << "\n";
  }
}

int run_enumerate(const Options& o) {
  const std::string text = ce::read_file(o.input);
  const ce::LoadedInput input = ce::load_input(text, o.input);
  ce::check_exhaustive_capacity(input.game.size());
  const ce::WinTable table(input.game);
  const ce::CauseFamily family = o.cause_kind == "minimal" ? ce::minimal_causes(table) : ce::quasi_minimal_causes(table);
  if (o.format == "table") {
    std::cout << "# " << ce::cause_kind_name(family.kind()) << " causes: " << family.size() << "\n";
    for (std::size_t k = 0; k < family.size(); ++k) {
      std::cout << Json(ce::coalition_labels(family.cause(k), input.game)).dump();
      if (family.kind() == ce::CauseKind::kQuasiMinimal) {
        std::cout << "  critical " << Json(ce::coalition_labels(family.critical(k), input.game)).dump();
      }
      std::cout << "\n";
    }
    return 0;
  }
  emit(manifest("enumerate", o, text, Json{{"kind", o.cause_kind}}), ce::family_json(family, input.game));
  return 0;
}

int run_index(const Options& o) {
  const std::string text = ce::read_file(o.input);
  const ce::LoadedInput input = ce::load_input(text, o.input);
  const ce::Scale scale = ce::parse_scale(o.scale);
  std::vector<ce::IndexKind> kinds;
  if (o.index_kind == "all") {
    kinds.assign(std::begin(ce::kAllIndexKinds), std::end(ce::kAllIndexKinds));
  } else {
    kinds.push_back(ce::parse_index_kind(o.index_kind));
  }
  const ce::GameFamilies families(input.game);
  std::vector<ce::IndexVector> results;
  for (ce::IndexKind kind : kinds) results.push_back(ce::compute_index(families, kind, scale));
  if (o.format == "table") {
    for (std::size_t k = 0; k < results.size(); ++k) {
      if (k) std::cout << "\n";
      print_index_table(results[k], input.game);
    }
    return 0;
  }
  Json result;
  if (results.size() == 1) {
    result = ce::index_json(results[0], input.game);
  } else {
    result = Json::array();
    for (const auto& r : results) result.push_back(ce::index_json(r, input.game));
  }
  emit(manifest("index", o, text, Json{{"kind", o.index_kind}, {"scale", o.scale}}), result);
  return 0;
}

int run_estimate(const Options& o) {
  const std::string text = ce::read_file(o.input);
  const ce::LoadedInput input = ce::load_input(text, o.input);
  const std::size_t n = input.game.size();
  const ce::IndexKind kind = ce::parse_index_kind(o.estimate_kind);
  ce::SamplingConfig config;
  if (o.exhaustive) {
    config = ce::SamplingConfig::exhaustive_for(n);
  } else if (o.samples > 0) {
    config.samples = o.samples;
  } else {
    config = ce::SamplingConfig::from_bounds(o.epsilon, o.delta, n, o.seed);
  }
  config.seed = o.exhaustive ? 0 : o.seed;
  config.workers = worker_count();
  const ce::EstimateReport report = ce::estimate(input.game, kind, config);
  if (o.format == "table") {
    std::cout << "# samples " << report.samples << (report.exhaustive ? " (exhaustive)" : "") << ", seed " << report.seed
              << "\n";
    print_index_table(report.estimates, input.game);
    return 0;
  }
  // Worker count has no effect on results and stays out of the manifest.
  Json resolved{{"kind", o.estimate_kind},
                {"samples", report.samples},
                {"seed", report.seed},
                {"exhaustive", report.exhaustive},
                {"epsilon", report.epsilon ? Json(*report.epsilon) : Json(nullptr)},
                {"delta", report.delta ? Json(*report.delta) : Json(nullptr)}};
  emit(manifest("estimate", o, text, resolved), ce::report_json(report, input.game));
  return 0;
}

int run_verify(const Options& o) {
  if (o.impossibility) {
    const ce::ImpossibilityTrace trace = ce::demonstrate_impossibility();
    if (o.format == "table") {
      for (const auto& step : trace.steps) {
        std::string cites;
        for (auto a : step.cites) cites += (cites.empty() ? "" : ",") + std::string(ce::axiom_name(a));
        std::cout << "[" << cites << "] " << step.claim << "\n";
      }
    } else {
      emit(manifest("verify-axioms", o, "", Json{{"impossibility", true}}), ce::impossibility_json(trace));
    }
    return trace.contradiction ? 0 : 4;
  }
  const ce::IndexProcedure procedure = ce::named_procedure(o.procedure);
  std::vector<ce::AxiomId> axioms;
  if (o.axioms.empty()) {
    axioms = ce::characterizing_axioms(o.procedure);
  } else {
    for (const std::string& name : o.axioms) axioms.push_back(ce::parse_axiom(name));
  }
  Json verdicts = Json::array();
  Json names = Json::array();
  for (ce::AxiomId axiom : axioms) {
    const ce::AxiomCheck check = ce::check_axiom(procedure, axiom, o.trials, o.seed);
    names.push_back(std::string(ce::axiom_name(axiom)));
    if (o.format == "table") {
      std::cout << pad(std::string(ce::axiom_name(axiom)), 5) << " " << (check.passed ? "pass" : "FAIL") << "  "
                << check.trials << " trials";
      if (!check.passed) std::cout << "  " << check.detail;
      std::cout << "\n";
    }
    verdicts.push_back(ce::axiom_check_json(check));
  }
  if (o.format != "table") {
    emit(manifest("verify-axioms", o, "",
                  Json{{"index", o.procedure}, {"axioms", names}, {"trials", o.trials}, {"seed", o.seed}}),
         verdicts);
  }
  return 0;
}

int run_partition(const Options& o) {
  std::vector<std::vector<std::uint64_t>> multisets = o.multisets;
  std::mt19937_64 rng(o.seed);
  for (std::size_t r = 0; r < o.random_count; ++r) {
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, o.max_size))(rng);
    std::vector<std::uint64_t> values(size);
    for (auto& v : values) v = std::uniform_int_distribution<std::uint64_t>(1, std::max<std::uint64_t>(1, o.max_value))(rng);
    multisets.push_back(values);
  }
  if (multisets.empty()) ce::fail(ce::ErrorCode::kInvalidArgument, "give --values or --random");
  Json vectors = Json::array();
  for (const auto& values : multisets) {
    const ce::PartitionInstance inst = ce::partition_game(values);
    const ce::GameFamilies families(inst.game);
    const std::size_t minimal = families.minimal.feature_family(inst.pivot).size();
    const std::size_t quasi = families.quasi_minimal.feature_family(inst.pivot).size();
    const ce::Rational eta = ce::holler_packel(families.minimal, ce::Scale::kRaw)[inst.pivot];
    Json weights = Json::array();
    for (std::uint64_t v : values) weights.push_back(v);
    weights.push_back(1);
    if (o.format == "table") {
      std::cout << Json(values).dump() << "  W=" << inst.total << "  partitions=" << inst.subset_sum_count
                << "  |M_pivot|=" << minimal << "  eta=" << ce::to_string(eta) << "\n";
    }
    vectors.push_back(Json{{"values", values},
                           {"weights", weights},
                           {"threshold", ce::to_string(ce::ratio(inst.total + 1, 2))},
                           {"total", inst.total},
                           {"pivot", inst.pivot + 1},
                           {"subset_sum_count", inst.subset_sum_count},
                           {"floor_half_count", inst.floor_half_count},
                           {"minimal_causes_of_pivot", minimal},
                           {"quasi_minimal_causes_of_pivot", quasi},
                           {"holler_packel_pivot", ce::to_string(eta)},
                           {"consistent", minimal == inst.floor_half_count && quasi == inst.floor_half_count}});
  }
  if (o.format != "table") {
    emit(manifest("partition-vectors", o, "",
                  Json{{"values", o.multisets}, {"random", o.random_count}, {"seed", o.seed},
                       {"max_size", o.max_size}, {"max_value", o.max_value}}),
         vectors);
  }
  return 0;
}

std::vector<std::uint64_t> parse_multiset(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long value = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      ce::fail(ce::ErrorCode::kInvalidArgument, "--values expects comma-separated positive integers, got '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal explanations of binary classifier decisions via power indices", "causal-explain"};
  app.set_version_flag("--version", ce::kVersion);
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> index_kinds = {"responsibility", "holler-packel", "deegan-packel",
                                                "johnston", "shapley", "banzhaf"};
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  };

  auto* enumerate = app.add_subcommand("enumerate", "List minimal or quasi-minimal causes");
  enumerate->add_option("file", o.input, "Game or causal-model JSON file")->required();
  enumerate->add_option("--kind", o.cause_kind, "Cause family")->check(CLI::IsMember({"minimal", "quasi-minimal"}));
  add_format(enumerate);

  auto* index = app.add_subcommand("index", "Compute power indices exactly");
  index->add_option("file", o.input, "Game or causal-model JSON file")->required();
  std::vector<std::string> index_choices = index_kinds;
  index_choices.push_back("all");
  index->add_option("--kind", o.index_kind, "Index (or 'all')")->check(CLI::IsMember(index_choices));
  index->add_option("--scale", o.scale, "raw or per-cause")->check(CLI::IsMember({"raw", "per-cause"}));
  add_format(index);

  auto* est = app.add_subcommand("estimate", "Estimate an index by sampling coalitions");
  est->add_option("file", o.input, "Game or causal-model JSON file")->required();
  est->add_option("--kind", o.estimate_kind, "Index to estimate")
      ->check(CLI::IsMember({"responsibility", "holler-packel", "deegan-packel", "johnston"}));
  est->add_option("--epsilon", o.epsilon, "Additive error bound");
  est->add_option("--delta", o.delta, "Failure probability");
  auto* samples = est->add_option("--samples", o.samples, "Sample count (overrides the bound)")->check(CLI::PositiveNumber);
  est->add_option("--seed", o.seed, "Sampling seed");
  est->add_flag("--exhaustive", o.exhaustive, "Visit all 2^n coalitions once")->excludes(samples);
  add_format(est);

  auto* verify = app.add_subcommand("verify-axioms", "Property-test an index against axioms");
  std::vector<std::string> procedures = index_kinds;
  for (const char* extra : {"alternate-johnston", "estimate-johnston", "estimate-deegan-packel",
                            "estimate-holler-packel", "estimate-responsibility"}) {
    procedures.push_back(extra);
  }
  verify->add_option("--index", o.procedure, "Index procedure")->check(CLI::IsMember(procedures));
  verify->add_option("--axioms", o.axioms, "Axioms to check (default: the index's characterization)")->delimiter(',');
  verify->add_option("--trials", o.trials, "Applicable trials per axiom")->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "Trial seed");
  verify->add_flag("--impossibility", o.impossibility, "Replay the MM/E/S/NF impossibility argument");
  add_format(verify);

  auto* partition = app.add_subcommand("partition-vectors", "Weighted voting test vectors from PARTITION instances");
  std::vector<std::string> raw_multisets;
  partition->add_option("--values", raw_multisets, "Comma-separated multiset (repeatable)");
  partition->add_option("--random", o.random_count, "Number of random multisets");
  partition->add_option("--seed", o.seed, "Seed for random multisets");
  partition->add_option("--max-size", o.max_size, "Largest random multiset")->check(CLI::Range(1, 30));
  partition->add_option("--max-value", o.max_value, "Largest random entry")->check(CLI::PositiveNumber);
  add_format(partition);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    (void)worker_count();  // reject a malformed environment for every subcommand
    for (const std::string& text : raw_multisets) o.multisets.push_back(parse_multiset(text));
    if (enumerate->parsed()) return run_enumerate(o);
    if (index->parsed()) return run_index(o);
    if (est->parsed()) return run_estimate(o);
    if (verify->parsed()) return run_verify(o);
    if (partition->parsed()) return run_partition(o);
  } catch (const ce::Error& e) {
    std::cerr << "causal-explain: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "causal-explain: internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
