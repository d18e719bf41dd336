#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsvm/data.hpp"
#include "dsvm/engine.hpp"
#include "dsvm/games.hpp"
#include "dsvm/graph.hpp"
#include "dsvm/injectors.hpp"
#include "dsvm/metrics.hpp"

namespace dsvm {

struct TopologySpec {
  std::string kind = "complete";  // complete | regular | edges | file
  int n = 6;
  int k = 2;
  std::vector<Edge> edges;
  std::string path;
};

Network build_topology(const TopologySpec& spec, std::uint64_t seed = 0);
// Parses "complete:6", "regular:6:2" or "file:<path>".
TopologySpec parse_topology_flag(const std::string& text);

struct DataSpec {
  std::string kind = "gaussian";  // gaussian | csv
  GaussianSpec gaussian;
  std::string path;
  CsvOptions csv;
  int n_train = 40;
  int n_test = 500;
  std::optional<bool> standardize;  // default: off for gaussian, on for csv
};

struct AttackConfig {
  std::string kind = "none";  // none | label | data | capture | sybil | mitm | model | testing
  std::vector<NodeId> nodes;
  int count = 0;
  std::string select = "first";  // first | highest-degree | lowest-degree | random
  double budget = 0.0;            // Q
  double cost = 0.01;             // C_a
  double radius_sq = 0.0;         // C_delta
  double magnitude = 0.0;         // R
  std::vector<Edge> edges;
  int edge_count = 0;             // -1 selects every edge
  bool sybil_in_degree = true;
  std::string variant = "negate-r";
  std::vector<double> shift;
  double c_l = 0.0;               // model attack override

  std::string params() const;
};

// Compromised node set for this attack on `net` (seeded for "random").
std::vector<NodeId> select_nodes(const AttackConfig& attack, const Network& net, std::uint64_t seed);
std::vector<Edge> select_edges(const AttackConfig& attack, const Network& net, std::uint64_t seed);

AdversaryList make_adversaries(const AttackConfig& attack, const Network& net, std::uint64_t seed,
                               int feature_dim);

struct ExperimentConfig {
  std::string id = "experiment";
  TopologySpec topology;
  DataSpec data;
  EngineConfig engine;
  AttackConfig attack;
  std::vector<std::uint64_t> seeds;
  int window = 10;
};

// Full default document; every accepted key appears here.
nlohmann::json default_config_json();

// Applies "a.b.c=value" overrides. The key must already exist; the value is
// parsed as JSON and falls back to a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Merges `doc` onto the defaults and expands "experiments" and "sweep".
std::vector<ExperimentConfig> resolve_experiments(const nlohmann::json& doc);
nlohmann::json resolve_document(const nlohmann::json& doc);
ExperimentConfig parse_experiment(const nlohmann::json& resolved);

nlohmann::json read_json_file(const std::filesystem::path& path);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RiskReport report;
  double oscillation = 0.0;
  std::vector<RoundRecord> trace;
  double topology_degree = 0.0;
};

struct ExperimentResult {
  std::string id;
  std::string topology;
  std::string attack_kind;
  std::string attack_params;
  std::vector<SeedResult> seeds;
  MeanStd global;  // across successful seeds
};

// Runs every seed (in parallel when `workers` > 1); a failing seed is
// recorded and the others continue.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

// Runs a single seed; throws on error.
SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const LabeledSet* csv_cache);

std::string format_number(double value);

void write_results_csv(const std::vector<ExperimentResult>& results, std::ostream& out);
void write_trace_csv(const std::vector<ExperimentResult>& results, std::ostream& out);
nlohmann::json results_json(const std::vector<ExperimentResult>& results);

struct EmitPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
  std::optional<std::filesystem::path> trace;
};

// Writes <dir>/results.csv, <dir>/results.json and optionally <dir>/trace.csv.
EmitPaths emit(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir,
               bool trace);

}  // namespace dsvm
