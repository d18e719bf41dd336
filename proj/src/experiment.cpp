#include "dsvm/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "dsvm/error.hpp"
#include "dsvm/rng.hpp"

namespace dsvm {

using nlohmann::json;

Network build_topology(const TopologySpec& spec, std::uint64_t seed) {
  if (spec.kind == "complete") return build_complete(spec.n);
  if (spec.kind == "regular") return build_regular(spec.n, spec.k, seed);
  if (spec.kind == "edges") return build_from_edge_list(spec.n, spec.edges);
  if (spec.kind == "file") return read_edge_list(spec.path);
  throw Error(ErrorKind::config, "unknown topology kind '" + spec.kind + "'");
}

TopologySpec parse_topology_flag(const std::string& text) {
  TopologySpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "file") {
      if (rest.empty()) throw Error(ErrorKind::config, "file topology needs a path");
      spec.kind = "file";
      spec.path = rest;
    } else if (kind == "complete") {
      spec.kind = "complete";
      spec.n = std::stoi(rest);
    } else if (kind == "regular") {
      const auto sep = rest.find(':');
      if (sep == std::string::npos) throw Error(ErrorKind::config, "expected regular:<n>:<k>");
      spec.kind = "regular";
      spec.n = std::stoi(rest.substr(0, sep));
      spec.k = std::stoi(rest.substr(sep + 1));
    } else {
      throw Error(ErrorKind::config, "unknown topology '" + text + "'");
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::config, "malformed topology '" + text + "'");
  } catch (const std::out_of_range&) {
    throw Error(ErrorKind::config, "malformed topology '" + text + "'");
  }
  return spec;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

double round6(double value) { return std::stod(format_number(value)); }

std::string expand_env(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find("${", pos);
    if (start == std::string::npos) {
      out += text.substr(pos);
      break;
    }
    const auto end = text.find('}', start);
    if (end == std::string::npos) throw Error(ErrorKind::config, "unterminated ${ in '" + text + "'");
    out += text.substr(pos, start - pos);
    std::string var = text.substr(start + 2, end - start - 2);
    std::optional<std::string> fallback;
    if (const auto dash = var.find(":-"); dash != std::string::npos) {
      fallback = var.substr(dash + 2);
      var.resize(dash);
    }
    const char* value = std::getenv(var.c_str());
    if (value != nullptr && *value != '\0') {
      out += value;
    } else if (fallback) {
      out += *fallback;
    } else {
      throw Error(ErrorKind::config, "environment variable " + var + " is not set (needed by '" +
                                         text + "')");
    }
    pos = end + 1;
  }
  return out;
}

std::vector<Edge> parse_edges(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::config, "edges must be [u, v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return edges;
}

Vector parse_vector(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Matrix parse_matrix(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw Error(ErrorKind::config, "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_number_integer()) {
    const auto n = j.get<long>();
    if (n < 1) throw Error(ErrorKind::config, "seed count must be positive");
    for (long i = 0; i < n; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  } else {
    for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
  }
  if (seeds.empty()) throw Error(ErrorKind::config, "seed list is empty");
  return seeds;
}

json* find_path(json& doc, const std::string& dotted) {
  json* node = &doc;
  std::istringstream stream(dotted);
  std::string part;
  while (std::getline(stream, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

std::string json_to_label(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::vector<json> expand_sweep(const json& resolved) {
  const json& sweep = resolved.at("sweep");
  if (sweep.is_null()) return {resolved};
  if (!sweep.contains("key") || !sweep.contains("values") || !sweep["values"].is_array()) {
    throw Error(ErrorKind::config, "sweep needs 'key' and a 'values' array");
  }
  const std::string key = sweep["key"].get<std::string>();
  std::vector<json> out;
  for (const auto& value : sweep["values"]) {
    json copy = resolved;
    copy["sweep"] = nullptr;
    json* target = find_path(copy, key);
    if (target == nullptr) throw Error(ErrorKind::config, "sweep key '" + key + "' does not exist");
    *target = value;
    copy["id"] = resolved["id"].get<std::string>() + "/" + key + "=" + json_to_label(value);
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

json default_config_json() {
  return json::parse(R"({
    "id": "experiment",
    "topology": {"kind": "complete", "n": 6, "k": 2, "edges": [], "path": ""},
    "data": {
      "kind": "gaussian",
      "mean_pos": [1, 1], "mean_neg": [2, 2], "cov": [[1, 0], [0, 1]],
      "path": "", "label_column": -1, "positive_value": 1, "header": false,
      "n_train": 40, "n_test": 500, "standardize": null
    },
    "engine": {
      "C_l": 1, "eta": 1, "max_iters": 400, "consensus_tol": 1e-4,
      "qp_tol": 1e-8, "qp_max_sweeps": 1000, "attacker_period": 1, "decision_tol": 1e-6
    },
    "attack": {
      "kind": "none", "nodes": [], "count": 0, "select": "first",
      "Q": 0, "C_a": 0.01, "C_delta": 0, "R": 0,
      "edges": [], "edge_count": 0, "sybil_in_degree": true,
      "variant": "negate-r", "shift": [], "C_l": 0
    },
    "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
    "window": 10,
    "sweep": null,
    "experiments": []
  })");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::config, "override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json* target = find_path(doc, key);
  if (target == nullptr) throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *target = std::move(value);
}

json resolve_document(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::config, "config root must be an object");
  json resolved = default_config_json();
  resolved.merge_patch(doc);
  // merge_patch deletes keys set to null; restore the optional ones.
  if (!resolved["data"].contains("standardize")) resolved["data"]["standardize"] = nullptr;
  if (!resolved.contains("sweep")) resolved["sweep"] = nullptr;
  if (!resolved.contains("experiments")) resolved["experiments"] = json::array();
  return resolved;
}

ExperimentConfig parse_experiment(const json& r) {
  try {
    ExperimentConfig cfg;
    cfg.id = r.at("id").get<std::string>();

    const json& t = r.at("topology");
    cfg.topology.kind = t.at("kind").get<std::string>();
    cfg.topology.n = t.at("n").get<int>();
    cfg.topology.k = t.at("k").get<int>();
    cfg.topology.edges = parse_edges(t.at("edges"));
    cfg.topology.path = expand_env(t.at("path").get<std::string>());

    const json& d = r.at("data");
    cfg.data.kind = d.at("kind").get<std::string>();
    if (cfg.data.kind != "gaussian" && cfg.data.kind != "csv") {
      throw Error(ErrorKind::config, "unknown data kind '" + cfg.data.kind + "'");
    }
    cfg.data.gaussian.mean_pos = parse_vector(d.at("mean_pos"));
    cfg.data.gaussian.mean_neg = parse_vector(d.at("mean_neg"));
    cfg.data.gaussian.cov = parse_matrix(d.at("cov"));
    cfg.data.path = expand_env(d.at("path").get<std::string>());
    cfg.data.csv.label_column = d.at("label_column").get<int>();
    cfg.data.csv.positive_value = d.at("positive_value").get<double>();
    cfg.data.csv.header = d.at("header").get<bool>();
    cfg.data.n_train = d.at("n_train").get<int>();
    cfg.data.n_test = d.at("n_test").get<int>();
    if (!d.at("standardize").is_null()) cfg.data.standardize = d.at("standardize").get<bool>();

    const json& e = r.at("engine");
    cfg.engine.c_l = e.at("C_l").get<double>();
    cfg.engine.eta = e.at("eta").get<double>();
    cfg.engine.max_iters = e.at("max_iters").get<int>();
    cfg.engine.consensus_tol = e.at("consensus_tol").get<double>();
    cfg.engine.qp_tol = e.at("qp_tol").get<double>();
    cfg.engine.qp_max_sweeps = e.at("qp_max_sweeps").get<int>();
    cfg.engine.attacker_period = e.at("attacker_period").get<int>();
    cfg.engine.decision_tol = e.at("decision_tol").get<double>();
    cfg.engine.validate();

    const json& a = r.at("attack");
    cfg.attack.kind = a.at("kind").get<std::string>();
    static const std::vector<std::string> kinds = {"none", "label", "data", "capture", "sybil",
                                                   "mitm", "model", "testing"};
    if (std::find(kinds.begin(), kinds.end(), cfg.attack.kind) == kinds.end()) {
      throw Error(ErrorKind::config, "unknown attack kind '" + cfg.attack.kind + "'");
    }
    cfg.attack.nodes = a.at("nodes").get<std::vector<NodeId>>();
    cfg.attack.count = a.at("count").get<int>();
    cfg.attack.select = a.at("select").get<std::string>();
    cfg.attack.budget = a.at("Q").get<double>();
    cfg.attack.cost = a.at("C_a").get<double>();
    cfg.attack.radius_sq = a.at("C_delta").get<double>();
    cfg.attack.magnitude = a.at("R").get<double>();
    cfg.attack.edges = parse_edges(a.at("edges"));
    cfg.attack.edge_count = a.at("edge_count").get<int>();
    cfg.attack.sybil_in_degree = a.at("sybil_in_degree").get<bool>();
    cfg.attack.variant = a.at("variant").get<std::string>();
    cfg.attack.shift = a.at("shift").get<std::vector<double>>();
    cfg.attack.c_l = a.at("C_l").get<double>();

    cfg.seeds = parse_seeds(r.at("seeds"));
    cfg.window = r.at("window").get<int>();
    return cfg;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::config, ex.what());
  }
}

std::vector<ExperimentConfig> resolve_experiments(const json& doc) {
  const json resolved = resolve_document(doc);
  std::vector<json> bases;
  if (resolved["experiments"].empty()) {
    bases.push_back(resolved);
  } else {
    json base = resolved;
    base["experiments"] = json::array();
    for (const auto& patch : resolved["experiments"]) {
      json entry = base;
      entry.merge_patch(patch);
      if (!entry["data"].contains("standardize")) entry["data"]["standardize"] = nullptr;
      if (!entry.contains("sweep")) entry["sweep"] = nullptr;
      bases.push_back(std::move(entry));
    }
  }
  std::vector<ExperimentConfig> out;
  for (const auto& base : bases) {
    for (const auto& expanded : expand_sweep(base)) out.push_back(parse_experiment(expanded));
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file " + path.string());
  json doc = json::parse(in, nullptr, false, true);
  if (doc.is_discarded()) throw Error(ErrorKind::config, "malformed JSON in " + path.string());
  return doc;
}

std::string AttackConfig::params() const {
  std::ostringstream os;
  auto targets = [&]() {
    if (!nodes.empty()) {
      os << "nodes=";
      for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? " " : "") << nodes[i];
    } else {
      os << "count=" << count << " select=" << select;
    }
  };
  if (kind == "none") return "";
  if (kind == "label") {
    targets();
    os << ";Q=" << format_number(budget) << ";C_a=" << format_number(cost);
  } else if (kind == "data") {
    targets();
    os << ";C_delta=" << format_number(radius_sq) << ";C_a=" << format_number(cost);
  } else if (kind == "capture" || kind == "sybil") {
    targets();
    os << ";R=" << format_number(magnitude);
    if (kind == "sybil" && !sybil_in_degree) os << ";sybil_in_degree=false";
  } else if (kind == "mitm") {
    if (!edges.empty()) {
      os << "edges=" << edges.size();
    } else {
      os << "edge_count=" << edge_count << " select=" << select;
    }
    os << ";R=" << format_number(magnitude);
  } else if (kind == "model") {
    targets();
    os << ";C_l=" << format_number(c_l);
  } else if (kind == "testing") {
    targets();
    os << ";variant=" << variant;
  }
  return os.str();
}

std::vector<NodeId> select_nodes(const AttackConfig& attack, const Network& net, std::uint64_t seed) {
  if (!attack.nodes.empty()) return attack.nodes;
  const int count = attack.count < 0 ? net.size() : attack.count;
  if (count > net.size()) {
    throw Error(ErrorKind::config, "cannot compromise " + std::to_string(count) + " of " +
                                       std::to_string(net.size()) + " nodes");
  }
  if (attack.select == "highest-degree") return nodes_by_degree(net, count, true);
  if (attack.select == "lowest-degree") return nodes_by_degree(net, count, false);
  std::vector<NodeId> order(static_cast<std::size_t>(net.size()));
  std::iota(order.begin(), order.end(), 0);
  if (attack.select == "random") {
    Rng rng(mix_seed(seed, 0x73656c6eULL));
    rng.shuffle(order.begin(), order.end());
  } else if (attack.select != "first") {
    throw Error(ErrorKind::config, "unknown node selection '" + attack.select + "'");
  }
  order.resize(static_cast<std::size_t>(count));
  return order;
}

std::vector<Edge> select_edges(const AttackConfig& attack, const Network& net, std::uint64_t seed) {
  if (!attack.edges.empty()) return attack.edges;
  std::vector<Edge> all = net.edges();
  const int count = attack.edge_count < 0 ? static_cast<int>(all.size()) : attack.edge_count;
  if (count > static_cast<int>(all.size())) {
    throw Error(ErrorKind::config, "cannot compromise " + std::to_string(count) + " of " +
                                       std::to_string(all.size()) + " edges");
  }
  if (attack.select == "random") {
    Rng rng(mix_seed(seed, 0x73656c65ULL));
    rng.shuffle(all.begin(), all.end());
  } else if (attack.select != "first") {
    throw Error(ErrorKind::config, "edge selection must be 'first' or 'random'");
  }
  all.resize(static_cast<std::size_t>(count));
  return all;
}

AdversaryList make_adversaries(const AttackConfig& attack, const Network& net, std::uint64_t seed,
                               int feature_dim) {
  AdversaryList out;
  if (attack.kind == "none") return out;
  if (attack.kind == "label") {
    out.push_back(std::make_shared<LabelFlipAttacker>(
        LabelAttackSpec{select_nodes(attack, net, seed), attack.budget, attack.cost}));
  } else if (attack.kind == "data") {
    out.push_back(std::make_shared<DataPoisonAttacker>(
        DataAttackSpec{select_nodes(attack, net, seed), attack.radius_sq, attack.cost}));
  } else if (attack.kind == "capture" || attack.kind == "sybil" || attack.kind == "mitm") {
    NetAttackSpec spec;
    spec.kind = parse_net_attack_kind(attack.kind);
    spec.magnitude = attack.magnitude;
    spec.seed = seed;
    spec.sybil_in_degree = attack.sybil_in_degree;
    if (spec.kind == NetAttackKind::mitm) {
      spec.edges = select_edges(attack, net, seed);
    } else {
      spec.nodes = select_nodes(attack, net, seed);
    }
    out.push_back(make_net_injector(spec));
  } else if (attack.kind == "model") {
    out.push_back(std::make_shared<ModelAttack>(ModelAttackSpec{select_nodes(attack, net, seed), attack.c_l}));
  } else if (attack.kind == "testing") {
    TestingAttackSpec spec;
    spec.variant = parse_testing_variant(attack.variant);
    spec.targets = select_nodes(attack, net, seed);
    spec.shift = attack.shift.empty() ? Vector(Vector::Zero(feature_dim))
                                      : Eigen::Map<const Vector>(attack.shift.data(),
                                                                 static_cast<Eigen::Index>(attack.shift.size()));
    out.push_back(std::make_shared<TestingAttack>(spec));
  } else {
    throw Error(ErrorKind::config, "unknown attack kind '" + attack.kind + "'");
  }
  return out;
}

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const LabeledSet* csv_cache) {
  SeedResult out;
  out.seed = seed;
  const Network net = build_topology(cfg.topology, seed);
  out.topology_degree = network_degree(net);

  LabeledSet pool;
  bool standardize = false;
  if (cfg.data.kind == "gaussian") {
    const int v = net.size();
    // Each node rounds its positive share up on odd sizes.
    const int per_class_train = v * ((cfg.data.n_train + 1) / 2);
    const int per_class_test = std::max(1, v * ((cfg.data.n_test + 1) / 2));
    auto [train, test] = gen_gaussian(per_class_train, per_class_test, cfg.data.gaussian, seed);
    pool = concat(train, test);
    standardize = cfg.data.standardize.value_or(false);
  } else {
    pool = csv_cache != nullptr ? *csv_cache : load_csv(cfg.data.path, cfg.data.csv);
    standardize = cfg.data.standardize.value_or(true);
  }
  const auto parts = partition(pool, net, {cfg.data.n_train, cfg.data.n_test, standardize, seed});
  const AdversaryList adversaries = make_adversaries(cfg.attack, net, seed, parts.front().dim());

  TrainResult result = train(net, parts, cfg.engine, adversaries);
  out.report = equilibrium_risk(result, cfg.window);
  out.oscillation = trailing_oscillation(result, cfg.window);
  out.trace = std::move(result.trace);
  out.ok = true;
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  ExperimentResult res;
  res.id = cfg.id;
  res.attack_kind = cfg.attack.kind;
  res.attack_params = cfg.attack.params();
  try {
    res.topology = build_topology(cfg.topology, 0).describe();
  } catch (const Error& e) {
    res.topology = cfg.topology.kind;
  }

  std::optional<LabeledSet> csv;
  std::string csv_error;
  if (cfg.data.kind == "csv") {
    try {
      csv = load_csv(cfg.data.path, cfg.data.csv);
    } catch (const Error& e) {
      csv_error = e.what();
    }
  }

  res.seeds.resize(cfg.seeds.size());
  auto run_one = [&](std::size_t i) {
    SeedResult& slot = res.seeds[i];
    slot.seed = cfg.seeds[i];
    if (!csv_error.empty()) {
      slot.error = csv_error;
      return;
    }
    try {
      slot = run_seed(cfg, cfg.seeds[i], csv ? &*csv : nullptr);
    } catch (const std::exception& e) {
      slot.ok = false;
      slot.error = e.what();
    }
  };
  const std::size_t n = cfg.seeds.size();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) run_one(i);
      });
    }
  }

  std::vector<double> globals;
  for (const auto& s : res.seeds) {
    if (s.ok) globals.push_back(s.report.global);
  }
  res.global = mean_std(globals);
  return res;
}

namespace {

void write_row(std::ostream& out, const ExperimentResult& r, const std::string& seed,
               const std::string& iteration, const std::string& node, const std::string& risk,
               const std::string& residual, const std::string& converged) {
  out << r.id << ',' << seed << ',' << r.topology << ',' << r.attack_kind << ',' << r.attack_params
      << ',' << iteration << ',' << node << ',' << risk << ',' << residual << ',' << converged << '\n';
}

constexpr const char* kHeader =
    "experiment_id,seed,topology,attack_kind,attack_params,iteration,node,risk,consensus_residual,"
    "converged\n";

}  // namespace

void write_results_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << kHeader;
  for (const auto& r : results) {
    for (const auto& s : r.seeds) {
      const std::string seed = std::to_string(s.seed);
      if (!s.ok) {
        write_row(out, r, seed, "", "global", "nan", "", "error");
        continue;
      }
      const std::string it = std::to_string(s.report.iteration);
      const std::string res = format_number(s.report.consensus_residual);
      const std::string conv = s.report.converged ? "1" : "0";
      for (std::size_t v = 0; v < s.report.per_node.size(); ++v) {
        write_row(out, r, seed, it, std::to_string(v), format_number(s.report.per_node[v]), res, conv);
      }
      write_row(out, r, seed, it, "global", format_number(s.report.global), res, conv);
    }
    write_row(out, r, "mean", "", "global", format_number(r.global.mean), "", "");
    write_row(out, r, "std", "", "global", format_number(r.global.std), "", "");
  }
}

void write_trace_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << kHeader;
  for (const auto& r : results) {
    for (const auto& s : r.seeds) {
      if (!s.ok) continue;
      const std::string seed = std::to_string(s.seed);
      const std::string conv = s.report.converged ? "1" : "0";
      for (const auto& rec : s.trace) {
        const std::string it = std::to_string(rec.iteration);
        const std::string res = format_number(rec.consensus_residual);
        for (std::size_t v = 0; v < rec.node_risk.size(); ++v) {
          write_row(out, r, seed, it, std::to_string(v), format_number(rec.node_risk[v]), res, conv);
        }
        write_row(out, r, seed, it, "global", format_number(rec.global_risk), res, conv);
      }
    }
  }
}

json results_json(const std::vector<ExperimentResult>& results) {
  json doc;
  doc["experiments"] = json::array();
  for (const auto& r : results) {
    json e;
    e["id"] = r.id;
    e["topology"] = r.topology;
    e["attack_kind"] = r.attack_kind;
    e["attack_params"] = r.attack_params;
    e["seeds"] = json::array();
    int ok = 0;
    for (const auto& s : r.seeds) {
      json js;
      js["seed"] = s.seed;
      js["ok"] = s.ok;
      if (!s.ok) {
        js["error"] = s.error;
      } else {
        ++ok;
        js["iteration"] = s.report.iteration;
        js["converged"] = s.report.converged;
        js["consensus_residual"] = round6(s.report.consensus_residual);
        js["global_risk"] = round6(s.report.global);
        js["window_variance"] = round6(s.report.window_variance);
        js["oscillation"] = round6(s.oscillation);
        json nodes = json::array();
        for (double v : s.report.per_node) nodes.push_back(round6(v));
        js["node_risk"] = std::move(nodes);
      }
      e["seeds"].push_back(std::move(js));
    }
    e["summary"] = {{"seeds_ok", ok}, {"mean", round6(r.global.mean)}, {"std", round6(r.global.std)}};
    doc["experiments"].push_back(std::move(e));
  }
  return doc;
}

EmitPaths emit(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir,
               bool trace) {
  if (results.empty()) throw Error(ErrorKind::invalid_parameter, "no results to emit");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  EmitPaths paths{dir / "results.csv", dir / "results.json", std::nullopt};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
    return out;
  };
  {
    auto out = open(paths.csv);
    write_results_csv(results, out);
  }
  {
    auto out = open(paths.json);
    out << results_json(results).dump(2) << '\n';
  }
  if (trace) {
    paths.trace = dir / "trace.csv";
    auto out = open(*paths.trace);
    write_trace_csv(results, out);
  }
  return paths;
}

}  // namespace dsvm
