#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dsvm/error.hpp"
#include "dsvm/experiment.hpp"

#ifndef DSVM_PRESET_DIR
#define DSVM_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  std::string seeds;
  std::string topology;
  std::string preset;
  bool trace = false;
  bool header = true;
  int workers = 0;
  int verbosity = 0;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path preset_dir() {
  if (const char* env = std::getenv("DSVM_PRESET_DIR")) return env;
  return DSVM_PRESET_DIR;
}

fs::path resolve_config_path(const std::string& name) {
  if (fs::exists(name)) return name;
  fs::path candidate = preset_dir() / (name + ".json");
  if (fs::exists(candidate)) return candidate;
  throw ConfigError("config file not found: " + name + " (also tried " + candidate.string() + ")");
}

std::vector<std::string> all_presets() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(preset_dir(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

json parse_seed_flag(const std::string& text) {
  try {
    if (text.find(',') == std::string::npos) {
      std::size_t used = 0;
      const long n = std::stol(text, &used);
      if (used != text.size() || n < 1) throw std::invalid_argument(text);
      return n;
    }
    json list = json::array();
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
      std::size_t used = 0;
      const auto value = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      list.push_back(value);
    }
    return list;
  } catch (const std::logic_error&) {
    throw ConfigError("--seeds expects a count or a comma-separated list, got '" + text + "'");
  }
}

json topology_json(const dsvm::TopologySpec& t) {
  json j = {{"kind", t.kind}, {"n", t.n}, {"k", t.k}, {"path", t.path}};
  j["edges"] = json::array();
  for (const auto& [u, v] : t.edges) j["edges"].push_back({u, v});
  return j;
}

json load_document(const Options& opt) {
  json doc = json::object();
  if (!opt.config.empty()) doc = dsvm::read_json_file(resolve_config_path(opt.config));
  json resolved = dsvm::resolve_document(doc);
  if (!opt.topology.empty()) resolved["topology"] = topology_json(dsvm::parse_topology_flag(opt.topology));
  if (!opt.seeds.empty()) resolved["seeds"] = parse_seed_flag(opt.seeds);
  for (const auto& s : opt.sets) dsvm::apply_override(resolved, s);
  return resolved;
}

void check_kinds(const std::string& command, const std::vector<dsvm::ExperimentConfig>& cfgs) {
  static const std::set<std::string> game = {"label", "data"};
  static const std::set<std::string> net = {"capture", "sybil", "mitm", "model", "testing"};
  for (const auto& c : cfgs) {
    const std::string& k = c.attack.kind;
    bool ok = true;
    if (command == "train") ok = k == "none";
    if (command == "attack") ok = game.contains(k);
    if (command == "netattack") ok = net.contains(k);
    if (!ok) {
      throw ConfigError("experiment '" + c.id + "' has attack kind '" + k + "', which '" + command +
                        "' does not run");
    }
  }
}

void print_summary(const std::vector<dsvm::ExperimentResult>& results, bool header) {
  if (header) {
    std::printf("%-32s %-28s %8s  %-34s %-22s %s\n", "experiment", "topology", "degree", "attack",
                "risk mean +- std", "seeds");
  }
  for (const auto& r : results) {
    int ok = 0;
    double degree = 0.0;
    for (const auto& s : r.seeds) {
      if (s.ok) {
        degree = s.topology_degree;
        ++ok;
      }
    }
    std::string attack = r.attack_kind;
    if (!r.attack_params.empty()) attack += " " + r.attack_params;
    char risk[64];
    if (ok > 0) {
      std::snprintf(risk, sizeof risk, "%.4f +- %.4f", r.global.mean, r.global.std);
    } else {
      std::snprintf(risk, sizeof risk, "n/a");
    }
    std::printf("%-32s %-28s %8.4f  %-34s %-22s %d/%zu\n", r.id.c_str(), r.topology.c_str(), degree,
                attack.c_str(), risk, ok, r.seeds.size());
  }
}

int run_configs(const std::vector<dsvm::ExperimentConfig>& cfgs, const Options& opt,
                const fs::path& out_dir) {
  const int workers = opt.workers > 0 ? opt.workers
                                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<dsvm::ExperimentResult> results;
  bool failed = false;
  for (const auto& cfg : cfgs) {
    if (opt.verbosity > 0) std::fprintf(stderr, "running %s (%zu seeds)\n", cfg.id.c_str(), cfg.seeds.size());
    results.push_back(dsvm::run_experiment(cfg, workers));
    for (const auto& s : results.back().seeds) {
      if (!s.ok) {
        failed = true;
        std::fprintf(stderr, "%s seed %llu: %s\n", cfg.id.c_str(), static_cast<unsigned long long>(s.seed),
                     s.error.c_str());
      }
    }
  }
  const auto paths = dsvm::emit(results, out_dir, opt.trace);
  print_summary(results, opt.header);
  if (opt.verbosity >= 0) {
    std::printf("wrote %s, %s", paths.csv.string().c_str(), paths.json.string().c_str());
    if (paths.trace) std::printf(", %s", paths.trace->string().c_str());
    std::printf("\n");
  }
  return failed ? 2 : 0;
}

int validate(const Options& opt) {
  const json resolved = load_document(opt);
  const auto cfgs = dsvm::resolve_experiments(resolved);
  std::printf("%s\n", resolved.dump(2).c_str());
  for (const auto& cfg : cfgs) {
    std::printf("experiment %s: attack=%s %s, %zu seeds\n", cfg.id.c_str(), cfg.attack.kind.c_str(),
                cfg.attack.params().c_str(), cfg.seeds.size());
    if (cfg.topology.kind != "file") {
      const auto net = dsvm::build_topology(cfg.topology, cfg.seeds.front());
      std::printf("  topology %s\n", net.describe().c_str());
    }
    if (cfg.data.kind == "csv") {
      const bool present = fs::exists(cfg.data.path);
      std::printf("  dataset %s: %s\n", cfg.data.path.c_str(), present ? "found" : "missing");
    }
  }
  return 0;
}

int dispatch(const std::string& command, const Options& opt) {
  fs::path out_dir = opt.out;
  if (out_dir.empty()) {
    const char* env = std::getenv("DSVM_OUT");
    out_dir = env != nullptr ? env : "results";
  }
  if (command == "validate") return validate(opt);
  if (command == "sweep" && !opt.preset.empty()) {
    std::vector<std::string> names;
    if (opt.preset == "all") {
      names = all_presets();
      if (names.empty()) throw ConfigError("no presets found in " + preset_dir().string());
    } else {
      names.push_back(opt.preset);
    }
    int code = 0;
    for (const auto& name : names) {
      Options one = opt;
      one.config = name;
      const auto cfgs = dsvm::resolve_experiments(load_document(one));
      std::printf("== %s\n", name.c_str());
      code = std::max(code, run_configs(cfgs, one, names.size() > 1 ? out_dir / name : out_dir));
    }
    return code;
  }
  const auto cfgs = dsvm::resolve_experiments(load_document(opt));
  check_kinds(command, cfgs);
  return run_configs(cfgs, opt, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed SVM attack simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config, "Config file or preset name");
    sub->add_option("-s,--set", opt.sets, "Override a config key (key=value), repeatable");
    sub->add_option("-o,--out", opt.out, "Output directory (default $DSVM_OUT or ./results)");
    sub->add_option("--seeds", opt.seeds, "Seed count or comma-separated seed list");
    sub->add_option("--topology", opt.topology, "complete:<n>, regular:<n>:<k> or file:<path>");
    sub->add_flag("--trace", opt.trace, "Also write the per-iteration trace.csv");
    sub->add_flag("--header,!--no-header", opt.header, "Print the summary table header");
    sub->add_option("-j,--workers", opt.workers, "Parallel seeds (default: hardware threads)");
    sub->add_flag("-v,--verbose", [&](std::int64_t n) { opt.verbosity += static_cast<int>(n); },
                  "More progress output");
    sub->add_flag("-q,--quiet", [&](std::int64_t) { opt.verbosity = -1; }, "Only print the summary");
  };

  std::vector<std::pair<std::string, std::string>> commands = {
      {"train", "Run plain distributed training (no attack)"},
      {"attack", "Run a label-flip or data-poison game"},
      {"netattack", "Run a capture, Sybil, MITM, model or testing attack"},
      {"sweep", "Run configs with sweeps, or bundled presets via --preset"},
      {"validate", "Resolve and print a config without running it"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "sweep") sub->add_option("--preset", opt.preset, "Preset name, or 'all'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const dsvm::Error& e) {
    using K = dsvm::ErrorKind;
    const bool config = e.kind() == K::config || e.kind() == K::invalid_topology ||
                        e.kind() == K::invalid_edge || e.kind() == K::invalid_node ||
                        e.kind() == K::invalid_parameter;
    std::fprintf(stderr, "%s: %s\n", config ? "config error" : dsvm::to_string(e.kind()), e.what());
    return config ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
