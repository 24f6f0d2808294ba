#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "balance/acceptance.hpp"
#include "balance/analysis.hpp"
#include "balance/errors.hpp"
#include "balance/oracle.hpp"

#ifndef BALANCE_VERSION
#define BALANCE_VERSION "unknown"
#endif

namespace balance::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

double parse_decimal(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + text + "'");
  }
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_manifest(const std::vector<std::string>& outputs) {
  for (const auto& o : outputs) {
    if (!o.empty()) return (fs::path(o).parent_path() / "manifest.jsonl").string();
  }
  return {};
}

void append_manifest(const std::string& path, const std::string& command,
                     const std::vector<std::string>& argv, ordered_json config,
                     const std::vector<std::string>& outputs, double seconds) {
  if (path.empty()) return;
  ordered_json entry;
  entry["command"] = command;
  entry["argv"] = argv;
  entry["config"] = std::move(config);
  entry["version"] = BALANCE_VERSION;
  entry["outputs"] = outputs;
  entry["wall_clock_seconds"] = seconds;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to manifest " + path);
  out << entry.dump() << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Maps library exceptions onto the documented exit codes.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace

std::optional<double> parse_gamma(const std::string& text) {
  if (text == "full") return std::nullopt;
  if (text == "pi") return std::numbers::pi;
  if (text.rfind("pi/", 0) == 0) {
    const double d = parse_decimal(text.substr(3), "gamma divisor");
    if (!(d > 0.0)) throw std::invalid_argument("invalid gamma '" + text + "'");
    return std::numbers::pi / d;
  }
  return parse_decimal(text, "gamma");
}

double parse_alpha(const std::string& text) {
  if (text == "star") return alpha_star_closed_form();
  const double a = parse_decimal(text, "alpha");
  if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
  return a;
}

ValueDef parse_value_def(const std::string& text) {
  if (text == "final") return ValueDef::FinalNorm;
  if (text == "maxprefix") return ValueDef::MaxPrefixNorm;
  throw std::invalid_argument("value must be 'final' or 'maxprefix'");
}

std::string config_to_json(const GameConfig& c) {
  ordered_json j;
  if (c.gamma) {
    j["gamma"] = *c.gamma;
  } else {
    j["gamma"] = "full";
  }
  j["n"] = c.n;
  j["pusher"] = to_string(c.pusher);
  j["chooser"] = to_string(c.chooser);
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["record_full"] = c.record_full;
  j["value_def"] = std::string(value_def_name(c.value_def));
  return j.dump();
}

GameConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GameConfig c;
  if (j.at("gamma").is_string()) {
    c.gamma = std::nullopt;
  } else {
    c.gamma = j.at("gamma").get<double>();
  }
  c.n = j.at("n").get<long>();
  c.pusher = parse_pusher_spec(j.at("pusher").get<std::string>());
  c.chooser = parse_chooser_spec(j.at("chooser").get<std::string>());
  c.alpha = j.at("alpha").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.record_full = j.at("record_full").get<bool>();
  c.value_def = parse_value_def(j.at("value_def").get<std::string>());
  return c;
}

SimulateOutputs run_simulate(const GameConfig& config) {
  const Trajectory t = play(config);
  SimulateOutputs out;
  if (config.record_full) out.csv = trajectory_csv(t);
  out.summary = summary_json(t, config);
  return out;
}

int cmd_simulate(const SimulateOptions& options, const std::vector<std::string>& argv) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    GameConfig config = options.config;
    if (options.out_csv.empty()) config.record_full = false;
    validate_config(config);
    const SimulateOutputs out = run_simulate(config);

    std::vector<std::string> written;
    if (!options.out_csv.empty() && config.record_full) {
      write_file(options.out_csv, out.csv);
      written.push_back(options.out_csv);
    }
    std::string summary_path = options.summary_path;
    if (summary_path.empty() && !options.out_csv.empty()) {
      summary_path = fs::path(options.out_csv).replace_extension(".json").string();
    }
    if (summary_path.empty()) {
      std::cout << out.summary;
    } else {
      write_file(summary_path, out.summary);
      written.push_back(summary_path);
    }
    const std::string manifest =
        options.manifest_path.empty() ? default_manifest(written) : options.manifest_path;
    if (!written.empty()) {
      append_manifest(manifest, "simulate", argv, ordered_json::parse(config_to_json(config)),
                      written, seconds_since(start));
    }
    return static_cast<int>(kOk);
  });
}

int cmd_constants(const std::optional<double>& gamma) {
  return guarded([&] {
    if (gamma) {
      if (!(*gamma > 0.0 && *gamma <= 0.85)) {
        throw std::invalid_argument("constants: gamma must lie in (0, 0.85]");
      }
      std::cout << to_json(compute_gamma_report(*gamma)) << '\n';
    } else {
      std::cout << to_json(compute_constants()) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_minimax(int n, int grid, double gamma, ValueDef value_def) {
  return guarded([&] {
    const auto spec = oracle::MinimaxSpec::make(n, grid, gamma, value_def);
    const auto r = oracle::minimax_value(spec);
    ordered_json j;
    j["n"] = n;
    j["grid"] = grid;
    j["gamma"] = gamma;
    j["value_def"] = std::string(value_def_name(value_def));
    j["value"] = r.value;
    j["nodes"] = r.nodes;
    std::cout << j.dump(2) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const SweepOptions& options, const std::vector<std::string>& argv) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    validate_config(options.base);

    // Cartesian product of the supplied axes.
    std::vector<ConfigOverride> grid{ConfigOverride{}};
    const auto expand = [&grid](auto&& values, auto&& set) {
      if (values.empty()) return;
      std::vector<ConfigOverride> next;
      for (const auto& o : grid) {
        for (const auto& v : values) {
          ConfigOverride copy = o;
          set(copy, v);
          next.push_back(copy);
        }
      }
      grid = std::move(next);
    };
    std::vector<std::optional<double>> gammas;
    for (const auto& g : options.gamma_grid) gammas.push_back(parse_gamma(g));
    expand(gammas, [](ConfigOverride& o, const std::optional<double>& g) { o.gamma = g; });
    expand(options.n_grid, [](ConfigOverride& o, long n) { o.n = n; });
    expand(options.alpha_grid, [](ConfigOverride& o, double a) { o.alpha = a; });
    for (const auto& o : grid) validate_config(apply_override(options.base, o));

    const SweepTable table = sweep(options.base, grid, options.repetitions);
    std::vector<std::string> written;
    if (options.out_csv.empty()) {
      std::cout << sweep_csv(table);
    } else {
      write_file(options.out_csv, sweep_csv(table));
      written.push_back(options.out_csv);
    }
    if (!options.aggregate_csv.empty()) {
      write_file(options.aggregate_csv, sweep_aggregate_csv(table));
      written.push_back(options.aggregate_csv);
    }
    const std::string manifest =
        options.manifest_path.empty() ? default_manifest(written) : options.manifest_path;
    if (!written.empty()) {
      ordered_json cfg = ordered_json::parse(config_to_json(options.base));
      cfg["repetitions"] = options.repetitions;
      cfg["gamma_grid"] = options.gamma_grid;
      cfg["n_grid"] = options.n_grid;
      cfg["alpha_grid"] = options.alpha_grid;
      append_manifest(manifest, "sweep", argv, cfg, written, seconds_since(start));
    }
    for (const auto& cell : table.cells) {
      if (!cell.error.empty()) {
        std::cerr << "cell " << cell.point << '/' << cell.repetition << ": " << cell.error << '\n';
      }
    }
    return static_cast<int>(kOk);
  });
}

namespace {

// Re-runs the first simulate entry of a manifest and byte-compares outputs.
bool reproduce_from_manifest(const std::string& path, std::string& detail) {
  std::ifstream in(path);
  if (!in) {
    detail = "cannot read manifest " + path;
    return false;
  }
  std::string line;
  while (std::getline(in, line)) {
    const auto entry = nlohmann::json::parse(line);
    if (entry.at("command") != "simulate") continue;
    const GameConfig config = config_from_json(entry.at("config").dump());
    const SimulateOutputs out = run_simulate(config);
    for (const auto& file : entry.at("outputs")) {
      const std::string name = file.get<std::string>();
      const std::string& expected =
          fs::path(name).extension() == ".csv" ? out.csv : out.summary;
      if (read_file(name) != expected) {
        detail = name + " differs from its recomputation";
        return false;
      }
    }
    detail = "reproduced " + std::to_string(entry.at("outputs").size()) + " file(s) bit-exactly";
    return true;
  }
  detail = "no simulate entry in " + path;
  return false;
}

}  // namespace

int cmd_verify(bool fast, bool verbose, const std::string& manifest_path) {
  return guarded([&] {
    acceptance::Options options;
    options.fast = fast;
    bool all = true;
    for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
      const auto result = acceptance::run_criterion(id, options);
      all = all && result.passed();
      std::cout << acceptance::format_report({result}, verbose) << std::flush;
    }
    if (!manifest_path.empty()) {
      std::string detail;
      const bool ok = reproduce_from_manifest(manifest_path, detail);
      all = all && ok;
      std::cout << '[' << (ok ? "PASS" : "FAIL") << "] manifest: " << detail << '\n';
    }
    return static_cast<int>(all ? kOk : kCriterionFailed);
  });
}

}  // namespace balance::cli
