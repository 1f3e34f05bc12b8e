#include "tamed_sde/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tamed_sde/io.hpp"
#include "tamed_sde/problems.hpp"
#include "tamed_sde/schemes.hpp"

namespace tamed_sde {

namespace {

const std::map<std::string, std::vector<std::string>>& section_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"experiment", {"kind", "problem", "schemes", "test_functions", "threads", "seed"}},
      {"taming", {"alpha", "gamma"}},
      {"montecarlo", {"k_ref", "levels", "paths", "horizon"}},
      {"sampler",
       {"beta", "h_list", "n_steps", "burn_in", "thin", "bins", "range_lo", "range_hi",
        "lyapunov_delta", "moment_k"}},
      {"output", {"directory"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
  }
  if (used != value.size() || !std::isfinite(v))
    throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
  return v;
}

std::int64_t parse_integer(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  const double r = std::floor(v);
  if (r != v || std::abs(v) > 9.0e15)
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  return static_cast<std::int64_t>(r);
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  try {
    if (value.empty() || value[0] == '-' || value[0] == '+') throw std::invalid_argument("");
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
}

struct RawConfig {
  // section.key -> value, with presence tracked for required-key reporting
  std::map<std::string, std::string> values;

  bool has(const std::string& dotted) const { return values.count(dotted) > 0; }
  const std::string& get(const std::string& dotted) const { return values.at(dotted); }
};

RawConfig scan(const std::string& text) {
  RawConfig raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!section_keys().count(section)) {
        std::string msg = "unknown section '[" + section + "]'; valid:";
        for (const auto& [name, _] : section_keys()) msg += " [" + name + "]";
        throw ConfigError(msg);
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto& valid = section_keys().at(section);
    if (std::find(valid.begin(), valid.end(), key) == valid.end()) {
      std::string msg = "unknown key '" + key + "' in [" + section + "]; valid:";
      for (const auto& k : valid) msg += ' ' + k;
      throw ConfigError(msg);
    }
    const std::string dotted = section + "." + key;
    if (raw.values.count(dotted)) throw ConfigError("duplicate key '" + dotted + "'");
    raw.values[dotted] = value;
  }
  return raw;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const RawConfig raw = scan(text);
  ExperimentConfig cfg;

  std::vector<std::string> missing;
  if (raw.has("experiment.kind")) {
    cfg.kind = raw.get("experiment.kind");
    if (cfg.kind != "converge" && cfg.kind != "sample" && cfg.kind != "validate")
      throw ConfigError("kind must be one of: converge sample validate");
  } else {
    missing.push_back("experiment.kind");
  }
  const bool needs_problem = cfg.kind == "converge" || cfg.kind == "sample";
  if (needs_problem && !raw.has("experiment.problem")) missing.push_back("experiment.problem");
  if (cfg.kind == "converge" && !raw.has("experiment.schemes"))
    missing.push_back("experiment.schemes");
  if (cfg.kind == "sample" && !raw.has("sampler.h_list")) missing.push_back("sampler.h_list");
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += ' ' + k;
    throw ConfigError(msg);
  }

  if (raw.has("experiment.problem")) cfg.problem = raw.get("experiment.problem");
  SdeProblem problem;
  if (!cfg.problem.empty()) {
    try {
      problem = builtin_problem(cfg.problem);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (raw.has("experiment.schemes")) {
    const auto names = split_list(raw.get("experiment.schemes"));
    if (names.empty() && cfg.kind == "converge")
      throw ConfigError("key 'schemes': empty scheme list");
    for (const auto& n : names) {
      try {
        parse_scheme(n);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    cfg.schemes = names;
  }

  if (raw.has("experiment.test_functions")) {
    cfg.test_functions = split_list(raw.get("experiment.test_functions"));
    for (const auto& n : cfg.test_functions) {
      try {
        const int fdim = test_function_dim(n);
        if (!cfg.problem.empty() && fdim != problem.dim)
          throw ConfigError("test function '" + n + "' expects dim " + std::to_string(fdim) +
                            " but problem '" + cfg.problem + "' has dim " +
                            std::to_string(problem.dim));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (cfg.kind == "converge") {
    cfg.test_functions = problem.dim == 1
                             ? std::vector<std::string>{"cos_x", "cos_exp_x"}
                             : std::vector<std::string>{"exp_sumsq", "cos_exp_sum"};
  }

  if (raw.has("experiment.threads")) {
    const auto v = parse_integer("threads", raw.get("experiment.threads"));
    if (v < 0 || v > 4096) throw ConfigError("key 'threads': out of range");
    cfg.threads = static_cast<int>(v);
  }
  if (raw.has("experiment.seed")) cfg.seed = parse_seed("seed", raw.get("experiment.seed"));

  if (raw.has("taming.alpha")) {
    cfg.taming.alpha = parse_number("alpha", raw.get("taming.alpha"));
    if (!(cfg.taming.alpha > 0.0) || !(cfg.taming.alpha <= 0.5))
      throw ConfigError("alpha outside (0, 1/2]");
  }
  if (raw.has("taming.gamma")) {
    cfg.taming.gamma = parse_number("gamma", raw.get("taming.gamma"));
    if (!(cfg.taming.gamma > 0.0)) throw ConfigError("key 'gamma': must be positive");
  }

  if (raw.has("montecarlo.k_ref")) {
    const auto v = parse_integer("k_ref", raw.get("montecarlo.k_ref"));
    if (v < 1 || v > 30) throw ConfigError("key 'k_ref': out of range [1, 30]");
    cfg.mc.k_ref = static_cast<int>(v);
  }
  if (raw.has("montecarlo.levels")) {
    cfg.mc.levels.clear();
    for (const auto& item : split_list(raw.get("montecarlo.levels"))) {
      const auto v = parse_integer("levels", item);
      if (v < 0 || v > 30) throw ConfigError("key 'levels': entry out of range [0, 30]");
      cfg.mc.levels.push_back(static_cast<int>(v));
    }
    if (cfg.mc.levels.empty()) throw ConfigError("key 'levels': empty list");
  }
  for (int l : cfg.mc.levels)
    if (cfg.kind == "converge" && l >= cfg.mc.k_ref)
      throw ConfigError("key 'levels': every level must be coarser than k_ref");
  if (raw.has("montecarlo.paths")) {
    const auto v = parse_integer("paths", raw.get("montecarlo.paths"));
    if (v < 1 || v > 100000000) throw ConfigError("key 'paths': out of range");
    cfg.mc.paths = static_cast<int>(v);
  }
  if (raw.has("montecarlo.horizon")) {
    cfg.mc.horizon = parse_number("horizon", raw.get("montecarlo.horizon"));
    if (!(cfg.mc.horizon > 0.0)) throw ConfigError("key 'horizon': must be positive");
  }

  if (raw.has("sampler.beta")) {
    cfg.sampler.beta = parse_number("beta", raw.get("sampler.beta"));
    if (!(cfg.sampler.beta > 0.0)) throw ConfigError("key 'beta': must be positive");
  }
  if (raw.has("sampler.h_list")) {
    cfg.sampler.h_list.clear();
    for (const auto& item : split_list(raw.get("sampler.h_list"))) {
      const double v = parse_number("h_list", item);
      if (!(v > 0.0)) throw ConfigError("key 'h_list': step sizes must be positive");
      cfg.sampler.h_list.push_back(v);
    }
    if (cfg.kind == "sample" && cfg.sampler.h_list.empty())
      throw ConfigError("key 'h_list': empty list");
  }
  if (raw.has("sampler.n_steps")) {
    cfg.sampler.n_steps = parse_integer("n_steps", raw.get("sampler.n_steps"));
    if (cfg.sampler.n_steps < 0) throw ConfigError("key 'n_steps': must be non-negative");
  }
  if (raw.has("sampler.burn_in")) {
    cfg.sampler.burn_in = parse_integer("burn_in", raw.get("sampler.burn_in"));
    if (cfg.sampler.burn_in < 0) throw ConfigError("key 'burn_in': must be non-negative");
  }
  if (cfg.sampler.burn_in > cfg.sampler.n_steps)
    throw ConfigError("key 'burn_in': must not exceed n_steps");
  if (raw.has("sampler.thin")) {
    cfg.sampler.thin = parse_integer("thin", raw.get("sampler.thin"));
    if (cfg.sampler.thin < 1) throw ConfigError("key 'thin': must be at least 1");
  }
  if (raw.has("sampler.bins")) {
    const auto v = parse_integer("bins", raw.get("sampler.bins"));
    if (v < 2 || v > 100000) throw ConfigError("key 'bins': out of range");
    cfg.sampler.bins = static_cast<int>(v);
  }
  if (raw.has("sampler.range_lo"))
    cfg.sampler.range_lo = parse_number("range_lo", raw.get("sampler.range_lo"));
  if (raw.has("sampler.range_hi"))
    cfg.sampler.range_hi = parse_number("range_hi", raw.get("sampler.range_hi"));
  if (!(cfg.sampler.range_hi > cfg.sampler.range_lo))
    throw ConfigError("key 'range_hi': must exceed range_lo");
  if (raw.has("sampler.lyapunov_delta")) {
    cfg.sampler.lyapunov_delta =
        parse_number("lyapunov_delta", raw.get("sampler.lyapunov_delta"));
    if (!(cfg.sampler.lyapunov_delta > 0.0))
      throw ConfigError("key 'lyapunov_delta': must be positive");
  }
  if (raw.has("sampler.moment_k")) {
    const auto v = parse_integer("moment_k", raw.get("sampler.moment_k"));
    if (v < 1 || v > 16) throw ConfigError("key 'moment_k': out of range [1, 16]");
    cfg.sampler.moment_k = static_cast<int>(v);
  }

  if (raw.has("output.directory")) {
    cfg.out_dir = raw.get("output.directory");
    if (cfg.out_dir.empty()) throw ConfigError("key 'directory': empty path");
  }

  return cfg;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

template <typename T, typename F>
std::string join_mapped(const std::vector<T>& items, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += render(items[i]);
  }
  return out;
}

}  // namespace

std::string serialize(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "kind = " << cfg.kind << '\n';
  out << "problem = " << cfg.problem << '\n';
  out << "schemes = " << join(cfg.schemes) << '\n';
  out << "test_functions = " << join(cfg.test_functions) << '\n';
  out << "threads = " << cfg.threads << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << '\n';
  out << "[taming]\n";
  out << "alpha = " << format_double(cfg.taming.alpha) << '\n';
  out << "gamma = " << format_double(cfg.taming.gamma) << '\n';
  out << '\n';
  out << "[montecarlo]\n";
  out << "k_ref = " << cfg.mc.k_ref << '\n';
  out << "levels = "
      << join_mapped(cfg.mc.levels, [](int l) { return std::to_string(l); }) << '\n';
  out << "paths = " << cfg.mc.paths << '\n';
  out << "horizon = " << format_double(cfg.mc.horizon) << '\n';
  out << '\n';
  out << "[sampler]\n";
  out << "beta = " << format_double(cfg.sampler.beta) << '\n';
  out << "h_list = " << join_mapped(cfg.sampler.h_list, format_double) << '\n';
  out << "n_steps = " << cfg.sampler.n_steps << '\n';
  out << "burn_in = " << cfg.sampler.burn_in << '\n';
  out << "thin = " << cfg.sampler.thin << '\n';
  out << "bins = " << cfg.sampler.bins << '\n';
  out << "range_lo = " << format_double(cfg.sampler.range_lo) << '\n';
  out << "range_hi = " << format_double(cfg.sampler.range_hi) << '\n';
  out << "lyapunov_delta = " << format_double(cfg.sampler.lyapunov_delta) << '\n';
  out << "moment_k = " << cfg.sampler.moment_k << '\n';
  out << '\n';
  out << "[output]\n";
  out << "directory = " << cfg.out_dir << '\n';
  return out.str();
}

}  // namespace tamed_sde
