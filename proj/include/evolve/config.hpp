#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "evolve/core.hpp"

namespace evolve {

// Settings shared by the config file and the command line. Unset values fall
// back to scenario defaults.
struct RunSettings {
  std::optional<double> h;
  std::optional<double> t;
  std::optional<double> tol;
  std::optional<int> order;
  std::optional<std::string> field;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
};

struct ScenarioOverrides {
  std::optional<double> h;
  std::optional<double> tol;
  std::optional<int> order;
};

struct RunConfig {
  RunSettings settings;
  std::map<std::string, ScenarioOverrides> scenarios;
};

constexpr const char* kConfigEnv = "EVOLVE_TRANSPORT_CONFIG";

namespace detail {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(j, {"h", "t", "tol", "order", "field", "out", "format", "seed",
                             "samples", "scenarios"},
                         "config");
  RunConfig cfg;
  RunSettings& s = cfg.settings;
  detail::read_key(j, "h", s.h);
  detail::read_key(j, "t", s.t);
  detail::read_key(j, "tol", s.tol);
  detail::read_key(j, "order", s.order);
  detail::read_key(j, "field", s.field);
  detail::read_key(j, "out", s.out);
  detail::read_key(j, "format", s.format);
  detail::read_key(j, "seed", s.seed);
  detail::read_key(j, "samples", s.samples);
  if (j.contains("scenarios")) {
    const auto& sj = j.at("scenarios");
    if (!sj.is_object()) throw ConfigError("'scenarios' must be an object");
    for (auto it = sj.begin(); it != sj.end(); ++it) {
      if (!it.value().is_object()) {
        throw ConfigError("override for '" + it.key() + "' must be an object");
      }
      detail::reject_unknown(it.value(), {"h", "tol", "order"}, "scenarios." + it.key());
      ScenarioOverrides o;
      detail::read_key(it.value(), "h", o.h);
      detail::read_key(it.value(), "tol", o.tol);
      detail::read_key(it.value(), "order", o.order);
      cfg.scenarios[it.key()] = o;
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

// Explicit path first, then the environment variable; none means defaults.
inline std::optional<std::string> resolve_config_path(const std::string& cli_path) {
  if (!cli_path.empty()) return cli_path;
  if (const char* env = std::getenv(kConfigEnv); env && *env) return std::string(env);
  return std::nullopt;
}

// Values set on the command line win over the config file.
inline RunSettings merge(const RunSettings& file, const RunSettings& cli) {
  RunSettings out = file;
  if (cli.h) out.h = cli.h;
  if (cli.t) out.t = cli.t;
  if (cli.tol) out.tol = cli.tol;
  if (cli.order) out.order = cli.order;
  if (cli.field) out.field = cli.field;
  if (cli.out) out.out = cli.out;
  if (cli.format) out.format = cli.format;
  if (cli.seed) out.seed = cli.seed;
  if (cli.samples) out.samples = cli.samples;
  return out;
}

}  // namespace evolve
