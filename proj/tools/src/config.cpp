#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "internal.hpp"

namespace slt::cli {

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : Error(fmt::format("{}: {}", path, message)), path_(path) {}

namespace detail {
namespace {

const std::map<std::string, Json, std::less<>>& all_defaults() {
  static const std::map<std::string, Json, std::less<>> table = {
      {"vcdim", Json::parse(R"({"class": null, "grid": null, "pool": null,
                "subset_budget": 10000000, "k": null, "points": null, "max_k": 8,
                "cell_budget": 100000000})")},
      {"risk", Json::parse(R"({"distribution": null, "hypothesis": null, "mc_draws": null,
                "seed": 0})")},
      {"erm", Json::parse(R"({"class": null, "grid": null, "data": null, "dimension": 0,
                "distribution": null, "m": null, "mc_draws": null, "seed": 0})")},
      {"srm", Json::parse(R"({"sequence": null, "data": null, "dimension": 0,
                "distribution": null, "m": null, "delta": 0.1, "C": 2.0, "mc_draws": null,
                "seed": 0})")},
      {"pac", Json::parse(R"({"class": null, "grid": null, "distribution": null, "m": null,
                "eps": 0.1, "delta": 0.1, "trials": 1000, "vc_dimension": null,
                "mc_draws": null, "slack": 0.02, "confidence": 0.95, "seed": 0})")},
      {"uc", Json::parse(R"({"class": null, "grid": null, "distribution": null,
                "m_values": null, "eps": 0.1, "delta": 0.1, "trials": 500,
                "vc_dimension": null, "mc_draws": null, "slack": 0.02, "confidence": 0.95,
                "seed": 0})")},
      {"tradeoff", Json::parse(R"({"sequence": null, "distribution": null, "m_values": null,
                "trials": 100, "delta": 0.1, "C": 2.0, "seeds": [0], "mc_draws": null})")},
      {"nfl", Json::parse(R"({"m_values": [2, 3],
                "learners": ["memorizer", "erm_all_functions"]})")},
      {"bounds", Json::parse(R"({"d": null, "eps": null, "delta": null, "m": null,
                "C": 2.0, "C1": 0.0625, "C2": 64.0})")},
  };
  return table;
}

}  // namespace

Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("--config", fmt::format("cannot open '{}'", p.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config", fmt::format("'{}' is not valid JSON: {}", p.string(), e.what()));
  }
}

void check_keys(const Json& layer, const Json& defaults, std::string_view command,
                std::string_view source) {
  if (!layer.is_object()) throw ConfigError("$", fmt::format("{} must be a JSON object", source));
  for (const auto& [k, v] : layer.items()) {
    if (!defaults.contains(k)) {
      throw ConfigError(key_path(k), fmt::format("unknown key for command '{}' (from {})", command, source));
    }
  }
}

namespace {

std::string fmt_path(const std::string& base, std::size_t i) { return fmt::format("{}[{}]", base, i); }

}  // namespace

std::string key_path(std::string_view key) { return fmt::format("$.{}", key); }

const Json& command_defaults(std::string_view command) {
  const auto& t = all_defaults();
  auto it = t.find(command);
  if (it == t.end()) throw ConfigError("command", fmt::format("unknown command '{}'", command));
  return it->second;
}

bool uses_seed(std::string_view command) { return command_defaults(command).contains("seed"); }

bool is_set(const Json& cfg, std::string_view key) {
  auto it = cfg.find(key);
  return it != cfg.end() && !it->is_null();
}

const Json& required(const Json& cfg, std::string_view key) {
  if (!is_set(cfg, key)) throw ConfigError(key_path(key), "required");
  return cfg.at(std::string(key));
}

double number(const Json& cfg, std::string_view key) {
  const auto& v = required(cfg, key);
  if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key_path(key), "must be finite");
  return x;
}

double unit_open(const Json& cfg, std::string_view key) {
  const double x = number(cfg, key);
  if (!(x > 0.0 && x < 1.0)) throw ConfigError(key_path(key), fmt::format("must lie in (0, 1), got {}", x));
  return x;
}

double positive(const Json& cfg, std::string_view key) {
  const double x = number(cfg, key);
  if (!(x > 0.0)) throw ConfigError(key_path(key), fmt::format("must be positive, got {}", x));
  return x;
}

namespace {
std::size_t count_value(const Json& v, const std::string& path, std::size_t min) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  const auto n = v.get<std::uint64_t>();
  if (n < min) throw ConfigError(path, fmt::format("must be >= {}, got {}", min, n));
  return static_cast<std::size_t>(n);
}
}  // namespace

std::size_t count(const Json& cfg, std::string_view key, std::size_t min) {
  return count_value(required(cfg, key), key_path(key), min);
}

std::optional<std::size_t> optional_count(const Json& cfg, std::string_view key, std::size_t min) {
  if (!is_set(cfg, key)) return std::nullopt;
  return count(cfg, key, min);
}

std::uint64_t seed(const Json& cfg, std::string_view key) {
  const auto& v = required(cfg, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(key_path(key), "expected a non-negative integer seed");
  }
  return v.get<std::uint64_t>();
}

std::vector<std::size_t> count_list(const Json& cfg, std::string_view key, std::size_t min) {
  const auto& v = required(cfg, key);
  if (!v.is_array() || v.empty()) throw ConfigError(key_path(key), "expected a non-empty array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(count_value(v[i], fmt_path(key_path(key), i), min));
  return out;
}

std::vector<std::uint64_t> seed_list(const Json& cfg, std::string_view key) {
  const auto& v = required(cfg, key);
  if (!v.is_array() || v.empty()) throw ConfigError(key_path(key), "expected a non-empty array");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(count_value(v[i], fmt_path(key_path(key), i), 0));
  return out;
}

std::vector<std::string> string_list(const Json& cfg, std::string_view key) {
  const auto& v = required(cfg, key);
  if (!v.is_array() || v.empty()) throw ConfigError(key_path(key), "expected a non-empty array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ConfigError(fmt_path(key_path(key), i), "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

HypothesisClass class_at(const Json& j, const std::string& path) {
  // A bare family name stands for the family with default parameters.
  if (j.is_string()) return class_from_json(Json{{"family", j}}, path);
  return class_from_json(j, path);
}

Discretization grid_at(const Json& j, const std::string& path) { return discretization_from_json(j, path); }

DataDistribution distribution_at(const Json& j, const std::string& path) {
  return distribution_from_json(j, path);
}

std::vector<Instance> points_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of points");
  std::vector<Instance> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    out.push_back(p.is_number() ? Instance{p.get<double>()} : instance_from_json(p, fmt_path(path, i)));
  }
  return out;
}

WeightedClassSequence sequence_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of classes");
  std::vector<HypothesisClass> classes;
  std::vector<Discretization> grids;
  std::vector<std::optional<std::size_t>> dims;
  std::vector<std::optional<double>> weights;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = fmt_path(path, i);
    const auto& e = j[i];
    if (!e.is_object()) throw ConfigError(p, "expected an object");
    require_known_keys(e, {"class", "grid", "weight", "vc_dimension"}, p);
    if (!e.contains("class")) throw ConfigError(p + ".class", "required");
    if (!e.contains("grid")) throw ConfigError(p + ".grid", "required");
    classes.push_back(class_at(e["class"], p + ".class"));
    grids.push_back(grid_at(e["grid"], p + ".grid"));
    dims.push_back(e.contains("vc_dimension") && !e["vc_dimension"].is_null()
                       ? std::optional<std::size_t>(count_value(e["vc_dimension"], p + ".vc_dimension", 0))
                       : std::nullopt);
    if (e.contains("weight") && !e["weight"].is_null()) {
      if (!e["weight"].is_number()) throw ConfigError(p + ".weight", "expected a number");
      weights.push_back(e["weight"].get<double>());
    } else {
      weights.push_back(std::nullopt);
    }
  }
  const auto given = std::count_if(weights.begin(), weights.end(), [](auto w) { return w.has_value(); });
  if (given == 0) return WeightedClassSequence::with_default_weights(classes, grids, dims);
  if (static_cast<std::size_t>(given) != weights.size()) {
    throw ConfigError(path, "either every class or no class sets a weight");
  }
  std::vector<WeightedClass> entries;
  for (std::size_t i = 0; i < classes.size(); ++i) entries.push_back({classes[i], grids[i], *weights[i], dims[i]});
  try {
    return WeightedClassSequence(std::move(entries));
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

ResolvedConfig resolve(const Invocation& inv) {
  const Json& defaults = detail::command_defaults(inv.command);
  ResolvedConfig r{inv.command, std::nullopt, defaults};

  auto apply = [&](const Json& layer, std::string_view source) {
    detail::check_keys(layer, defaults, inv.command, source);
    for (const auto& [k, v] : layer.items()) r.config[k] = v;
  };

  if (inv.preset) {
    const Preset* p = find_preset(inv.command, *inv.preset);
    if (!p) {
      throw ConfigError("--preset", fmt::format("no preset '{}' for command '{}'; see --help",
                                                *inv.preset, inv.command));
    }
    r.preset = p->name;
    apply(p->config, fmt::format("preset {}", p->name));
  }
  Json file = Json::object();
  if (inv.config_file) {
    file = detail::read_json_file(*inv.config_file);
    apply(file, fmt::format("config file {}", inv.config_file->string()));
  }
  apply(inv.overrides, "command-line flags");

  if (detail::uses_seed(inv.command) && !inv.overrides.contains("seed") && !file.contains("seed")) {
    if (const char* env = std::getenv(std::string(kSeedEnv).c_str()); env && *env) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0' || errno != 0 || env[0] == '-') {
        throw ConfigError("$.seed", fmt::format("{}='{}' is not a non-negative integer", kSeedEnv, env));
      }
      r.config["seed"] = static_cast<std::uint64_t>(v);
    }
  }
  return r;
}

}  // namespace slt::cli
