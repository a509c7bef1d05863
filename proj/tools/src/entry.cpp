#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "internal.hpp"

namespace slt::cli {
namespace {

enum class Kind { Number, Count, String, CountList, StringList, JsonValue };

struct Flag {
  const char* name;
  const char* key;
  Kind kind;
  const char* help;
  std::vector<std::string_view> commands;
};

const std::vector<Flag>& flags() {
  static const std::vector<Flag> table = {
      {"--seed", "seed", Kind::Count, "master seed (falls back to SLT_LAB_SEED)", {"risk", "erm", "srm", "pac", "uc"}},
      {"--seeds", "seeds", Kind::CountList, "master seeds", {"tradeoff"}},
      {"--class", "class", Kind::JsonValue, "family name or class JSON", {"vcdim", "erm", "pac", "uc"}},
      {"--grid", "grid", Kind::JsonValue, "discretization JSON", {"vcdim", "erm", "pac", "uc"}},
      {"--pool", "pool", Kind::JsonValue, "candidate points JSON", {"vcdim"}},
      {"--k", "k", Kind::Count, "number of points (sine class)", {"vcdim"}},
      {"--subset-budget", "subset_budget", Kind::Count, "subset search budget", {"vcdim"}},
      {"--distribution", "distribution", Kind::JsonValue, "distribution JSON",
       {"risk", "erm", "srm", "pac", "uc", "tradeoff"}},
      {"--hypothesis", "hypothesis", Kind::JsonValue, "hypothesis JSON", {"risk"}},
      {"--sequence", "sequence", Kind::JsonValue, "class sequence JSON", {"srm", "tradeoff"}},
      {"--data", "data", Kind::String, "labeled CSV file", {"erm", "srm"}},
      {"--dimension", "dimension", Kind::Count, "feature columns in --data (0 infers)", {"erm", "srm"}},
      {"--mc-draws", "mc_draws", Kind::Count, "Monte Carlo draws when no analytic risk exists",
       {"risk", "erm", "srm", "pac", "uc", "tradeoff"}},
      {"--m", "m", Kind::Count, "sample size", {"erm", "srm", "pac", "bounds"}},
      {"--m", "m_values", Kind::CountList, "sample sizes", {"uc", "tradeoff", "nfl"}},
      {"--eps", "eps", Kind::Number, "accuracy", {"pac", "uc", "bounds"}},
      {"--delta", "delta", Kind::Number, "confidence parameter", {"srm", "pac", "uc", "tradeoff", "bounds"}},
      {"--trials", "trials", Kind::Count, "trials per sample size", {"pac", "uc", "tradeoff"}},
      {"--vc-dimension", "vc_dimension", Kind::Count, "VC dimension for bound echoes", {"pac", "uc"}},
      {"--slack", "slack", Kind::Number, "verdict slack", {"pac", "uc"}},
      {"--confidence", "confidence", Kind::Number, "verdict confidence", {"pac", "uc"}},
      {"--C", "C", Kind::Number, "penalty / accuracy constant", {"srm", "tradeoff", "bounds"}},
      {"--C1", "C1", Kind::Number, "lower bracket constant", {"bounds"}},
      {"--C2", "C2", Kind::Number, "upper bracket constant", {"bounds"}},
      {"--d", "d", Kind::Count, "VC dimension", {"bounds"}},
      {"--learner", "learners", Kind::StringList, "memorizer and/or erm_all_functions", {"nfl"}},
  };
  return table;
}

Json convert(const Flag& f, const std::vector<std::string>& raw) {
  const std::string path = fmt::format("{} ({})", detail::key_path(f.key), f.name);
  auto as_number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ConfigError(path, fmt::format("'{}' is not a number", s));
    return v;
  };
  auto as_count = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError(path, fmt::format("'{}' is not a non-negative integer", s));
    }
    try {
      return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::out_of_range&) {
      throw ConfigError(path, fmt::format("'{}' is out of range", s));
    }
  };
  switch (f.kind) {
    case Kind::Number: return as_number(raw.front());
    case Kind::Count: return as_count(raw.front());
    case Kind::String: return raw.front();
    case Kind::CountList: {
      Json a = Json::array();
      for (const auto& s : raw) a.push_back(as_count(s));
      return a;
    }
    case Kind::StringList: return raw;
    case Kind::JsonValue: {
      auto j = Json::parse(raw.front(), nullptr, false);
      return j.is_discarded() ? Json(raw.front()) : j;
    }
  }
  return nullptr;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistical learning theory lab: VC dimensions, ERM/SRM, PAC and uniform-convergence "
               "experiments, no-free-lunch enumeration and sample-complexity bounds.",
               std::string(kToolName)};
  app.footer("\n" + presets_help() +
             "\nExit codes: 0 ok/pass, 1 usage or config error, 2 verdict fail, 3 verdict indeterminate.\n"
             "Config precedence: preset < --config file < flags; the seed falls back to " +
             std::string(kSeedEnv) + ".");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  struct Bound {
    const Flag* flag;
    CLI::Option* option;
    std::vector<std::string> values;
  };
  struct Command {
    CLI::App* app;
    std::string preset;
    std::string config;
    std::string out_dir = "slt_out";
    std::size_t workers = 1;
    bool records = false;
    std::vector<std::unique_ptr<Bound>> bound;
  };
  const std::map<std::string_view, std::string> about{
      {"vcdim", "brute-force VC dimension with a shattering certificate"},
      {"risk", "true risk of one hypothesis"},
      {"erm", "empirical risk minimization on a drawn or ingested sample"},
      {"srm", "structural risk minimization over a weighted class sequence"},
      {"pac", "Monte Carlo check that ERM is eps-accurate with probability 1 - delta"},
      {"uc", "sup deviation and eps-representativeness across sample sizes"},
      {"tradeoff", "approximation / estimation decomposition for ERM and SRM"},
      {"nfl", "exact no-free-lunch enumeration"},
      {"bounds", "sample-complexity and accuracy-bound arithmetic"}};
  std::map<std::string, Command> commands;
  for (auto name : kCommands) {
    auto& c = commands[std::string(name)];
    c.app = app.add_subcommand(std::string(name), about.at(name));
    c.app->add_option("--preset", c.preset, "named preset (see the list below)");
    c.app->add_option("--config", c.config, "JSON config file");
    c.app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
    c.app->add_option("--workers", c.workers, "worker threads; results do not depend on it")
        ->capture_default_str();
    c.app->add_flag("--records", c.records, "also emit per-trial records");
    for (const auto& f : flags()) {
      if (std::find(f.commands.begin(), f.commands.end(), name) == f.commands.end()) continue;
      auto b = std::make_unique<Bound>();
      b->flag = &f;
      const bool list = f.kind == Kind::CountList || f.kind == Kind::StringList;
      b->option = c.app->add_option(f.name, b->values, f.help);
      if (!list) b->option->expected(1);
      c.bound.push_back(std::move(b));
    }
    c.app->footer("\n" + presets_help());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  for (auto& [name, c] : commands) {
    if (!c.app->parsed()) continue;
    try {
      Invocation inv;
      inv.command = name;
      inv.out_dir = c.out_dir;
      inv.workers = c.workers;
      inv.records = c.records;
      if (!c.config.empty()) inv.config_file = c.config;
      if (!c.preset.empty()) inv.preset = c.preset;
      for (const auto& b : c.bound) {
        if (b->option->count() == 0) continue;
        inv.overrides[b->flag->key] = convert(*b->flag, b->values);
      }
      // `vcdim --class intervals --preset small` names the preset intervals-small.
      if (name == "vcdim" && inv.preset && inv.overrides.contains("class") && inv.overrides["class"].is_string()) {
        const std::string composed = inv.overrides["class"].get<std::string>() + "-" + *inv.preset;
        if (find_preset(name, composed)) {
          inv.preset = composed;
          inv.overrides.erase("class");
        }
      }
      const auto r = run(inv);
      out << r.summary << "\n";
      out << fmt::format("wrote {} files and manifest.json to {}\n", r.files.size(), inv.out_dir.string());
      return r.exit_code;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace slt::cli
