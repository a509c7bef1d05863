#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slt/errors.hpp"
#include "slt/sample.hpp"
#include "slt/serialize.hpp"

namespace slt::cli {

inline constexpr std::string_view kToolName = "slt-lab";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSeedEnv = "SLT_LAB_SEED";

enum ExitCode : int { kOk = 0, kUsage = 1, kFail = 2, kIndeterminate = 3 };

/// Bad configuration. The message starts with the JSON path of the culprit.
class ConfigError : public Error {
public:
  ConfigError(const std::string& path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

inline constexpr std::string_view kCommands[] = {"vcdim", "risk",     "erm",   "srm", "pac",
                                                 "uc",    "tradeoff", "nfl",   "bounds"};

struct Preset {
  std::string command;
  /// Versioned name, e.g. "thresholds-v1".
  std::string name;
  std::string description;
  Json config;
};

const std::vector<Preset>& presets();
/// Exact versioned name, or an unversioned stem resolving to its latest version.
const Preset* find_preset(std::string_view command, std::string_view name);
std::string presets_help();

/// One command invocation before resolution. `overrides` holds flag values,
/// keyed like the config file.
struct Invocation {
  std::string command;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config_file;
  Json overrides = Json::object();
  std::filesystem::path out_dir = "slt_out";
  std::size_t workers = 1;
  bool records = false;
};

struct ResolvedConfig {
  std::string command;
  std::optional<std::string> preset;
  /// Defaults < preset < config file < flags, with the seed falling back to
  /// the environment when neither file nor flags set it.
  Json config;
};

ResolvedConfig resolve(const Invocation& inv);

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  int exit_code = kOk;
  std::string summary;
  std::vector<OutputFile> files;
  Json manifest;
};

/// Validates, computes, writes every output plus manifest.json into out_dir.
RunResult run(const Invocation& inv);

/// Full command line entry point; never throws.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

LabeledSample ingest_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace slt::cli
