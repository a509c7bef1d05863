#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slt/cli/cli.hpp"
#include "slt/distribution.hpp"
#include "slt/hypothesis_class.hpp"

namespace slt::cli::detail {

std::string key_path(std::string_view key);

/// Keys a command accepts, with defaults (null means "unset").
const Json& command_defaults(std::string_view command);
bool uses_seed(std::string_view command);

const Json& required(const Json& cfg, std::string_view key);
bool is_set(const Json& cfg, std::string_view key);

double number(const Json& cfg, std::string_view key);
/// Value in the open interval (0, 1).
double unit_open(const Json& cfg, std::string_view key);
double positive(const Json& cfg, std::string_view key);
std::size_t count(const Json& cfg, std::string_view key, std::size_t min = 0);
std::optional<std::size_t> optional_count(const Json& cfg, std::string_view key, std::size_t min = 0);
std::uint64_t seed(const Json& cfg, std::string_view key = "seed");
std::vector<std::size_t> count_list(const Json& cfg, std::string_view key, std::size_t min = 1);
std::vector<std::uint64_t> seed_list(const Json& cfg, std::string_view key);
std::vector<std::string> string_list(const Json& cfg, std::string_view key);

HypothesisClass class_at(const Json& j, const std::string& path);
Discretization grid_at(const Json& j, const std::string& path);
DataDistribution distribution_at(const Json& j, const std::string& path);
std::vector<Instance> points_at(const Json& j, const std::string& path);
WeightedClassSequence sequence_at(const Json& j, const std::string& path);

std::string dump(const Json& j);
Json read_json_file(const std::filesystem::path& p);
void check_keys(const Json& layer, const Json& defaults, std::string_view command,
                std::string_view source);

}  // namespace slt::cli::detail
