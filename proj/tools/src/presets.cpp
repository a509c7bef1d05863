#include <algorithm>

#include <fmt/format.h>

#include "slt/cli/cli.hpp"

namespace slt::cli {
namespace {

// Noisy threshold problem shared by the learnability presets.
constexpr const char* kNoisyThreshold = R"({
  "marginal": {"kind": "uniform_box", "lo": [0], "hi": [1]},
  "labeler": {"kind": "threshold", "theta": 0.3, "direction": "up"},
  "noise": 0.1})";

Json nested_thresholds(std::size_t classes) {
  Json seq = Json::array();
  for (std::size_t n = 1; n <= classes; ++n) {
    seq.push_back({{"class", {{"family", "thresholds"}, {"directions", "up"}}},
                   {"grid", {{"grid", {{"linspace", {0, 1, (1U << n) + 1}}}}}},
                   {"vc_dimension", 1}});
  }
  return seq;
}

Json nested_distribution() {
  return Json::parse(R"({
    "marginal": {"kind": "uniform_box", "lo": [0], "hi": [1]},
    "labeler": {"kind": "threshold", "theta": 0.25, "direction": "up"},
    "noise": 0.1})");
}

std::vector<Preset> build() {
  std::vector<Preset> p;
  const Json thresholds = {{"family", "thresholds"}, {"directions", "up"}};
  const Json fine_grid = {{"grid", {{"linspace", {0, 1, 101}}}}};
  const Json unit_grid = {{"grid", {{"linspace", {0, 1, 11}}}}};
  const Json line_pool = {0.05, 0.35, 0.65, 0.95};

  p.push_back({"vcdim", "thresholds-small-v1", "upward thresholds on an 11-point grid, 4-point pool",
               {{"class", thresholds}, {"grid", unit_grid}, {"pool", line_pool}}});
  p.push_back({"vcdim", "thresholds-both-small-v1",
               "thresholds in both directions on an 11-point grid, 4-point pool",
               {{"class", {{"family", "thresholds"}, {"directions", "both"}}},
                {"grid", unit_grid},
                {"pool", line_pool}}});
  p.push_back({"vcdim", "intervals-small-v1", "intervals with endpoints on an 11-point grid, 5-point pool",
               {{"class", {{"family", "intervals"}}},
                {"grid", unit_grid},
                {"pool", {0.05, 0.25, 0.45, 0.65, 0.85}}}});
  p.push_back({"vcdim", "rectangles-small-v1", "2D axis-aligned rectangles, 11-point grid per axis",
               {{"class", {{"family", "rectangles"}, {"dimension", 2}}},
                {"grid", unit_grid},
                {"pool", Json::parse("[[0.5,0.15],[0.15,0.5],[0.85,0.5],[0.5,0.85],"
                                     "[0.35,0.35],[0.65,0.65],[0.25,0.75]]")}}});
  p.push_back({"vcdim", "halfspaces-small-v1", "2D halfspaces, 5 weights per axis, 61 offsets",
               {{"class", {{"family", "halfspaces"}, {"dimension", 2}}},
                {"grid", {{"grid", {-1, -0.5, 0, 0.5, 1}}, {"offsets", {{"linspace", {-1.5, 1.5, 61}}}}}},
                {"pool", Json::parse("[[0.2,0.2],[0.8,0.2],[0.5,0.8],[0.5,0.4],[0.2,0.8]]")}}});
  p.push_back({"vcdim", "sine-k6-v1", "sine class on x_i = 10^-i, all 2^6 labelings",
               {{"class", {{"family", "sine"}}}, {"k", 6}}});

  p.push_back({"risk", "thresholds-v1", "true risk of 1[x >= 0.5] under the noisy threshold problem",
               {{"distribution", Json::parse(kNoisyThreshold)},
                {"hypothesis", {{"kind", "threshold"}, {"theta", 0.5}, {"direction", "up"}}}}});
  p.push_back({"erm", "thresholds-v1", "ERM over 101 upward thresholds on 100 noisy draws",
               {{"class", thresholds},
                {"grid", fine_grid},
                {"distribution", Json::parse(kNoisyThreshold)},
                {"m", 100}}});
  p.push_back({"srm", "nested-thresholds-v1", "SRM over 6 nested dyadic threshold grids, m = 30",
               {{"sequence", nested_thresholds(6)}, {"distribution", nested_distribution()}, {"m", 30}}});
  p.push_back({"pac", "thresholds-v1", "d = 1, eta = 0.1, eps = delta = 0.1, m = 500, 2000 trials",
               {{"class", thresholds},
                {"grid", fine_grid},
                {"distribution", Json::parse(kNoisyThreshold)},
                {"m", 500},
                {"eps", 0.1},
                {"delta", 0.1},
                {"trials", 2000},
                {"vc_dimension", 1}}});
  p.push_back({"uc", "thresholds-v1", "sup deviation at m = 400 and 1600, 500 trials each",
               {{"class", thresholds},
                {"grid", fine_grid},
                {"distribution", Json::parse(kNoisyThreshold)},
                {"m_values", {400, 1600}},
                {"eps", 0.1},
                {"delta", 0.1},
                {"trials", 500},
                {"vc_dimension", 1}}});
  Json seeds = Json::array();
  for (int s = 0; s < 20; ++s) seeds.push_back(s);
  p.push_back({"tradeoff", "nested-thresholds-v1",
               "6 nested dyadic threshold grids, eta = 0.1, m = 30, 20 seeds x 50 trials",
               {{"sequence", nested_thresholds(6)},
                {"distribution", nested_distribution()},
                {"m_values", {30}},
                {"trials", 50},
                {"seeds", seeds}}});
  p.push_back({"nfl", "exact-v1", "m = 2, 3 with the memorizer and ERM over all functions",
               {{"m_values", {2, 3}}, {"learners", {"memorizer", "erm_all_functions"}}}});
  p.push_back({"bounds", "d1-v1", "d = 1, eps = 0.1, delta = 0.05",
               {{"d", 1}, {"eps", 0.1}, {"delta", 0.05}}});
  return p;
}

std::string_view stem(std::string_view name) {
  const auto pos = name.rfind("-v");
  if (pos == std::string_view::npos) return name;
  const auto digits = name.substr(pos + 2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return name;
  }
  return name.substr(0, pos);
}

int version(std::string_view name) { return std::stoi(std::string(name.substr(stem(name).size() + 2))); }

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset* find_preset(std::string_view command, std::string_view name) {
  const Preset* best = nullptr;
  for (const auto& p : presets()) {
    if (p.command != command) continue;
    if (p.name == name) return &p;
    if (stem(p.name) == name && (!best || version(p.name) > version(best->name))) best = &p;
  }
  return best;
}

std::string presets_help() {
  std::string out = "Presets (command/name: description):\n";
  for (const auto& p : presets()) out += fmt::format("  {}/{}: {}\n", p.command, p.name, p.description);
  return out;
}

}  // namespace slt::cli
