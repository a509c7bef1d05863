#include "slt/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

[[noreturn]] void fail(const std::string& path, std::string_view msg) {
  throw ParseError(fmt::format("{}: {}", path, msg));
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, fmt::format("missing key '{}'", key));
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], fmt::format("{}[{}]", path, i)));
  return v;
}

Label label(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected label 0 or 1");
  const auto v = j.get<long long>();
  if (v != 0 && v != 1) fail(path, fmt::format("label must be 0 or 1, got {}", v));
  return to_label(v == 1);
}

Json range_json(const ParamRange& r) {
  auto bound = [](double v) -> Json { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json::array({bound(r.lo), bound(r.hi)});
}

ParamRange range_from(const Json& j, const char* key, const std::string& path) {
  ParamRange r;
  auto it = j.find(key);
  if (it == j.end()) return r;
  const std::string p = fmt::format("{}.{}", path, key);
  if (!it->is_array() || it->size() != 2) fail(p, "expected [lo, hi]");
  if (!(*it)[0].is_null()) r.lo = number((*it)[0], p + "[0]");
  if (!(*it)[1].is_null()) r.hi = number((*it)[1], p + "[1]");
  if (r.lo > r.hi) fail(p, "range has lo > hi");
  return r;
}

std::vector<double> grid_from(const Json& j, const std::string& path) {
  if (j.is_object()) {
    require_known_keys(j, {"linspace"}, path);
    const auto& spec = field(j, "linspace", path);
    if (!spec.is_array() || spec.size() != 3) fail(path + ".linspace", "expected [lo, hi, n]");
    return Discretization::linspace(number(spec[0], path + ".linspace[0]"),
                                    number(spec[1], path + ".linspace[1]"),
                                    count(spec[2], path + ".linspace[2]"));
  }
  return numbers(j, path);
}

template <class T>
T wrap(const std::string& path, auto&& make) {
  try {
    return make();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void require_known_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                        const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(fmt::format("{}.{}", path, key), "unknown key");
    }
  }
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

Json to_json(const Instance& x) { return Json(std::vector<double>(x.coords().begin(), x.coords().end())); }

Json to_json(const Hypothesis& h) {
  struct V {
    Json operator()(const Threshold& t) const {
      return {{"kind", "threshold"}, {"theta", t.theta},
              {"direction", t.direction == Direction::Up ? "up" : "down"}};
    }
    Json operator()(const Interval& i) const { return {{"kind", "interval"}, {"a", i.a}, {"b", i.b}}; }
    Json operator()(const IntervalUnion& u) const {
      Json parts = Json::array();
      for (const auto& p : u.parts) parts.push_back({p.a, p.b});
      return {{"kind", "interval_union"}, {"parts", parts}};
    }
    Json operator()(const Rectangle& r) const { return {{"kind", "rectangle"}, {"lo", r.lo}, {"hi", r.hi}}; }
    Json operator()(const Halfspace& h) const { return {{"kind", "halfspace"}, {"w", h.w}, {"b", h.b}}; }
    Json operator()(const Sine& s) const { return {{"kind", "sine"}, {"alpha", s.alpha}}; }
    Json operator()(const LookupTable& t) const {
      Json entries = Json::array();
      for (const auto& e : t.entries) entries.push_back({{"x", to_json(e.x)}, {"y", to_int(e.y)}});
      return {{"kind", "lookup_table"}, {"dimension", t.dimension},
              {"entries", entries}, {"default", to_int(t.fallback)}};
    }
  };
  return std::visit(V{}, h.kind());
}

Json to_json(const LabeledSample& S) {
  Json pairs = Json::array();
  for (const auto& [x, y] : S) pairs.push_back({{"x", to_json(x)}, {"y", to_int(y)}});
  return {{"m", S.size()}, {"dimension", S.dimension()}, {"pairs", pairs}};
}

Json to_json(const HypothesisClass& H) {
  struct V {
    Json operator()(const ThresholdFamily& f) const {
      static constexpr const char* dirs[] = {"up", "down", "both"};
      return {{"family", "thresholds"}, {"directions", dirs[static_cast<int>(f.directions)]},
              {"range", range_json(f.range)}};
    }
    Json operator()(const IntervalFamily& f) const {
      return {{"family", "intervals"}, {"range", range_json(f.range)}};
    }
    Json operator()(const IntervalUnionFamily& f) const {
      return {{"family", "interval_unions"}, {"max_parts", f.max_parts}, {"range", range_json(f.range)}};
    }
    Json operator()(const RectangleFamily& f) const {
      return {{"family", "rectangles"}, {"dimension", f.dimension}, {"range", range_json(f.range)}};
    }
    Json operator()(const HalfspaceFamily& f) const {
      return {{"family", "halfspaces"}, {"dimension", f.dimension},
              {"weight_range", range_json(f.weight_range)},
              {"offset_range", range_json(f.offset_range)}};
    }
    Json operator()(const SineFamily& f) const {
      return {{"family", "sine"}, {"range", range_json(f.range)}};
    }
    Json operator()(const FiniteFamily& f) const {
      Json hs = Json::array();
      for (const auto& h : f.members) hs.push_back(to_json(h));
      return {{"family", "finite"}, {"hypotheses", hs}};
    }
  };
  return std::visit(V{}, H.family());
}

Json to_json(const Discretization& d) {
  Json j = {{"grid", d.grid}, {"budget", d.budget}};
  if (!d.offsets.empty()) j["offsets"] = d.offsets;
  return j;
}

Instance instance_from_json(const Json& j, const std::string& path) {
  auto coords = numbers(j, path);
  return wrap<Instance>(path, [&] { return Instance(std::move(coords)); });
}

Hypothesis hypothesis_from_json(const Json& j, const std::string& path) {
  const auto& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  auto p = [&](const char* key) { return fmt::format("{}.{}", path, key); };
  return wrap<Hypothesis>(path, [&]() -> Hypothesis {
    if (kind == "threshold") {
      require_known_keys(j, {"kind", "theta", "direction"}, path);
      Direction dir = Direction::Up;
      if (auto it = j.find("direction"); it != j.end()) {
        if (*it == "up") dir = Direction::Up;
        else if (*it == "down") dir = Direction::Down;
        else fail(p("direction"), "expected \"up\" or \"down\"");
      }
      return Threshold{number(field(j, "theta", path), p("theta")), dir};
    }
    if (kind == "interval") {
      require_known_keys(j, {"kind", "a", "b"}, path);
      return Interval{number(field(j, "a", path), p("a")), number(field(j, "b", path), p("b"))};
    }
    if (kind == "interval_union") {
      require_known_keys(j, {"kind", "parts"}, path);
      const auto& parts = field(j, "parts", path);
      if (!parts.is_array()) fail(p("parts"), "expected an array of [a, b]");
      IntervalUnion u;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto ab = numbers(parts[i], fmt::format("{}[{}]", p("parts"), i));
        if (ab.size() != 2) fail(fmt::format("{}[{}]", p("parts"), i), "expected [a, b]");
        u.parts.push_back({ab[0], ab[1]});
      }
      return u;
    }
    if (kind == "rectangle") {
      require_known_keys(j, {"kind", "lo", "hi"}, path);
      return Rectangle{numbers(field(j, "lo", path), p("lo")), numbers(field(j, "hi", path), p("hi"))};
    }
    if (kind == "halfspace") {
      require_known_keys(j, {"kind", "w", "b"}, path);
      return Halfspace{numbers(field(j, "w", path), p("w")), number(field(j, "b", path), p("b"))};
    }
    if (kind == "sine") {
      require_known_keys(j, {"kind", "alpha"}, path);
      return Sine{number(field(j, "alpha", path), p("alpha"))};
    }
    if (kind == "lookup_table") {
      require_known_keys(j, {"kind", "dimension", "entries", "default"}, path);
      LookupTable t;
      t.dimension = count(field(j, "dimension", path), p("dimension"));
      if (auto it = j.find("default"); it != j.end()) t.fallback = label(*it, p("default"));
      const auto& entries = field(j, "entries", path);
      if (!entries.is_array()) fail(p("entries"), "expected an array");
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto ep = fmt::format("{}[{}]", p("entries"), i);
        require_known_keys(entries[i], {"x", "y"}, ep);
        t.entries.push_back({instance_from_json(field(entries[i], "x", ep), ep + ".x"),
                             label(field(entries[i], "y", ep), ep + ".y")});
      }
      return t;
    }
    fail(path + ".kind", fmt::format("unknown hypothesis kind '{}'", kind));
  });
}

LabeledSample sample_from_json(const Json& j, const std::string& path) {
  require_known_keys(j, {"m", "dimension", "pairs"}, path);
  const auto& pairs = field(j, "pairs", path);
  if (!pairs.is_array()) fail(path + ".pairs", "expected an array");
  LabeledSample S;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto ep = fmt::format("{}.pairs[{}]", path, i);
    require_known_keys(pairs[i], {"x", "y"}, ep);
    auto x = instance_from_json(field(pairs[i], "x", ep), ep + ".x");
    auto y = label(field(pairs[i], "y", ep), ep + ".y");
    wrap<int>(ep, [&] {
      S.push_back({std::move(x), y});
      return 0;
    });
  }
  if (auto it = j.find("m"); it != j.end() && count(*it, path + ".m") != S.size()) {
    fail(path + ".m", fmt::format("declares m = {} but lists {} pairs", it->get<std::size_t>(), S.size()));
  }
  if (auto it = j.find("dimension"); it != j.end() && !S.empty() &&
                                     count(*it, path + ".dimension") != S.dimension()) {
    fail(path + ".dimension", "does not match the instances");
  }
  return S;
}

HypothesisClass class_from_json(const Json& j, const std::string& path) {
  const auto& fam_j = field(j, "family", path);
  if (!fam_j.is_string()) fail(path + ".family", "expected a string");
  const auto fam = fam_j.get<std::string>();
  auto p = [&](const char* key) { return fmt::format("{}.{}", path, key); };
  auto dim = [&](std::size_t fallback) {
    auto it = j.find("dimension");
    return it == j.end() ? fallback : count(*it, p("dimension"));
  };
  return wrap<HypothesisClass>(path, [&]() -> HypothesisClass {
    if (fam == "thresholds") {
      require_known_keys(j, {"family", "directions", "range"}, path);
      ThresholdFamily f;
      f.range = range_from(j, "range", path);
      if (auto it = j.find("directions"); it != j.end()) {
        if (*it == "up") f.directions = Directions::Up;
        else if (*it == "down") f.directions = Directions::Down;
        else if (*it == "both") f.directions = Directions::Both;
        else fail(p("directions"), "expected \"up\", \"down\" or \"both\"");
      }
      return HypothesisClass(f);
    }
    if (fam == "intervals") {
      require_known_keys(j, {"family", "range"}, path);
      return HypothesisClass(IntervalFamily{range_from(j, "range", path)});
    }
    if (fam == "interval_unions") {
      require_known_keys(j, {"family", "max_parts", "range"}, path);
      IntervalUnionFamily f;
      if (auto it = j.find("max_parts"); it != j.end()) f.max_parts = count(*it, p("max_parts"));
      f.range = range_from(j, "range", path);
      return HypothesisClass(f);
    }
    if (fam == "rectangles") {
      require_known_keys(j, {"family", "dimension", "range"}, path);
      return HypothesisClass(RectangleFamily{dim(2), range_from(j, "range", path)});
    }
    if (fam == "halfspaces") {
      require_known_keys(j, {"family", "dimension", "weight_range", "offset_range"}, path);
      return HypothesisClass(HalfspaceFamily{dim(2), range_from(j, "weight_range", path),
                                             range_from(j, "offset_range", path)});
    }
    if (fam == "sine") {
      require_known_keys(j, {"family", "range"}, path);
      return HypothesisClass(SineFamily{range_from(j, "range", path)});
    }
    if (fam == "finite") {
      require_known_keys(j, {"family", "hypotheses"}, path);
      const auto& hs = field(j, "hypotheses", path);
      if (!hs.is_array()) fail(p("hypotheses"), "expected an array");
      std::vector<Hypothesis> members;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        members.push_back(hypothesis_from_json(hs[i], fmt::format("{}[{}]", p("hypotheses"), i)));
      }
      return HypothesisClass::finite(std::move(members));
    }
    fail(p("family"), fmt::format("unknown class family '{}'", fam));
  });
}

Discretization discretization_from_json(const Json& j, const std::string& path) {
  require_known_keys(j, {"grid", "offsets", "budget"}, path);
  Discretization d;
  if (auto it = j.find("grid"); it != j.end()) d.grid = grid_from(*it, path + ".grid");
  if (auto it = j.find("offsets"); it != j.end()) d.offsets = grid_from(*it, path + ".offsets");
  if (auto it = j.find("budget"); it != j.end()) d.budget = count(*it, path + ".budget");
  return d;
}

LabeledSample read_sample_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("CSV: missing header row");
  const auto header = split_csv(line);
  if (header.size() < 2) throw ParseError("CSV header: need at least one feature column and a label column");
  const std::size_t dim = header.size() - 1;
  if (schema.dimension != 0 && schema.dimension != dim) {
    throw ParseError(fmt::format("CSV header: expected {} feature columns, found {}", schema.dimension, dim));
  }
  for (double ignored; const auto cell : header) {
    if (parse_double(cell, ignored)) {
      throw ParseError(fmt::format("CSV header: cell '{}' looks numeric; a header row is required", cell));
    }
  }
  LabeledSample S;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != dim + 1) {
      throw ParseError(fmt::format("CSV row {}: expected {} columns, found {}", row, dim + 1, cells.size()));
    }
    std::vector<double> coords(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(cells[k], coords[k]) || !std::isfinite(coords[k])) {
        throw ParseError(fmt::format("CSV row {}: column {} value '{}' is not a finite number",
                                     row, k + 1, cells[k]));
      }
    }
    double y = 0.0;
    if (!parse_double(cells[dim], y) || (y != 0.0 && y != 1.0)) {
      throw ParseError(fmt::format("CSV row {}: label must be 0 or 1, got '{}'", row, cells[dim]));
    }
    S.push_back({Instance(std::move(coords)), to_label(y == 1.0)});
  }
  return S;
}

LabeledSample read_sample_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  try {
    return read_sample_csv(in, schema);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_sample_csv(std::ostream& out, const LabeledSample& S) {
  const std::size_t dim = std::max<std::size_t>(S.dimension(), 1);
  for (std::size_t k = 0; k < dim; ++k) out << 'x' << (k + 1) << ',';
  out << "y\n";
  for (const auto& [x, y] : S) {
    for (double v : x.coords()) out << format_double(v) << ',';
    out << to_int(y) << '\n';
  }
}

}  // namespace slt
