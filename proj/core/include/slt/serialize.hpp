#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "slt/hypothesis.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/sample.hpp"

namespace slt {

using Json = nlohmann::json;

// JSON schema
//
//   hypothesis  {"kind": "threshold", "theta": t, "direction": "up"|"down"}
//               {"kind": "interval", "a": a, "b": b}
//               {"kind": "interval_union", "parts": [[a, b], ...]}
//               {"kind": "rectangle", "lo": [...], "hi": [...]}
//               {"kind": "halfspace", "w": [...], "b": b}
//               {"kind": "sine", "alpha": a}
//               {"kind": "lookup_table", "dimension": d,
//                "entries": [{"x": [...], "y": 0|1}, ...], "default": 0|1}
//   sample      {"m": m, "dimension": d, "pairs": [{"x": [...], "y": 0|1}, ...]}
//   class       {"family": "thresholds", "directions": "up"|"down"|"both", "range": [lo, hi]}
//               {"family": "intervals" | "sine", "range": [...]}
//               {"family": "interval_unions", "max_parts": k, "range": [...]}
//               {"family": "rectangles", "dimension": d, "range": [...]}
//               {"family": "halfspaces", "dimension": d, "weight_range": [...],
//                "offset_range": [...]}
//               {"family": "finite", "hypotheses": [hypothesis, ...]}
//   grid        {"grid": [...] | {"linspace": [lo, hi, n]}, "offsets": ..., "budget": n}
//
// Ranges are optional and default to the whole real line. Parsers reject
// unknown keys; error messages carry the JSON path of the offending value.

Json to_json(const Instance& x);
Json to_json(const Hypothesis& h);
Json to_json(const LabeledSample& S);
Json to_json(const HypothesisClass& H);
Json to_json(const Discretization& d);

Instance instance_from_json(const Json& j, const std::string& path = "$");
Hypothesis hypothesis_from_json(const Json& j, const std::string& path = "$");
LabeledSample sample_from_json(const Json& j, const std::string& path = "$");
HypothesisClass class_from_json(const Json& j, const std::string& path = "$");
Discretization discretization_from_json(const Json& j, const std::string& path = "$");

/// Throws ParseError naming the first key of `j` not in `allowed`.
void require_known_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                        const std::string& path);

/// `%.17g` text; round-trips every double exactly.
std::string format_double(double v);

// CSV: header row required, then one row per pair with `dimension` feature
// columns followed by one label column holding 0 or 1.

struct CsvSchema {
  /// Number of feature columns; 0 means "infer from the header".
  std::size_t dimension = 0;
};

LabeledSample read_sample_csv(std::istream& in, const CsvSchema& schema = {});
LabeledSample read_sample_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
void write_sample_csv(std::ostream& out, const LabeledSample& S);

}  // namespace slt
