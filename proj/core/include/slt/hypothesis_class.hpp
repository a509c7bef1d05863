#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "slt/hypothesis.hpp"

namespace slt {

/// Closed range a parametric family's parameters are declared over.
struct ParamRange {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  friend bool operator==(const ParamRange&, const ParamRange&) = default;
};

enum class Directions : std::uint8_t { Up, Down, Both };

struct ThresholdFamily {
  Directions directions = Directions::Up;
  ParamRange range{};
  friend bool operator==(const ThresholdFamily&, const ThresholdFamily&) = default;
};
struct IntervalFamily {
  ParamRange range{};
  friend bool operator==(const IntervalFamily&, const IntervalFamily&) = default;
};
/// Unions of between 1 and max_parts disjoint closed intervals.
struct IntervalUnionFamily {
  std::size_t max_parts = 2;
  ParamRange range{};
  friend bool operator==(const IntervalUnionFamily&, const IntervalUnionFamily&) = default;
};
struct RectangleFamily {
  std::size_t dimension = 2;
  ParamRange range{};
  friend bool operator==(const RectangleFamily&, const RectangleFamily&) = default;
};
struct HalfspaceFamily {
  std::size_t dimension = 2;
  ParamRange weight_range{};
  ParamRange offset_range{};
  friend bool operator==(const HalfspaceFamily&, const HalfspaceFamily&) = default;
};
struct SineFamily {
  ParamRange range{};
  friend bool operator==(const SineFamily&, const SineFamily&) = default;
};
/// An explicit finite list, enumerated in stored order.
struct FiniteFamily {
  std::vector<Hypothesis> members;
  friend bool operator==(const FiniteFamily&, const FiniteFamily&) = default;
};

/// Finite grids that turn a parametric family into an enumerable one.
///
/// `grid` carries the family's primary parameter values: thresholds,
/// interval endpoints, per-axis rectangle bounds, sine frequencies, or the
/// per-component halfspace weights. `offsets` is only read by halfspaces.
/// Grids must be finite and strictly increasing.
struct Discretization {
  std::vector<double> grid;
  std::vector<double> offsets{};
  std::size_t budget = 1'000'000;

  /// n evenly spaced values from lo to hi inclusive.
  static std::vector<double> linspace(double lo, double hi, std::size_t n);

  friend bool operator==(const Discretization&, const Discretization&) = default;
};

class HypothesisClass {
public:
  using Family = std::variant<ThresholdFamily, IntervalFamily, IntervalUnionFamily,
                              RectangleFamily, HalfspaceFamily, SineFamily, FiniteFamily>;

  HypothesisClass(Family family);

  /// Finite class. When `probe` is given, members that agree on every probe
  /// point are rejected as duplicates.
  static HypothesisClass finite(std::vector<Hypothesis> members,
                                std::optional<std::span<const Instance>> probe = std::nullopt);

  const Family& family() const noexcept { return family_; }
  std::string_view tag() const noexcept;
  std::size_t dimension() const noexcept;
  bool is_finite() const noexcept { return std::holds_alternative<FiniteFamily>(family_); }

  friend bool operator==(const HypothesisClass&, const HypothesisClass&) = default;

private:
  Family family_;
};

/// Number of members enumerate_class would produce, saturating at SIZE_MAX.
/// Validates the grid against the family.
std::size_t class_size(const HypothesisClass& H, const Discretization& grid);

/// Deterministic canonical enumeration. Throws BudgetExceeded when the
/// member count exceeds grid.budget.
///
/// Canonical orders:
///   thresholds   direction (Up, then Down) outer, theta ascending inner
///   intervals    a ascending, then b ascending (a <= b)
///   unions       part count ascending, then lexicographic on endpoints
///   rectangles   per-axis interval index, axis 0 most significant
///   halfspaces   weight vector lexicographic (axis 0 most significant), then offset
///   sine         alpha ascending
///   finite       stored order
std::vector<Hypothesis> enumerate_class(const HypothesisClass& H, const Discretization& grid);

/// Pairs (i, j), i < j, of members agreeing on every probe point.
std::vector<std::pair<std::size_t, std::size_t>> extensional_duplicates(
    std::span<const Hypothesis> members, std::span<const Instance> probe);

/// One entry of a finite prefix of a weighted class sequence.
struct WeightedClass {
  HypothesisClass cls;
  Discretization grid;
  double weight = 0.0;
  std::optional<std::size_t> vc_dimension{};
};

/// Ordered classes H_1, H_2, ... with positive weights summing to at most 1.
class WeightedClassSequence {
public:
  explicit WeightedClassSequence(std::vector<WeightedClass> entries);

  /// Weights 2^-n (n = 1..N) renormalized to sum to 1 over the prefix.
  static WeightedClassSequence with_default_weights(
      std::vector<HypothesisClass> classes, std::vector<Discretization> grids,
      std::vector<std::optional<std::size_t>> vc_dimensions = {});

  std::size_t size() const noexcept { return entries_.size(); }
  const WeightedClass& operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const WeightedClass> entries() const noexcept { return entries_; }

private:
  std::vector<WeightedClass> entries_;
};

}  // namespace slt
