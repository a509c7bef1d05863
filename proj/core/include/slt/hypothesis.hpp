#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "slt/sample.hpp"

namespace slt {

// Every real-valued family labels a point lying exactly on its decision
// boundary with Label::One.

enum class Direction : std::uint8_t {
  Up,    ///< 1[x >= theta]
  Down,  ///< 1[x <= theta]
};

struct Threshold {
  double theta = 0.0;
  Direction direction = Direction::Up;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// Closed interval 1[a <= x <= b], a <= b.
struct Interval {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Union of disjoint closed intervals in increasing order.
struct IntervalUnion {
  std::vector<Interval> parts;
  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

/// Axis-aligned closed box in lo.size() dimensions.
struct Rectangle {
  std::vector<double> lo;
  std::vector<double> hi;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// 1[<w, x> + b >= 0].
struct Halfspace {
  std::vector<double> w;
  double b = 0.0;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// 1[sin(alpha * x) >= 0].
struct Sine {
  double alpha = 0.0;
  friend bool operator==(const Sine&, const Sine&) = default;
};

/// Explicit table over a finite domain; instances absent from the table get
/// `fallback`. Entries are kept sorted by instance and unique.
struct LookupTable {
  std::size_t dimension = 1;
  std::vector<Example> entries;
  Label fallback = Label::Zero;
  friend bool operator==(const LookupTable&, const LookupTable&) = default;
};

/// A total, deterministic binary labeling rule.
class Hypothesis {
public:
  using Kind = std::variant<Threshold, Interval, IntervalUnion, Rectangle,
                            Halfspace, Sine, LookupTable>;

  Hypothesis(Threshold t);
  Hypothesis(Interval i);
  Hypothesis(IntervalUnion u);
  Hypothesis(Rectangle r);
  Hypothesis(Halfspace h);
  Hypothesis(Sine s);
  Hypothesis(LookupTable t);

  const Kind& kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::string_view tag() const noexcept;

  /// Checked evaluation; throws DimensionMismatch.
  Label operator()(const Instance& x) const;
  /// Unchecked evaluation for hot loops where dimensions were validated once.
  Label evaluate(std::span<const double> x) const noexcept;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

private:
  Kind kind_;
  std::size_t dimension_;
};

Label predict(const Hypothesis& h, const Instance& x);

/// Mean 0/1 loss of h over S (count, then divide). Throws on empty S.
double empirical_error(const Hypothesis& h, const LabeledSample& S);
/// Number of pairs of S mislabeled by h.
std::size_t mistakes(const Hypothesis& h, const LabeledSample& S);

/// True iff h and g agree on every probe point.
bool extensionally_equal(const Hypothesis& h, const Hypothesis& g,
                         std::span<const Instance> probe);

/// Labels of h on each point, in order.
std::vector<Label> labels_on(const Hypothesis& h, std::span<const Instance> points);

}  // namespace slt
