#include "slt/hypothesis_class.hpp"

#include <type_traits>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

std::size_t sat_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  __extension__ using u128 = unsigned __int128;
  u128 c = 1;
  for (std::size_t i = 0; i < k; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > kSaturated) return kSaturated;
  }
  return static_cast<std::size_t>(c);
}

void check_grid(std::span<const double> grid, const ParamRange& range, const char* what) {
  if (grid.empty()) throw InvalidArgument(fmt::format("{} grid is empty", what));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw InvalidArgument(fmt::format("{} grid value {} is not finite", what, k));
    if (!range.contains(grid[k])) {
      throw InvalidArgument(fmt::format("{} grid value {} lies outside the declared range [{}, {}]",
                                        what, grid[k], range.lo, range.hi));
    }
    if (k > 0 && !(grid[k - 1] < grid[k])) {
      throw InvalidArgument(fmt::format("{} grid must be strictly increasing (index {})", what, k));
    }
  }
}

struct SizeVisitor {
  const Discretization& d;

  std::size_t operator()(const ThresholdFamily& f) const {
    check_grid(d.grid, f.range, "threshold");
    return d.grid.size() * (f.directions == Directions::Both ? 2 : 1);
  }
  std::size_t operator()(const IntervalFamily& f) const {
    check_grid(d.grid, f.range, "interval endpoint");
    return binomial(d.grid.size() + 1, 2);
  }
  std::size_t operator()(const IntervalUnionFamily& f) const {
    check_grid(d.grid, f.range, "interval-union endpoint");
    if (f.max_parts == 0) throw InvalidArgument("interval union max_parts must be >= 1");
    std::size_t total = 0;
    for (std::size_t p = 1; p <= f.max_parts; ++p) {
      total = sat_add(total, binomial(d.grid.size() + p, 2 * p));
    }
    return total;
  }
  std::size_t operator()(const RectangleFamily& f) const {
    check_grid(d.grid, f.range, "rectangle bound");
    if (f.dimension == 0) throw InvalidArgument("rectangle dimension must be >= 1");
    return sat_pow(binomial(d.grid.size() + 1, 2), f.dimension);
  }
  std::size_t operator()(const HalfspaceFamily& f) const {
    check_grid(d.grid, f.weight_range, "halfspace weight");
    check_grid(d.offsets, f.offset_range, "halfspace offset");
    if (f.dimension == 0) throw InvalidArgument("halfspace dimension must be >= 1");
    return sat_mul(sat_pow(d.grid.size(), f.dimension), d.offsets.size());
  }
  std::size_t operator()(const SineFamily& f) const {
    check_grid(d.grid, f.range, "sine frequency");
    return d.grid.size();
  }
  std::size_t operator()(const FiniteFamily& f) const { return f.members.size(); }
};

void emit_unions(std::span<const double> g, std::size_t parts, std::size_t start,
                 std::vector<Interval>& prefix, std::vector<Hypothesis>& out) {
  if (prefix.size() == parts) {
    out.emplace_back(IntervalUnion{prefix});
    return;
  }
  for (std::size_t i = start; i < g.size(); ++i) {
    for (std::size_t j = i; j < g.size(); ++j) {
      prefix.push_back({g[i], g[j]});
      emit_unions(g, parts, j + 1, prefix, out);
      prefix.pop_back();
    }
  }
}

struct EnumerateVisitor {
  const Discretization& d;
  std::vector<Hypothesis>& out;

  void operator()(const ThresholdFamily& f) const {
    if (f.directions != Directions::Down) {
      for (double t : d.grid) out.emplace_back(Threshold{t, Direction::Up});
    }
    if (f.directions != Directions::Up) {
      for (double t : d.grid) out.emplace_back(Threshold{t, Direction::Down});
    }
  }
  void operator()(const IntervalFamily&) const {
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      for (std::size_t j = i; j < d.grid.size(); ++j) out.emplace_back(Interval{d.grid[i], d.grid[j]});
    }
  }
  void operator()(const IntervalUnionFamily& f) const {
    std::vector<Interval> prefix;
    for (std::size_t p = 1; p <= f.max_parts; ++p) emit_unions(d.grid, p, 0, prefix, out);
  }
  void operator()(const RectangleFamily& f) const {
    std::vector<Interval> axis;
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      for (std::size_t j = i; j < d.grid.size(); ++j) axis.push_back({d.grid[i], d.grid[j]});
    }
    std::vector<std::size_t> idx(f.dimension, 0);
    while (true) {
      Rectangle r;
      r.lo.reserve(f.dimension);
      r.hi.reserve(f.dimension);
      for (std::size_t k = 0; k < f.dimension; ++k) {
        r.lo.push_back(axis[idx[k]].a);
        r.hi.push_back(axis[idx[k]].b);
      }
      out.emplace_back(std::move(r));
      std::size_t k = f.dimension;
      while (k > 0 && ++idx[k - 1] == axis.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  void operator()(const HalfspaceFamily& f) const {
    std::vector<std::size_t> idx(f.dimension, 0);
    while (true) {
      std::vector<double> w(f.dimension);
      for (std::size_t k = 0; k < f.dimension; ++k) w[k] = d.grid[idx[k]];
      for (double b : d.offsets) out.emplace_back(Halfspace{w, b});
      std::size_t k = f.dimension;
      while (k > 0 && ++idx[k - 1] == d.grid.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  void operator()(const SineFamily&) const {
    for (double a : d.grid) out.emplace_back(Sine{a});
  }
  void operator()(const FiniteFamily& f) const { out = f.members; }
};

}  // namespace

std::vector<double> Discretization::linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  const double span = hi - lo;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

HypothesisClass::HypothesisClass(Family family) : family_(std::move(family)) {
  if (auto* f = std::get_if<FiniteFamily>(&family_)) {
    if (f->members.empty()) throw InvalidArgument("finite class must have at least one member");
    const std::size_t dim = f->members.front().dimension();
    for (const auto& h : f->members) {
      if (h.dimension() != dim) throw DimensionMismatch(dim, h.dimension());
    }
  }
}

HypothesisClass HypothesisClass::finite(std::vector<Hypothesis> members,
                                        std::optional<std::span<const Instance>> probe) {
  if (probe) {
    auto dups = extensional_duplicates(members, *probe);
    if (!dups.empty()) {
      throw InvalidArgument(fmt::format(
          "finite class members {} and {} agree on every probe point", dups[0].first, dups[0].second));
    }
  }
  return HypothesisClass(FiniteFamily{std::move(members)});
}

std::string_view HypothesisClass::tag() const noexcept {
  static constexpr std::string_view tags[] = {"thresholds", "intervals", "interval_unions",
                                              "rectangles", "halfspaces", "sine", "finite"};
  return tags[family_.index()];
}

std::size_t HypothesisClass::dimension() const noexcept {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, RectangleFamily> || std::is_same_v<F, HalfspaceFamily>) {
          return f.dimension;
        } else if constexpr (std::is_same_v<F, FiniteFamily>) {
          return f.members.front().dimension();
        } else {
          return 1;
        }
      },
      family_);
}

std::size_t class_size(const HypothesisClass& H, const Discretization& grid) {
  return std::visit(SizeVisitor{grid}, H.family());
}

std::vector<Hypothesis> enumerate_class(const HypothesisClass& H, const Discretization& grid) {
  const std::size_t required = class_size(H, grid);
  if (required > grid.budget) {
    throw BudgetExceeded(grid.budget, required, fmt::format("enumerating class '{}'", H.tag()));
  }
  std::vector<Hypothesis> out;
  out.reserve(required);
  std::visit(EnumerateVisitor{grid, out}, H.family());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> extensional_duplicates(
    std::span<const Hypothesis> members, std::span<const Instance> probe) {
  std::vector<std::vector<Label>> sig;
  sig.reserve(members.size());
  for (const auto& h : members) sig.push_back(labels_on(h, probe));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (sig[i] == sig[j]) out.emplace_back(i, j);
    }
  }
  return out;
}

WeightedClassSequence::WeightedClassSequence(std::vector<WeightedClass> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("class sequence must not be empty");
  double total = 0.0;
  for (std::size_t n = 0; n < entries_.size(); ++n) {
    const double w = entries_[n].weight;
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument(fmt::format("class weight w_{} must be positive, got {}", n + 1, w));
    }
    total += w;
  }
  if (total > 1.0 + 1e-12) {
    throw InvalidArgument(fmt::format("class weights sum to {} > 1", total));
  }
}

WeightedClassSequence WeightedClassSequence::with_default_weights(
    std::vector<HypothesisClass> classes, std::vector<Discretization> grids,
    std::vector<std::optional<std::size_t>> vc_dimensions) {
  if (classes.size() != grids.size()) {
    throw InvalidArgument("class sequence needs one discretization per class");
  }
  if (!vc_dimensions.empty() && vc_dimensions.size() != classes.size()) {
    throw InvalidArgument("class sequence needs one VC dimension entry per class");
  }
  vc_dimensions.resize(classes.size());
  double norm = 0.0;
  for (std::size_t n = 1; n <= classes.size(); ++n) norm += std::ldexp(1.0, -static_cast<int>(n));
  std::vector<WeightedClass> entries;
  entries.reserve(classes.size());
  for (std::size_t n = 0; n < classes.size(); ++n) {
    entries.push_back({std::move(classes[n]), std::move(grids[n]),
                       std::ldexp(1.0, -static_cast<int>(n + 1)) / norm, vc_dimensions[n]});
  }
  return WeightedClassSequence(std::move(entries));
}

}  // namespace slt
