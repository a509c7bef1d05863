#include "slt/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(fmt::format("{} must be finite", what));
}

void validate(const Threshold& t) { require_finite(t.theta, "threshold theta"); }

void validate(const Interval& i) {
  require_finite(i.a, "interval endpoint a");
  require_finite(i.b, "interval endpoint b");
  if (i.a > i.b) throw InvalidArgument(fmt::format("interval [{}, {}] has a > b", i.a, i.b));
}

void validate(const IntervalUnion& u) {
  if (u.parts.empty()) throw InvalidArgument("interval union needs at least one part");
  for (std::size_t k = 0; k < u.parts.size(); ++k) {
    validate(u.parts[k]);
    if (k > 0 && !(u.parts[k - 1].b < u.parts[k].a)) {
      throw InvalidArgument("interval union parts must be disjoint and increasing");
    }
  }
}

void validate(const Rectangle& r) {
  if (r.lo.empty() || r.lo.size() != r.hi.size()) {
    throw InvalidArgument("rectangle needs lo and hi of equal nonzero dimension");
  }
  for (std::size_t k = 0; k < r.lo.size(); ++k) {
    require_finite(r.lo[k], "rectangle lo");
    require_finite(r.hi[k], "rectangle hi");
    if (r.lo[k] > r.hi[k]) throw InvalidArgument(fmt::format("rectangle axis {} has lo > hi", k));
  }
}

void validate(const Halfspace& h) {
  if (h.w.empty()) throw InvalidArgument("halfspace needs a weight vector of dimension >= 1");
  for (double v : h.w) require_finite(v, "halfspace weight");
  require_finite(h.b, "halfspace offset");
}

void validate(const Sine& s) { require_finite(s.alpha, "sine frequency"); }

void normalize(LookupTable& t) {
  if (t.dimension == 0) throw InvalidArgument("lookup table dimension must be >= 1");
  for (const auto& e : t.entries) {
    if (e.x.dimension() != t.dimension) throw DimensionMismatch(t.dimension, e.x.dimension());
  }
  std::stable_sort(t.entries.begin(), t.entries.end(),
                   [](const Example& a, const Example& b) { return a.x < b.x; });
  for (std::size_t k = 1; k < t.entries.size(); ++k) {
    if (t.entries[k - 1].x == t.entries[k].x) {
      throw InvalidArgument("lookup table lists the same instance twice");
    }
  }
}

bool inside(const Interval& i, double x) noexcept { return i.a <= x && x <= i.b; }

}  // namespace

Hypothesis::Hypothesis(Threshold t) : kind_(t), dimension_(1) { validate(t); }
Hypothesis::Hypothesis(Interval i) : kind_(i), dimension_(1) { validate(i); }
Hypothesis::Hypothesis(IntervalUnion u) : dimension_(1) {
  validate(u);
  kind_ = std::move(u);
}
Hypothesis::Hypothesis(Rectangle r) : dimension_(r.lo.size()) {
  validate(r);
  kind_ = std::move(r);
}
Hypothesis::Hypothesis(Halfspace h) : dimension_(h.w.size()) {
  validate(h);
  kind_ = std::move(h);
}
Hypothesis::Hypothesis(Sine s) : kind_(s), dimension_(1) { validate(s); }
Hypothesis::Hypothesis(LookupTable t) : dimension_(t.dimension) {
  normalize(t);
  kind_ = std::move(t);
}

std::string_view Hypothesis::tag() const noexcept {
  static constexpr std::string_view tags[] = {"threshold", "interval", "interval_union",
                                              "rectangle", "halfspace", "sine",
                                              "lookup_table"};
  return tags[kind_.index()];
}

Label Hypothesis::operator()(const Instance& x) const {
  if (x.dimension() != dimension_) throw DimensionMismatch(dimension_, x.dimension());
  return evaluate(x.coords());
}

Label Hypothesis::evaluate(std::span<const double> x) const noexcept {
  struct Visitor {
    std::span<const double> x;

    bool operator()(const Threshold& t) const noexcept {
      return t.direction == Direction::Up ? x[0] >= t.theta : x[0] <= t.theta;
    }
    bool operator()(const Interval& i) const noexcept { return inside(i, x[0]); }
    bool operator()(const IntervalUnion& u) const noexcept {
      return std::any_of(u.parts.begin(), u.parts.end(),
                         [&](const Interval& i) { return inside(i, x[0]); });
    }
    bool operator()(const Rectangle& r) const noexcept {
      for (std::size_t k = 0; k < r.lo.size(); ++k) {
        if (x[k] < r.lo[k] || x[k] > r.hi[k]) return false;
      }
      return true;
    }
    bool operator()(const Halfspace& h) const noexcept {
      double s = h.b;
      for (std::size_t k = 0; k < h.w.size(); ++k) s += h.w[k] * x[k];
      return s >= 0.0;
    }
    bool operator()(const Sine& s) const noexcept { return std::sin(s.alpha * x[0]) >= 0.0; }
    bool operator()(const LookupTable& t) const noexcept {
      auto it = std::lower_bound(t.entries.begin(), t.entries.end(), x,
                                 [](const Example& e, std::span<const double> key) {
                                   return std::lexicographical_compare(
                                       e.x.coords().begin(), e.x.coords().end(),
                                       key.begin(), key.end());
                                 });
      if (it != t.entries.end() && std::equal(x.begin(), x.end(), it->x.coords().begin(),
                                              it->x.coords().end())) {
        return it->y == Label::One;
      }
      return t.fallback == Label::One;
    }
  };
  return to_label(std::visit(Visitor{x}, kind_));
}

Label predict(const Hypothesis& h, const Instance& x) { return h(x); }

std::size_t mistakes(const Hypothesis& h, const LabeledSample& S) {
  if (!S.empty() && S.dimension() != h.dimension()) {
    throw DimensionMismatch(h.dimension(), S.dimension());
  }
  std::size_t count = 0;
  for (const auto& [x, y] : S) count += h.evaluate(x.coords()) != y;
  return count;
}

double empirical_error(const Hypothesis& h, const LabeledSample& S) {
  if (S.empty()) throw InvalidArgument("empirical error of an empty sample is undefined");
  return static_cast<double>(mistakes(h, S)) / static_cast<double>(S.size());
}

bool extensionally_equal(const Hypothesis& h, const Hypothesis& g,
                         std::span<const Instance> probe) {
  return std::all_of(probe.begin(), probe.end(),
                     [&](const Instance& x) { return h(x) == g(x); });
}

std::vector<Label> labels_on(const Hypothesis& h, std::span<const Instance> points) {
  std::vector<Label> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(h(x));
  return out;
}

}  // namespace slt
