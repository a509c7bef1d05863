#include "slt/shattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

void check_points(std::span<const Instance> points, std::size_t dimension) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dimension() != dimension) throw DimensionMismatch(dimension, points[i].dimension());
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw InvalidArgument(fmt::format("points {} and {} coincide", j, i));
      }
    }
  }
}

std::size_t class_dimension(std::span<const Hypothesis> members) {
  if (members.empty()) throw InvalidArgument("hypothesis class has no members");
  return members.front().dimension();
}

Labeling unpack(std::uint64_t bits, std::size_t k) {
  Labeling l(k);
  for (std::size_t j = 0; j < k; ++j) l[j] = to_label((bits >> (k - 1 - j)) & 1U);
  return l;
}

}  // namespace

std::set<Labeling> restriction(std::span<const Hypothesis> members,
                               std::span<const Instance> points) {
  const std::size_t dim = class_dimension(members);
  check_points(points, dim);
  std::set<Labeling> out;
  if (points.empty()) {
    out.insert(Labeling{});
    return out;
  }
  Labeling l(points.size());
  for (const auto& h : members) {
    for (std::size_t j = 0; j < points.size(); ++j) l[j] = h.evaluate(points[j].coords());
    out.insert(l);
  }
  return out;
}

std::set<Labeling> restriction(const HypothesisClass& H, std::span<const Instance> points,
                               const Discretization& grid) {
  if (points.empty()) throw InvalidArgument("restriction needs a nonempty point set");
  auto members = enumerate_class(H, grid);
  return restriction(members, points);
}

bool shatters(std::span<const Hypothesis> members, std::span<const Instance> points) {
  if (points.size() >= 64) return false;
  return restriction(members, points).size() == (std::size_t{1} << points.size());
}

bool shatters(const HypothesisClass& H, std::span<const Instance> points,
              const Discretization& grid) {
  if (points.empty()) return true;
  auto members = enumerate_class(H, grid);
  return shatters(members, points);
}

VcReport vc_dimension(std::span<const Hypothesis> members, std::span<const Instance> pool,
                      std::size_t subset_budget) {
  if (pool.empty()) throw InvalidArgument("VC dimension search needs a nonempty point pool");
  if (pool.size() > kMaxPoolSize) {
    throw InvalidArgument(fmt::format("point pool has {} points; at most {} are supported",
                                      pool.size(), kMaxPoolSize));
  }
  const std::size_t dim = class_dimension(members);
  check_points(pool, dim);
  const std::size_t n = pool.size();

  // Labels on the whole pool, one bit per point, deduplicated in canonical
  // order so the first representative is the earliest realizing member.
  std::vector<std::uint64_t> masks;
  std::vector<std::size_t> owner;
  {
    std::vector<std::pair<std::uint64_t, std::size_t>> seen;
    seen.reserve(members.size());
    for (std::size_t h = 0; h < members.size(); ++h) {
      std::uint64_t m = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (members[h].evaluate(pool[j].coords()) == Label::One) m |= std::uint64_t{1} << j;
      }
      seen.emplace_back(m, h);
    }
    std::stable_sort(seen.begin(), seen.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    seen.erase(std::unique(seen.begin(), seen.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               seen.end());
    std::sort(seen.begin(), seen.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [m, h] : seen) {
      masks.push_back(m);
      owner.push_back(h);
    }
  }

  VcReport report;
  report.class_size = members.size();
  report.distinct_restrictions = masks.size();
  report.certificate.push_back({Labeling{}, members[owner.front()]});

  std::vector<std::size_t> subset;
  std::vector<std::int64_t> first;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k >= 63 || (std::size_t{1} << k) > masks.size()) return report;
    const std::size_t full = std::size_t{1} << k;
    first.assign(full, -1);
    subset.resize(k);
    for (std::size_t j = 0; j < k; ++j) subset[j] = j;
    bool found = false;
    while (true) {
      if (report.subsets_examined == subset_budget) {
        report.exact = false;
        return report;
      }
      ++report.subsets_examined;
      std::fill(first.begin(), first.end(), -1);
      std::size_t distinct = 0;
      for (std::size_t u = 0; u < masks.size() && distinct < full; ++u) {
        std::size_t proj = 0;
        for (std::size_t j = 0; j < k; ++j) proj = (proj << 1) | ((masks[u] >> subset[j]) & 1U);
        if (first[proj] < 0) {
          first[proj] = static_cast<std::int64_t>(u);
          ++distinct;
        }
      }
      if (distinct == full) {
        found = true;
        break;
      }
      // Next k-combination of {0, ..., n-1} in lexicographic order.
      std::size_t i = k;
      while (i > 0 && subset[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    if (!found) return report;
    report.value = k;
    report.witness.clear();
    for (auto j : subset) report.witness.push_back(pool[j]);
    report.certificate.clear();
    for (std::size_t proj = 0; proj < full; ++proj) {
      report.certificate.push_back({unpack(proj, k), members[owner[first[proj]]]});
    }
  }
  return report;
}

VcReport vc_dimension(const HypothesisClass& H, std::span<const Instance> pool,
                      const Discretization& grid, std::size_t subset_budget) {
  auto members = enumerate_class(H, grid);
  return vc_dimension(members, pool, subset_budget);
}

bool verify_certificate(std::span<const Instance> witness, std::span<const Realization> certificate) {
  if (witness.size() >= 63 || certificate.size() != (std::size_t{1} << witness.size())) return false;
  std::set<Labeling> covered;
  for (const auto& [labeling, h] : certificate) {
    if (labeling.size() != witness.size()) return false;
    for (std::size_t j = 0; j < witness.size(); ++j) {
      if (h.dimension() != witness[j].dimension() || h(witness[j]) != labeling[j]) return false;
    }
    covered.insert(labeling);
  }
  return covered.size() == certificate.size();
}

SineWitness sine_shatter_witness(std::size_t k, const SineSearchOptions& options) {
  if (k == 0) throw InvalidArgument("sine witness needs k >= 1");
  if (k > options.max_k) {
    throw InvalidArgument(fmt::format("k = {} exceeds the configured maximum {}", k, options.max_k));
  }
  if (k >= 63) throw InvalidArgument("k must be below 63");
  std::vector<double> xs = options.points;
  if (xs.empty()) {
    for (std::size_t i = 1; i <= k; ++i) xs.push_back(std::pow(10.0, -static_cast<double>(i)));
  }
  if (xs.size() != k) {
    throw InvalidArgument(fmt::format("expected {} points, got {}", k, xs.size()));
  }
  SineWitness out;
  for (double x : xs) out.points.push_back(Instance{x});
  check_points(out.points, 1);

  const std::size_t full = std::size_t{1} << k;
  std::vector<double> alpha_for(full, std::nan(""));
  std::size_t found = 0;
  auto labeling_at = [&](double alpha) {
    std::size_t bits = 0;
    for (double x : xs) bits = (bits << 1) | (std::sin(alpha * x) >= 0.0 ? 1U : 0U);
    return bits;
  };
  auto record = [&](double alpha) {
    const auto bits = labeling_at(alpha);
    if (std::isnan(alpha_for[bits])) {
      alpha_for[bits] = alpha;
      ++found;
    }
  };

  // Min-heap of the next breakpoint n * pi / |x_i| for every point.
  using Next = std::pair<double, std::size_t>;
  std::priority_queue<Next, std::vector<Next>, std::greater<>> heap;
  std::vector<std::uint64_t> multiple(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    if (xs[i] != 0.0) heap.emplace(std::numbers::pi / std::abs(xs[i]), i);
  }
  record(0.0);
  double left = 0.0;
  while (found < full && !heap.empty() && out.cells_examined < options.budget) {
    auto [right, i] = heap.top();
    heap.pop();
    heap.emplace(static_cast<double>(++multiple[i]) * std::numbers::pi / std::abs(xs[i]), i);
    if (right - left > 1e-6 * std::max(1.0, right)) {
      ++out.cells_examined;
      record(0.5 * (left + right));
    }
    left = right;
  }
  if (heap.empty() && found < full && out.cells_examined < options.budget) {
    ++out.cells_examined;
    record(left + 1.0);
  }

  for (std::size_t bits = 0; bits < full; ++bits) {
    if (std::isnan(alpha_for[bits])) {
      out.failed.push_back(unpack(bits, k));
    } else {
      out.realized.push_back({unpack(bits, k), Hypothesis(Sine{alpha_for[bits]})});
    }
  }
  return out;
}

Json to_json(const Labeling& l) {
  Json j = Json::array();
  for (auto y : l) j.push_back(to_int(y));
  return j;
}

Json to_json(const VcReport& r) {
  Json witness = Json::array();
  for (const auto& x : r.witness) witness.push_back(to_json(x));
  Json cert = Json::array();
  for (const auto& [l, h] : r.certificate) cert.push_back({{"labeling", to_json(l)}, {"hypothesis", to_json(h)}});
  Json j = {{"value", r.value},
            {"exact", r.exact},
            {"witness", witness},
            {"certificate", cert},
            {"class_size", r.class_size},
            {"distinct_restrictions", r.distinct_restrictions},
            {"subsets_examined", r.subsets_examined}};
  j["display"] = r.exact ? fmt::format("{}", r.value)
                         : fmt::format(">= {} (budget exhausted)", r.value);
  return j;
}

Json to_json(const SineWitness& w) {
  Json points = Json::array();
  for (const auto& x : w.points) points.push_back(x[0]);
  Json realized = Json::array();
  for (const auto& [l, h] : w.realized) {
    realized.push_back({{"labeling", to_json(l)}, {"hypothesis", to_json(h)}});
  }
  Json failed = Json::array();
  for (const auto& l : w.failed) failed.push_back(to_json(l));
  return {{"k", w.points.size()},
          {"points", points},
          {"realized", realized},
          {"failed", failed},
          {"cells_examined", w.cells_examined},
          {"complete", w.complete()},
          {"claim", w.complete() ? fmt::format("shatters these {} points", w.points.size())
                                 : fmt::format("{} of {} labelings realized", w.realized.size(),
                                               std::size_t{1} << w.points.size())}};
}

}  // namespace slt
