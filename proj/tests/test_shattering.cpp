#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "slt/errors.hpp"
#include "slt/shattering.hpp"
#include "support.hpp"

using namespace slt;

namespace {

std::vector<Instance> line(std::initializer_list<double> xs) {
  std::vector<Instance> out;
  for (double x : xs) out.push_back(Instance{x});
  return out;
}

// Largest subset of `pool` on which the members realize every labeling,
// found by checking all 2^|pool| subsets directly.
std::size_t vc_oracle(const std::vector<Hypothesis>& members, const std::vector<Instance>& pool) {
  const std::size_t n = pool.size();
  std::size_t best = 0;
  for (std::uint32_t subset = 1; subset < (1U << n); ++subset) {
    const auto k = static_cast<std::size_t>(std::popcount(subset));
    if (k <= best) continue;
    std::set<std::uint32_t> patterns;
    for (const auto& h : members) {
      std::uint32_t p = 0, bit = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(subset >> i & 1U)) continue;
        if (h(pool[i]) == Label::One) p |= 1U << bit;
        ++bit;
      }
      patterns.insert(p);
    }
    if (patterns.size() == (std::size_t{1} << k)) best = k;
  }
  return best;
}

Labeling labels(std::initializer_list<int> v) {
  Labeling out;
  for (int y : v) out.push_back(label_from_int(y));
  return out;
}

}  // namespace

TEST_CASE("restriction examples") {
  const auto dense = Discretization{Discretization::linspace(0, 1, 101)};
  const auto one = restriction(HypothesisClass(ThresholdFamily{Directions::Both}), line({0.5}), dense);
  CHECK(one == std::set<Labeling>{labels({0}), labels({1})});

  const auto up = restriction(HypothesisClass(ThresholdFamily{Directions::Up}), line({0.3, 0.7}), dense);
  CHECK(up == std::set<Labeling>{labels({0, 0}), labels({0, 1}), labels({1, 1})});
}

TEST_CASE("restriction size never exceeds 2^k") {
  auto g = test::rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t k = 1 + g() % 6;
    std::vector<Instance> pts;
    std::set<double> used;
    while (pts.size() < k) {
      const double x = std::round(test::uniform(g) * 1000) / 1000;
      if (used.insert(x).second) pts.push_back(Instance{x});
    }
    const auto r = restriction(HypothesisClass(IntervalUnionFamily{2}), pts,
                               Discretization{Discretization::linspace(0, 1, 21)});
    CHECK(r.size() <= (std::size_t{1} << k));
  }
}

TEST_CASE("restriction size is invariant under permutation of the points") {
  auto g = test::rng(22);
  const HypothesisClass H(IntervalFamily{});
  const Discretization d{Discretization::linspace(0, 1, 11)};
  for (int rep = 0; rep < 50; ++rep) {
    auto pts = line({0.05, 0.33, 0.51, 0.77, 0.93});
    const auto base = restriction(H, pts, d).size();
    std::shuffle(pts.begin(), pts.end(), g);
    CHECK(restriction(H, pts, d).size() == base);
  }
}

TEST_CASE("shatters examples") {
  const HypothesisClass I(IntervalFamily{});
  const Discretization d{Discretization::linspace(0, 1, 101)};
  CHECK_FALSE(shatters(I, line({0.2, 0.5, 0.8}), d));
  CHECK(shatters(I, line({0.3, 0.7}), d));
  CHECK(shatters(I, std::vector<Instance>{}, d));
  CHECK_THROWS_AS(shatters(std::vector<Hypothesis>{}, std::vector<Instance>{}), InvalidArgument);
}

TEST_CASE("shattering is downward closed") {
  const HypothesisClass R(RectangleFamily{2});
  const Discretization d{Discretization::linspace(0, 1, 11)};
  const std::vector<Instance> diamond{Instance{0.5, 0.15}, Instance{0.15, 0.5}, Instance{0.85, 0.5},
                                      Instance{0.5, 0.85}};
  REQUIRE(shatters(R, diamond, d));
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<Instance> sub;
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask >> i & 1U) sub.push_back(diamond[i]);
    }
    CHECK(shatters(R, sub, d));
  }
}

TEST_CASE("VC dimensions agree with an exhaustive subset oracle") {
  const auto grid = Discretization{Discretization::linspace(0, 1, 11)};
  const auto pool = line({0.05, 0.15, 0.35, 0.45, 0.55, 0.65, 0.85, 0.95});

  SUBCASE("upward thresholds") {
    const auto members = enumerate_class(HypothesisClass(ThresholdFamily{Directions::Up}), grid);
    const auto r = vc_dimension(members, pool);
    CHECK(r.value == vc_oracle(members, pool));
    CHECK(r.value == 1);
    CHECK(r.exact);
  }
  SUBCASE("thresholds in both directions") {
    const auto members = enumerate_class(HypothesisClass(ThresholdFamily{Directions::Both}), grid);
    const auto r = vc_dimension(members, pool);
    CHECK(r.value == vc_oracle(members, pool));
    CHECK(r.value == 2);
  }
  SUBCASE("intervals") {
    const auto members = enumerate_class(HypothesisClass(IntervalFamily{}), grid);
    const auto r = vc_dimension(members, pool);
    CHECK(r.value == vc_oracle(members, pool));
    CHECK(r.value == 2);
  }
  SUBCASE("unions of two intervals") {
    const auto members = enumerate_class(HypothesisClass(IntervalUnionFamily{2}), grid);
    const auto r = vc_dimension(members, pool);
    CHECK(r.value == vc_oracle(members, pool));
    CHECK(r.value == 4);
  }
  SUBCASE("2D rectangles") {
    const std::vector<Instance> pool2{Instance{0.5, 0.15}, Instance{0.15, 0.5}, Instance{0.85, 0.5},
                                      Instance{0.5, 0.85}, Instance{0.35, 0.35}, Instance{0.65, 0.65},
                                      Instance{0.25, 0.75}};
    const auto members = enumerate_class(HypothesisClass(RectangleFamily{2}), grid);
    const auto r = vc_dimension(members, pool2);
    CHECK(r.value == vc_oracle(members, pool2));
    CHECK(r.value == 4);
  }
  SUBCASE("2D halfspaces") {
    const std::vector<Instance> pool2{Instance{0.2, 0.2}, Instance{0.8, 0.2}, Instance{0.5, 0.8},
                                      Instance{0.5, 0.4}, Instance{0.2, 0.8}};
    const auto members = enumerate_class(HypothesisClass(HalfspaceFamily{2}),
                                         Discretization{{-1, -0.5, 0, 0.5, 1}, Discretization::linspace(-1.5, 1.5, 61)});
    const auto r = vc_dimension(members, pool2);
    CHECK(r.value == vc_oracle(members, pool2));
    CHECK(r.value == 3);
  }
}

TEST_CASE("certificates replay and are complete") {
  const auto r = vc_dimension(HypothesisClass(IntervalFamily{}), line({0.05, 0.25, 0.45, 0.65}),
                              Discretization{Discretization::linspace(0, 1, 11)});
  REQUIRE(r.value == 2);
  CHECK(r.witness.size() == 2);
  CHECK(r.certificate.size() == 4);
  CHECK(verify_certificate(r.witness, r.certificate));
  // Lexicographic order with the first point most significant.
  CHECK(r.certificate[1].labeling == labels({0, 1}));
  CHECK(r.certificate[2].labeling == labels({1, 0}));

  auto tampered = r.certificate;
  tampered[1].labeling = labels({1, 1});
  CHECK_FALSE(verify_certificate(r.witness, tampered));
}

TEST_CASE("finite classes obey the counting bound") {
  auto g = test::rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Hypothesis> members;
    const std::size_t size = 1 + g() % 16;
    for (std::size_t i = 0; i < size; ++i) {
      members.push_back(Interval{test::uniform(g, 0, 0.5), test::uniform(g, 0.5, 1)});
    }
    const auto pool = line({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const auto r = vc_dimension(members, pool);
    CHECK(r.value <= static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(size)))));
  }
  std::vector<Hypothesis> eight;
  for (int i = 0; i < 8; ++i) eight.push_back(Threshold{i / 8.0, Direction::Up});
  CHECK(vc_dimension(eight, line({0.01, 0.2, 0.4, 0.6, 0.8})).value <= 3);
}

TEST_CASE("VC dimension is monotone in the class") {
  const auto pool = line({0.05, 0.25, 0.45, 0.65, 0.85});
  const HypothesisClass U(IntervalUnionFamily{2});
  std::size_t previous = 0;
  for (std::size_t n : {2, 3, 6, 11}) {
    const auto v = vc_dimension(U, pool, Discretization{Discretization::linspace(0, 1, n)}).value;
    CHECK(v >= previous);
    previous = v;
  }
  const auto thr = vc_dimension(HypothesisClass(ThresholdFamily{Directions::Up}), pool,
                                Discretization{Discretization::linspace(0, 1, 11)});
  const auto both = vc_dimension(HypothesisClass(ThresholdFamily{Directions::Both}), pool,
                                 Discretization{Discretization::linspace(0, 1, 11)});
  CHECK(thr.value <= both.value);
}

TEST_CASE("subset budget yields a marked lower bound") {
  const auto r = vc_dimension(HypothesisClass(IntervalUnionFamily{2}),
                              line({0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95}),
                              Discretization{Discretization::linspace(0, 1, 11)}, 20);
  CHECK_FALSE(r.exact);
  CHECK(r.subsets_examined <= 20);
  CHECK(to_json(r)["display"].get<std::string>().find(">=") == 0);
}

TEST_CASE("empty and oversized pools are rejected") {
  const HypothesisClass T(ThresholdFamily{});
  const Discretization d{{0.5}};
  CHECK_THROWS_AS(vc_dimension(T, std::vector<Instance>{}, d), InvalidArgument);
  std::vector<Instance> big;
  for (int i = 0; i < 65; ++i) big.push_back(Instance{i * 1.0});
  CHECK_THROWS_AS(vc_dimension(T, big, d), InvalidArgument);
}

TEST_CASE("sine class shatters geometric point sets") {
  SUBCASE("k = 1") {
    const auto w = sine_shatter_witness(1);
    CHECK(w.complete());
    CHECK(w.realized.size() == 2);
  }
  SUBCASE("k = 3 on 10^-1, 10^-2, 10^-3") {
    SineSearchOptions o;
    o.points = {1e-1, 1e-2, 1e-3};
    const auto w = sine_shatter_witness(3, o);
    CHECK(w.complete());
    CHECK(w.realized.size() == 8);
    CHECK(verify_certificate(w.points, w.realized));
  }
  SUBCASE("k = 6") {
    const auto w = sine_shatter_witness(6);
    CHECK(w.complete());
    CHECK(w.realized.size() == 64);
    CHECK(verify_certificate(w.points, w.realized));
    const auto text = to_json(w).dump();
    CHECK(text.find("infinite") == std::string::npos);
  }
}

TEST_CASE("sine search reports failures when the budget runs out") {
  SineSearchOptions o;
  o.budget = 10;
  const auto w = sine_shatter_witness(5, o);
  CHECK_FALSE(w.complete());
  CHECK(w.realized.size() + w.failed.size() == 32);
  // A partial certificate is not a shattering certificate, but each entry still replays.
  CHECK_FALSE(verify_certificate(w.points, w.realized));
  for (const auto& [labeling, h] : w.realized) CHECK(labels_on(h, w.points) == labeling);
  CHECK_THROWS_AS(sine_shatter_witness(9), InvalidArgument);
}
