#include <cmath>
#include <limits>

#include "slt/distribution.hpp"
#include "slt/errors.hpp"
#include "slt/learners.hpp"
#include "support.hpp"

using namespace slt;
using slt::test::sample_1d;

namespace {

const Discretization kGrid{Discretization::linspace(0, 1, 11)};

// First index of minimal mistakes, counted with the threshold definition directly.
std::size_t threshold_scan(const std::vector<double>& grid, const LabeledSample& S) {
  std::size_t best = 0, best_err = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t err = 0;
    for (const auto& [x, y] : S) err += test::threshold_oracle(grid[i], true, x[0]) != to_int(y);
    if (err < best_err) {
      best = i;
      best_err = err;
    }
  }
  return best;
}

WeightedClassSequence nested_thresholds(std::initializer_list<std::size_t> sizes) {
  std::vector<HypothesisClass> cls;
  std::vector<Discretization> grids;
  std::vector<std::optional<std::size_t>> dims;
  for (auto n : sizes) {
    cls.push_back(HypothesisClass(ThresholdFamily{}));
    grids.push_back(Discretization{Discretization::linspace(0, 1, n)});
    dims.push_back(1);
  }
  return WeightedClassSequence::with_default_weights(cls, grids, dims);
}

}  // namespace

TEST_CASE("ERM reaches zero on realizable samples") {
  auto g = test::rng(41);
  const HypothesisClass I(IntervalFamily{});
  for (int rep = 0; rep < 20; ++rep) {
    const auto members = enumerate_class(I, kGrid);
    const auto& star = members[g() % members.size()];
    const auto S = draw_sample(DataDistribution(UniformBox{{0.0}, {1.0}}, star), 50, SeedSpec{g(), "r", 0});
    CHECK(erm(members, S).empirical_error == 0.0);
  }
}

TEST_CASE("ERM breaks ties by canonical order") {
  const auto S = sample_1d({{0.2, 0}, {0.35, 1}, {0.5, 1}, {0.6, 1}, {0.7, 1},
                            {0.8, 1}, {0.9, 1}, {0.1, 0}, {0.05, 0}, {0.32, 0}});
  const HypothesisClass T(ThresholdFamily{});
  const auto members = enumerate_class(T, kGrid);
  REQUIRE(empirical_error(members[3], S) == doctest::Approx(0.1));
  REQUIRE(empirical_error(members[4], S) == doctest::Approx(0.1));
  for (int i = 0; i < 100; ++i) {
    const auto out = erm(T, S, kGrid);
    REQUIRE(out.member_index == 3);
    REQUIRE(out.member_index == threshold_scan(kGrid.grid, S));
    REQUIRE(std::get<Threshold>(out.hypothesis.kind()).theta == doctest::Approx(0.3));
  }
}

TEST_CASE("ERM output matches an independent threshold scan") {
  auto g = test::rng(42);
  for (int rep = 0; rep < 200; ++rep) {
    const auto S = test::random_sample_1d(g, 1 + g() % 60);
    CHECK(erm(HypothesisClass(ThresholdFamily{}), S, kGrid).member_index == threshold_scan(kGrid.grid, S));
  }
}

TEST_CASE("ERM optimality and shift invariance") {
  auto g = test::rng(43);
  const auto members = enumerate_class(HypothesisClass(IntervalUnionFamily{2}), kGrid);
  for (int rep = 0; rep < 100; ++rep) {
    const auto S = test::random_sample_1d(g, 1 + g() % 80);
    const auto out = erm(members, S);
    const auto counts = mistake_counts(members, S);
    const double c = test::uniform(g, -5, 5);
    std::size_t shifted_argmin = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double e = empirical_error(members[i], S);
      CHECK(out.empirical_error <= e);
      CHECK(counts[i] == mistakes(members[i], S));
      const double obj = static_cast<double>(counts[i]) / S.size() + c;
      if (obj < static_cast<double>(counts[shifted_argmin]) / S.size() + c) shifted_argmin = i;
    }
    CHECK(shifted_argmin == out.member_index);
  }
}

TEST_CASE("SRM with a single unit-weight class is ERM") {
  auto g = test::rng(44);
  const HypothesisClass T(ThresholdFamily{});
  const WeightedClassSequence seq({{T, kGrid, 1.0, 1}});
  for (int rep = 0; rep < 50; ++rep) {
    const auto S = test::random_sample_1d(g, 5 + g() % 50);
    const auto s = srm(seq, S, 0.1);
    const auto e = erm(T, S, kGrid);
    CHECK(s.hypothesis == e.hypothesis);
    CHECK(*s.class_index == 1);
  }
}

TEST_CASE("SRM picks the coarse class when it already contains the labeler") {
  const auto seq = nested_thresholds({3, 5, 9});
  const DataDistribution D(UniformBox{{0.0}, {1.0}}, Hypothesis(Threshold{0.5, Direction::Up}), 0.1);
  const auto S = draw_sample(D, 5000, SeedSpec{1, "srm", 0});
  const double delta = 0.05, C = 2.0;
  const auto out = srm(seq, S, delta, C);

  // Objective of every (n, h) from the penalty formula written out by hand.
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_n = 0;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const double pen = C * std::sqrt((1.0 - std::log(seq[n].weight * delta)) / 5000.0);
    for (const auto& h : enumerate_class(seq[n].cls, seq[n].grid)) {
      const double obj = empirical_error(h, S) + pen;
      if (obj < best) {
        best = obj;
        best_n = n + 1;
      }
    }
  }
  CHECK(*out.class_index == 1);
  CHECK(best_n == 1);
  CHECK(*out.objective == doctest::Approx(best).epsilon(1e-12));
  CHECK(std::get<Threshold>(out.hypothesis.kind()).theta == 0.5);
}

TEST_CASE("SRM objective is minimal over every enumerated candidate") {
  auto g = test::rng(45);
  const auto seq = nested_thresholds({2, 3, 5, 9, 17});
  for (int rep = 0; rep < 100; ++rep) {
    const auto S = test::random_sample_1d(g, 2 + g() % 40);
    const double delta = test::uniform(g, 0.01, 0.5);
    const double C = test::uniform(g, 0.1, 3);
    const auto out = srm(seq, S, delta, C);
    for (std::size_t n = 0; n < seq.size(); ++n) {
      const double pen = srm_penalty(1, seq[n].weight, delta, C, S.size());
      for (const auto& h : enumerate_class(seq[n].cls, seq[n].grid)) {
        CHECK(*out.objective <= empirical_error(h, S) + pen + 1e-15);
      }
    }
  }
}

TEST_CASE("SRM penalty validation and reporting") {
  CHECK(srm_penalty(1, 0.5, 0.1, 2.0, 100) == doctest::Approx(2 * std::sqrt((1 - std::log(0.05)) / 100)));
  CHECK_THROWS_AS(srm_penalty(1, 0.0, 0.1, 2.0, 100), InvalidArgument);
  CHECK_THROWS_AS(srm_penalty(1, 1.0, 1.0, 2.0, 100), InvalidArgument);
  const auto seq = nested_thresholds({3, 5});
  const auto out = srm(seq, sample_1d({{0.1, 0}, {0.9, 1}}), 0.1, 1.5);
  const auto j = to_json(out);
  CHECK(j["class_index"] == 1);
  CHECK(j["srm"]["C"] == 1.5);
  CHECK(j["srm"]["delta"] == 0.1);
  CHECK(j["srm"]["weights"].size() == 2);
  CHECK(j["srm"]["log_base"] == "e");

  const HypothesisClass T(ThresholdFamily{});
  const WeightedClassSequence undeclared({{T, kGrid, 0.5, std::nullopt}});
  CHECK_THROWS_AS(srm(undeclared, sample_1d({{0.1, 0}}), 0.1), InvalidArgument);
  const std::vector<std::size_t> dims{1};
  CHECK_NOTHROW(srm(undeclared, sample_1d({{0.1, 0}}), 0.1, 2.0, dims));
}

TEST_CASE("memorizer") {
  SUBCASE("whole domain, noiseless") {
    const auto S = sample_1d({{0, 1}, {1, 0}, {2, 1}, {3, 1}});
    CHECK(empirical_error(memorizer(S), S) == 0.0);
  }
  SUBCASE("unseen instances get the default") {
    const auto h = memorizer(sample_1d({{0, 1}}), Label::Zero);
    CHECK(h(Instance{5.0}) == Label::Zero);
    CHECK(memorizer(sample_1d({{0, 0}}), Label::One)(Instance{5.0}) == Label::One);
  }
  SUBCASE("ties get the default, majorities win") {
    const auto S = sample_1d({{0, 0}, {0, 1}, {1, 1}, {1, 1}, {1, 0}});
    CHECK(memorizer(S, Label::Zero)(Instance{0.0}) == Label::Zero);
    CHECK(memorizer(S, Label::One)(Instance{0.0}) == Label::One);
    CHECK(memorizer(S, Label::Zero)(Instance{1.0}) == Label::One);
  }
  SUBCASE("deterministic") {
    auto g = test::rng(46);
    const auto S = test::random_sample_1d(g, 30);
    CHECK(memorizer(S) == memorizer(S));
  }
}
