#include <cmath>

#include "slt/bounds.hpp"
#include "slt/errors.hpp"
#include "slt/learners.hpp"
#include "support.hpp"

using namespace slt;

namespace {

BoundParams params(std::size_t d, double eps, double delta, std::size_t m = 1, double C = 2.0) {
  BoundParams p;
  p.d = d;
  p.eps = eps;
  p.delta = delta;
  p.m = m;
  p.C = C;
  return p;
}

DataDistribution unit_interval(Hypothesis labeler, double noise = 0.0) {
  return DataDistribution(UniformBox{{0.0}, {1.0}}, std::move(labeler), noise);
}

}  // namespace

TEST_CASE("sample complexity arithmetic") {
  const auto r = sample_complexity(params(1, 0.1, 0.05));
  CHECK(r.b == doctest::Approx((1 - std::log(0.05)) / 0.01).epsilon(1e-14));
  CHECK(r.b == doctest::Approx(399.5732273553991).epsilon(1e-12));
  CHECK(r.m_lower == doctest::Approx(r.b / 16).epsilon(1e-14));
  CHECK(r.m_upper == doctest::Approx(r.b * 64).epsilon(1e-14));
  CHECK(r.log_base == "e");

  CHECK(sample_complexity(params(1, 0.05, 0.05)).b == doctest::Approx(4 * r.b).epsilon(1e-12));
  CHECK(sample_complexity(params(2, 0.1, 0.05)).b - r.b == doctest::Approx(1 / 0.01).epsilon(1e-10));
}

TEST_CASE("sample complexity rejects out-of-range parameters") {
  CHECK_THROWS_AS(sample_complexity(params(1, 0.0, 0.05)), InvalidArgument);
  CHECK_THROWS_AS(sample_complexity(params(1, 1.0, 0.05)), InvalidArgument);
  CHECK_THROWS_AS(sample_complexity(params(1, 0.1, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(sample_complexity(params(1, 0.1, 1.5)), InvalidArgument);
}

TEST_CASE("accuracy bound arithmetic") {
  CHECK(accuracy_bound(std::size_t{400}, 0.05, 1, 2.0) ==
        doctest::Approx(2 * std::sqrt((1 - std::log(0.05)) / 400)).epsilon(1e-14));
  CHECK(accuracy_bound(std::size_t{400}, 0.05, 1, 2.0) == doctest::Approx(0.1999).epsilon(1e-3));
  CHECK(accuracy_bound(std::size_t{1600}, 0.05, 1, 2.0) ==
        doctest::Approx(accuracy_bound(std::size_t{400}, 0.05, 1, 2.0) / 2).epsilon(1e-14));
  CHECK(accuracy_bound(std::size_t{400}, 0.05 * 0.05, 1, 2.0) > accuracy_bound(std::size_t{400}, 0.05, 1, 2.0));
}

TEST_CASE("bounds are mutually consistent") {
  auto g = test::rng(51);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = g() % 10;
    const double eps = test::uniform(g, 0.01, 0.99), delta = test::uniform(g, 0.001, 0.99);
    const double b = sample_complexity(params(d, eps, delta)).b;
    CHECK(accuracy_bound(b, delta, d, 1.0) == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("bound report serialization") {
  const auto r = sample_complexity(params(1, 0.1, 0.05, 400));
  const auto j = to_json(r);
  for (const char* key : {"d", "eps", "delta", "m", "b", "m_lower", "m_upper", "eps_uc", "C", "C1", "C2", "log_base"}) {
    CHECK(j.contains(key));
  }
  CHECK(bound_csv_header() == "d,eps,delta,m,b,m_lower,m_upper,eps_uc,C,C1,C2,log_base");
  const auto row = bound_csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 11);
  CHECK(row.rfind(",e") == row.size() - 2);
}

TEST_CASE("exhaustive sample from a finite support is representative at every eps") {
  const std::vector<Instance> pts{Instance{0.1}, Instance{0.3}, Instance{0.6}, Instance{0.8}};
  const Hypothesis star = Threshold{0.5, Direction::Up};
  const DataDistribution D(FiniteUniform{pts}, star);
  LabeledSample S;
  for (const auto& p : pts) S.push_back({p, star(p)});
  const HypothesisClass I(IntervalFamily{});
  const Discretization grid{Discretization::linspace(0, 1, 11)};
  for (double eps : {1e-9, 0.01, 0.5, 1.0}) {
    const auto r = is_eps_representative(S, I, D, eps, grid);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.deviation == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("eps = 1 always passes") {
  auto g = test::rng(52);
  const auto members = enumerate_class(HypothesisClass(IntervalFamily{}), Discretization{Discretization::linspace(0, 1, 11)});
  const auto D = unit_interval(Threshold{0.3, Direction::Up}, 0.2);
  for (int rep = 0; rep < 50; ++rep) {
    const auto S = draw_sample(D, 1 + g() % 10, SeedSpec{g(), "e", 0});
    CHECK(is_eps_representative(S, members, D, 1.0).verdict == Verdict::Pass);
  }
}

TEST_CASE("representative samples make ERM near-optimal") {
  auto g = test::rng(53);
  std::size_t held = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const auto members = enumerate_class(HypothesisClass(IntervalFamily{}),
                                         Discretization{Discretization::linspace(0, 1, 3 + g() % 12)});
    const auto D = unit_interval(Interval{test::uniform(g, 0, 0.5), test::uniform(g, 0.5, 1)}, test::uniform(g, 0, 0.3));
    const auto S = draw_sample(D, 10 + g() % 300, SeedSpec{g(), "rep", 0});
    const double eps = test::uniform(g, 0.02, 0.3);
    const auto risks = member_risks(D, members);
    if (is_eps_representative(S, members, risks, eps).verdict != Verdict::Pass) continue;
    ++held;
    const auto out = erm(members, S);
    const auto dec = decompose_error(D, members, out.hypothesis);
    CHECK(dec.estimation <= 2 * eps + 1e-12);
  }
  CHECK(held >= 50);
}

TEST_CASE("Monte Carlo risks within the band of eps are indeterminate") {
  const std::vector<Hypothesis> members{Threshold{0.5, Direction::Up}};
  const auto S = test::sample_1d({{0.1, 0}, {0.9, 1}});
  const std::vector<RiskValue> near{{0.1, false, 0.01}};
  CHECK(is_eps_representative(S, members, near, 0.105).verdict == Verdict::Indeterminate);
  CHECK(is_eps_representative(S, members, near, 0.2).verdict == Verdict::Pass);
  CHECK(is_eps_representative(S, members, near, 0.05).verdict == Verdict::Fail);
  const std::vector<RiskValue> exact{{0.1, true, 0.0}};
  CHECK(is_eps_representative(S, members, exact, 0.105).verdict == Verdict::Pass);
  CHECK(is_eps_representative(S, members, exact, 0.095).verdict == Verdict::Fail);
}

TEST_CASE("error decomposition") {
  const HypothesisClass T(ThresholdFamily{});
  const Discretization grid{Discretization::linspace(0, 1, 11)};
  const auto members = enumerate_class(T, grid);
  SUBCASE("labeler off the grid by 0.05") {
    const auto D = unit_interval(Threshold{0.35, Direction::Up});
    const auto best = min_risk_in_class(D, members);
    const auto dec = decompose_error(D, members, best.hypothesis);
    CHECK(dec.approximation == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(dec.estimation == 0.0);
    CHECK(dec.total == doctest::Approx(0.05).epsilon(1e-12));
  }
  SUBCASE("identity and ranges for arbitrary h") {
    auto g = test::rng(54);
    for (int rep = 0; rep < 200; ++rep) {
      const auto D = unit_interval(Interval{test::uniform(g, 0, 0.5), test::uniform(g, 0.5, 1)}, test::uniform(g, 0, 0.4));
      const auto& h = members[g() % members.size()];
      const auto dec = decompose_error(D, members, h);
      CHECK(std::abs(dec.approximation + dec.estimation - dec.total) <= 1e-12);
      CHECK(dec.estimation >= 0.0);
      CHECK(dec.total >= 0.0);
      CHECK(dec.total <= 1.0);
    }
  }
}
