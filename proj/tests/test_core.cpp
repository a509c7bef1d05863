#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "slt/errors.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/serialize.hpp"
#include "support.hpp"

using namespace slt;
using slt::test::sample_1d;

TEST_CASE("predict follows each family's definition") {
  CHECK(predict(Threshold{0.5, Direction::Up}, Instance{0.7}) == Label::One);
  CHECK(predict(Threshold{0.5, Direction::Up}, Instance{0.2}) == Label::Zero);
  CHECK(predict(Threshold{0.5, Direction::Down}, Instance{0.2}) == Label::One);
  CHECK(predict(Halfspace{{1, 1}, -1}, Instance{0.5, 0.5}) == Label::One);
  CHECK(predict(Halfspace{{1, 1}, -1}, Instance{0.4, 0.5}) == Label::Zero);
  CHECK(predict(Sine{std::numbers::pi}, Instance{0.5}) == to_label(std::sin(std::numbers::pi * 0.5) >= 0));
  CHECK(predict(Sine{std::numbers::pi}, Instance{1.5}) == Label::Zero);
  CHECK(predict(Interval{0.2, 0.4}, Instance{0.2}) == Label::One);
  CHECK(predict(Interval{0.2, 0.4}, Instance{0.41}) == Label::Zero);
  CHECK(predict(IntervalUnion{{{0, 0.1}, {0.5, 0.6}}}, Instance{0.55}) == Label::One);
  CHECK(predict(IntervalUnion{{{0, 0.1}, {0.5, 0.6}}}, Instance{0.3}) == Label::Zero);
  CHECK(predict(Rectangle{{0, 0}, {1, 1}}, Instance{1, 0}) == Label::One);
  CHECK(predict(Rectangle{{0, 0}, {1, 1}}, Instance{1.01, 0}) == Label::Zero);
}

TEST_CASE("boundary points map to label 1") {
  CHECK(predict(Threshold{0.5, Direction::Up}, Instance{0.5}) == Label::One);
  CHECK(predict(Threshold{0.5, Direction::Down}, Instance{0.5}) == Label::One);
  CHECK(predict(Sine{1.0}, Instance{0.0}) == Label::One);
  CHECK(predict(Halfspace{{1}, -0.25}, Instance{0.25}) == Label::One);
}

TEST_CASE("dimension mismatch names both dimensions") {
  const Hypothesis h = Halfspace{{1, 1}, 0};
  try {
    (void)predict(h, Instance{0.5});
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(e.expected() == 2);
    CHECK(e.actual() == 1);
    const std::string msg = e.what();
    CHECK(msg.find('2') != std::string::npos);
    CHECK(msg.find('1') != std::string::npos);
  }
  LabeledSample S;
  S.push_back({Instance{0.1}, Label::One});
  CHECK_THROWS_AS(S.push_back({Instance{0.1, 0.2}, Label::One}), DimensionMismatch);
}

TEST_CASE("instances reject non-finite coordinates and empty vectors") {
  CHECK_THROWS_AS(Instance{std::nan("")}, InvalidArgument);
  CHECK_THROWS_AS(Instance(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("empirical error examples") {
  const Hypothesis h = Threshold{0.5, Direction::Up};
  CHECK(empirical_error(h, sample_1d({{0.2, 0}, {0.7, 1}})) == 0.0);
  CHECK(empirical_error(h, sample_1d({{0.2, 0}, {0.7, 1}, {0.6, 0}, {0.9, 1}})) == 0.25);
  CHECK_THROWS_AS((void)empirical_error(h, LabeledSample{}), InvalidArgument);
}

TEST_CASE("empirical error matches an independent recount") {
  auto g = test::rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const double theta = test::uniform(g);
    const bool up = g() & 1U;
    const auto S = test::random_sample_1d(g, 100);
    std::size_t wrong = 0;
    for (const auto& [x, y] : S) wrong += test::threshold_oracle(theta, up, x[0]) != to_int(y);
    const Hypothesis h = Threshold{theta, up ? Direction::Up : Direction::Down};
    CHECK(mistakes(h, S) == wrong);
    CHECK(empirical_error(h, S) == static_cast<double>(wrong) / 100.0);
  }
}

TEST_CASE("empirical error properties") {
  auto g = test::rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    const Hypothesis h = Interval{test::uniform(g, 0, 0.5), test::uniform(g, 0.5, 1)};
    auto S = test::random_sample_1d(g, 1 + g() % 40);
    const double e = empirical_error(h, S);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);

    std::vector<Example> pairs(S.begin(), S.end());
    std::shuffle(pairs.begin(), pairs.end(), g);
    CHECK(empirical_error(h, LabeledSample(pairs)) == e);

    std::vector<Example> fitted, flipped;
    for (const auto& p : pairs) {
      fitted.push_back({p.x, h(p.x)});
      flipped.push_back({p.x, flip(h(p.x))});
    }
    CHECK(empirical_error(h, LabeledSample(fitted)) == 0.0);
    CHECK(empirical_error(h, LabeledSample(flipped)) == 1.0);
    CHECK((e == 0.0) == (LabeledSample(pairs) == LabeledSample(fitted)));
  }
}

TEST_CASE("predict is pure") {
  const Hypothesis h = Sine{123.456};
  const Instance x{0.0314};
  const Label first = predict(h, x);
  for (int i = 0; i < 1000; ++i) REQUIRE(predict(h, x) == first);
}

TEST_CASE("class enumeration counts") {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  const HypothesisClass both(ThresholdFamily{Directions::Both});
  CHECK(enumerate_class(both, Discretization{grid}).size() == 18);
  CHECK(class_size(both, Discretization{grid}) == 18);

  // Brute-force count of closed intervals a <= b with endpoints on a 10-point grid.
  const auto ten = Discretization::linspace(0, 1, 10);
  std::size_t expected = 0;
  for (double a : ten) {
    for (double b : ten) expected += a <= b;
  }
  CHECK(expected == 55);
  const auto intervals = enumerate_class(HypothesisClass(IntervalFamily{}), Discretization{ten});
  CHECK(intervals.size() == expected);
  for (const auto& h : intervals) {
    const auto& iv = std::get<Interval>(h.kind());
    CHECK(iv.a <= iv.b);
  }

  const auto rects = enumerate_class(HypothesisClass(RectangleFamily{2}), Discretization{{0, 0.5, 1}});
  CHECK(rects.size() == 36);
  const auto halfs =
      enumerate_class(HypothesisClass(HalfspaceFamily{2}), Discretization{{-1, 1}, {0, 0.5, 1}});
  CHECK(halfs.size() == 12);
}

TEST_CASE("explicit finite class keeps stored order") {
  std::vector<Hypothesis> members;
  for (int i = 0; i < 5; ++i) members.push_back(Threshold{0.1 * (5 - i), Direction::Up});
  const auto H = HypothesisClass::finite(members);
  CHECK(enumerate_class(H, Discretization{}) == members);
}

TEST_CASE("finite class rejects extensional duplicates on a probe") {
  const std::vector<Hypothesis> members{Threshold{0.25, Direction::Up}, Threshold{0.3, Direction::Up}};
  const std::vector<Instance> probe{Instance{0.0}, Instance{0.5}, Instance{1.0}};
  CHECK_THROWS_AS(HypothesisClass::finite(members, probe), InvalidArgument);
  CHECK(extensional_duplicates(members, probe).size() == 1);
  const std::vector<Instance> finer{Instance{0.27}};
  CHECK_NOTHROW(HypothesisClass::finite(members, finer));
}

TEST_CASE("enumeration budget is enforced and reported") {
  Discretization d{Discretization::linspace(0, 1, 100)};
  d.budget = 1000;
  try {
    (void)enumerate_class(HypothesisClass(IntervalFamily{}), d);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.budget() == 1000);
    CHECK(e.required() == 5050);
    const std::string msg = e.what();
    CHECK(msg.find("1000") != std::string::npos);
    CHECK(msg.find("5050") != std::string::npos);
  }
}

TEST_CASE("grids must be strictly increasing and inside the declared range") {
  CHECK_THROWS_AS((void)enumerate_class(HypothesisClass(ThresholdFamily{}), Discretization{{0.5, 0.2}}),
                  InvalidArgument);
  CHECK_THROWS_AS((void)enumerate_class(HypothesisClass(ThresholdFamily{Directions::Up, {0, 1}}),
                                        Discretization{{0.5, 2.0}}),
                  InvalidArgument);
}

TEST_CASE("enumeration is deterministic") {
  const HypothesisClass H(HalfspaceFamily{2});
  const Discretization d{{-1, 0, 1}, Discretization::linspace(-1, 1, 5)};
  const auto a = enumerate_class(H, d);
  const auto b = enumerate_class(H, d);
  CHECK(a == b);
  Json ja = Json::array(), jb = Json::array();
  for (const auto& h : a) ja.push_back(to_json(h));
  for (const auto& h : b) jb.push_back(to_json(h));
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("weighted sequences validate weights") {
  const HypothesisClass T(ThresholdFamily{});
  const Discretization d{{0.5}};
  CHECK_THROWS_AS(WeightedClassSequence({{T, d, 0.7, 1}, {T, d, 0.7, 1}}), InvalidArgument);
  CHECK_THROWS_AS(WeightedClassSequence({{T, d, 0.0, 1}}), InvalidArgument);
  const auto seq = WeightedClassSequence::with_default_weights({T, T, T}, {d, d, d});
  // 2^-n renormalized over three classes: 4/7, 2/7, 1/7.
  CHECK(seq[0].weight == doctest::Approx(4.0 / 7).epsilon(1e-15));
  CHECK(seq[1].weight == doctest::Approx(2.0 / 7).epsilon(1e-15));
  CHECK(seq[2].weight == doctest::Approx(1.0 / 7).epsilon(1e-15));
}

TEST_CASE("hypothesis JSON round-trips") {
  const std::vector<Hypothesis> hs{
      Threshold{0.1, Direction::Down},
      Interval{0.2, 0.3},
      IntervalUnion{{{0.1, 0.2}, {0.4, 0.45}}},
      Rectangle{{0, 0.1}, {0.5, 0.6}},
      Halfspace{{1, -0.5}, 0.1 + 0.2},
      Sine{1e-3 / 3},
      LookupTable{1, {{Instance{0.5}, Label::One}}, Label::Zero},
  };
  for (const auto& h : hs) {
    const auto text = to_json(h).dump();
    CHECK(hypothesis_from_json(Json::parse(text)) == h);
  }
}

TEST_CASE("class and grid JSON round-trip") {
  const HypothesisClass H(HalfspaceFamily{3, {-1, 1}, {-2, 2}});
  CHECK(class_from_json(to_json(H)) == H);
  const Discretization d{{0.1, 0.2}, {0.3}, 77};
  CHECK(discretization_from_json(to_json(d)) == d);
  const auto lin = discretization_from_json(Json::parse(R"({"grid": {"linspace": [0, 1, 5]}})"));
  CHECK(lin.grid == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
}

TEST_CASE("JSON parsers reject unknown keys with a path") {
  try {
    (void)class_from_json(Json::parse(R"({"family": "intervals", "colour": 1})"), "$.class");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$.class.colour") != std::string::npos);
  }
  CHECK_THROWS_AS(hypothesis_from_json(Json::parse(R"({"kind": "threshold", "theta": "x"})")), ParseError);
  CHECK_THROWS_AS(hypothesis_from_json(Json::parse(R"({"kind": "parabola"})")), ParseError);
}

TEST_CASE("sample JSON round-trips") {
  auto g = test::rng(3);
  const auto S = test::random_sample_1d(g, 25);
  const auto j = to_json(S);
  CHECK(j["m"] == 25);
  CHECK(sample_from_json(Json::parse(j.dump())) == S);
}

TEST_CASE("CSV ingestion") {
  SUBCASE("2-column file of 10 rows") {
    std::stringstream in("x,y\n0.1,0\n0.2,1\n0.3,0\n0.4,1\n0.5,0\n0.6,1\n0.7,0\n0.8,1\n0.9,0\n1.0,1\n");
    const auto S = read_sample_csv(in, CsvSchema{1});
    CHECK(S.size() == 10);
    CHECK(S[3].x == Instance{0.4});
    CHECK(S[3].y == Label::One);
  }
  SUBCASE("label 2 on row 7 is rejected naming the row and the value") {
    std::stringstream in("x,y\n0.1,0\n0.2,1\n0.3,0\n0.4,1\n0.5,0\n0.6,1\n0.7,2\n");
    try {
      (void)read_sample_csv(in, CsvSchema{1});
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 7") != std::string::npos);
      CHECK(msg.find("'2'") != std::string::npos);
    }
  }
  SUBCASE("malformed rows name the row") {
    std::stringstream in("x,y\n0.1,0\nabc,1\n");
    try {
      (void)read_sample_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SUBCASE("header is required") {
    std::stringstream in("0.1,0\n0.2,1\n");
    CHECK_THROWS_AS((void)read_sample_csv(in), ParseError);
  }
  SUBCASE("schema dimension must match the header") {
    std::stringstream in("x1,x2,y\n0.1,0.2,0\n");
    CHECK_THROWS_AS((void)read_sample_csv(in, CsvSchema{1}), ParseError);
  }
  SUBCASE("export then ingest is lossless") {
    auto g = test::rng(4);
    LabeledSample S;
    for (int i = 0; i < 50; ++i) {
      S.push_back({Instance{test::uniform(g, -1e3, 1e3), test::uniform(g) * 1e-9},
                   label_from_int(static_cast<int>(g() & 1U))});
    }
    std::stringstream io;
    write_sample_csv(io, S);
    CHECK(read_sample_csv(io, CsvSchema{2}) == S);
  }
}
