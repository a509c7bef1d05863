#include "slt/distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

using Segments = std::vector<Interval>;

void check_distinct(std::span<const Instance> points, const char* what) {
  std::vector<Instance> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument(fmt::format("{} lists the same point twice", what));
  }
}

std::size_t common_dimension(std::span<const Instance> points, const char* what) {
  if (points.empty()) throw InvalidArgument(fmt::format("{} must list at least one point", what));
  const std::size_t d = points.front().dimension();
  for (const auto& p : points) {
    if (p.dimension() != d) throw DimensionMismatch(d, p.dimension());
  }
  check_distinct(points, what);
  return d;
}

// ---- 1D: hypotheses as finite unions of closed intervals inside [lo, hi] ----

constexpr std::size_t kMaxSinePeriods = 1'000'000;

std::optional<Segments> segments_1d(const Hypothesis& h, double lo, double hi) {
  struct V {
    double lo, hi;
    std::optional<Segments> operator()(const Threshold& t) const {
      return t.direction == Direction::Up ? Segments{{t.theta, hi}} : Segments{{lo, t.theta}};
    }
    std::optional<Segments> operator()(const Interval& i) const { return Segments{i}; }
    std::optional<Segments> operator()(const IntervalUnion& u) const { return u.parts; }
    std::optional<Segments> operator()(const Rectangle& r) const { return Segments{{r.lo[0], r.hi[0]}}; }
    std::optional<Segments> operator()(const Halfspace& h) const {
      const double w = h.w[0];
      if (w == 0.0) return h.b >= 0.0 ? Segments{{lo, hi}} : Segments{};
      const double root = -h.b / w;
      return w > 0.0 ? Segments{{root, hi}} : Segments{{lo, root}};
    }
    std::optional<Segments> operator()(const Sine& s) const {
      if (s.alpha == 0.0) return Segments{{lo, hi}};
      const double a = std::abs(s.alpha);
      const double period = 2.0 * std::numbers::pi / a;
      if ((hi - lo) / period > static_cast<double>(kMaxSinePeriods)) return std::nullopt;
      // alpha > 0: [2k pi, (2k+1) pi] / alpha; alpha < 0: [(2k-1) pi, 2k pi] / |alpha|.
      const double shift = s.alpha > 0.0 ? 0.0 : -0.5 * period;
      Segments out;
      const double k0 = std::floor((lo - shift) / period) - 1.0;
      for (double k = k0;; k += 1.0) {
        const double start = shift + k * period;
        if (start > hi) break;
        out.push_back({start, start + 0.5 * period});
      }
      return out;
    }
    std::optional<Segments> operator()(const LookupTable& t) const {
      return t.fallback == Label::One ? Segments{{lo, hi}} : Segments{};
    }
  };
  auto segs = std::visit(V{lo, hi}, h.kind());
  if (!segs) return segs;
  Segments clipped;
  for (auto s : *segs) {
    s.a = std::max(s.a, lo);
    s.b = std::min(s.b, hi);
    if (s.a < s.b) clipped.push_back(s);
  }
  return clipped;
}

bool covers(const Segments& segs, double x) {
  return std::any_of(segs.begin(), segs.end(), [&](const Interval& s) { return s.a <= x && x <= s.b; });
}

/// Length of the symmetric difference, summed over elementary pieces so a
/// disagreement region [p, q) contributes exactly q - p.
double symmetric_difference_length(const Segments& A, const Segments& B, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (const auto* segs : {&A, &B}) {
    for (const auto& s : *segs) {
      cuts.push_back(s.a);
      cuts.push_back(s.b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (covers(A, mid) != covers(B, mid)) total += cuts[i + 1] - cuts[i];
  }
  return total;
}

// ---- 2D: hypotheses as intersections of halfplanes a.x + c >= 0 ----

struct HalfPlane {
  double ax, ay, c;
};
struct Region {
  bool empty = false;
  std::vector<HalfPlane> planes;  // empty list and !empty: whole plane
};
using Polygon = std::vector<std::array<double, 2>>;

std::optional<Region> region_2d(const Hypothesis& h) {
  if (const auto* r = std::get_if<Rectangle>(&h.kind())) {
    return Region{false,
                  {{1, 0, -r->lo[0]}, {-1, 0, r->hi[0]}, {0, 1, -r->lo[1]}, {0, -1, r->hi[1]}}};
  }
  if (const auto* s = std::get_if<Halfspace>(&h.kind())) {
    if (s->w[0] == 0.0 && s->w[1] == 0.0) return Region{s->b < 0.0, {}};
    return Region{false, {{s->w[0], s->w[1], s->b}}};
  }
  if (const auto* t = std::get_if<LookupTable>(&h.kind())) return Region{t->fallback == Label::Zero, {}};
  return std::nullopt;
}

Polygon clip(const Polygon& poly, const HalfPlane& hp) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    const double fp = hp.ax * p[0] + hp.ay * p[1] + hp.c;
    const double fq = hp.ax * q[0] + hp.ay * q[1] + hp.c;
    if (fp >= 0.0) out.push_back(p);
    if ((fp >= 0.0) != (fq >= 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

double area(const Polygon& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(s);
}

double box_area_within(const UniformBox& box, std::initializer_list<const Region*> regions) {
  Polygon poly{{box.lo[0], box.lo[1]}, {box.hi[0], box.lo[1]}, {box.hi[0], box.hi[1]}, {box.lo[0], box.hi[1]}};
  for (const Region* r : regions) {
    if (r->empty) return 0.0;
    for (const auto& hp : r->planes) {
      poly = clip(poly, hp);
      if (poly.size() < 3) return 0.0;
    }
  }
  return area(poly);
}

std::optional<double> continuous_disagreement(const UniformBox& box, const Hypothesis& h,
                                              const Hypothesis& g) {
  if (box.lo.size() == 1) {
    auto A = segments_1d(h, box.lo[0], box.hi[0]);
    auto B = segments_1d(g, box.lo[0], box.hi[0]);
    if (!A || !B) return std::nullopt;
    return symmetric_difference_length(*A, *B, box.lo[0], box.hi[0]) / (box.hi[0] - box.lo[0]);
  }
  if (box.lo.size() == 2) {
    auto A = region_2d(h);
    auto B = region_2d(g);
    if (!A || !B) return std::nullopt;
    const double total = (box.hi[0] - box.lo[0]) * (box.hi[1] - box.lo[1]);
    const double pa = box_area_within(box, {&*A}) / total;
    const double pb = box_area_within(box, {&*B}) / total;
    const double pab = box_area_within(box, {&*A, &*B}) / total;
    return std::clamp(pa + pb - 2.0 * pab, 0.0, 1.0);
  }
  return std::nullopt;
}

Json points_json(std::span<const Instance> pts) {
  Json j = Json::array();
  for (const auto& p : pts) j.push_back(to_json(p));
  return j;
}

}  // namespace

DataDistribution::DataDistribution(Marginal marginal, Labeler labeler, double noise_rate)
    : marginal_(std::move(marginal)), labeler_(std::move(labeler)), noise_(noise_rate) {
  if (!(noise_ >= 0.0 && noise_ < 0.5)) {
    throw InvalidArgument(fmt::format("noise rate must lie in [0, 0.5), got {}", noise_));
  }
  if (auto* box = std::get_if<UniformBox>(&marginal_)) {
    if (box->lo.empty() || box->lo.size() != box->hi.size()) {
      throw InvalidArgument("uniform box needs lo and hi of equal nonzero dimension");
    }
    for (std::size_t k = 0; k < box->lo.size(); ++k) {
      if (!std::isfinite(box->lo[k]) || !std::isfinite(box->hi[k]) || !(box->lo[k] < box->hi[k])) {
        throw InvalidArgument(fmt::format("uniform box axis {} needs finite lo < hi", k));
      }
    }
    dimension_ = box->lo.size();
  } else if (auto* fu = std::get_if<FiniteUniform>(&marginal_)) {
    dimension_ = common_dimension(fu->points, "finite uniform marginal");
  } else {
    auto& pm = std::get<PointMasses>(marginal_);
    dimension_ = common_dimension(pm.points, "point-mass marginal");
    if (pm.probabilities.size() != pm.points.size()) {
      throw InvalidArgument("point-mass marginal needs one probability per point");
    }
    double sum = 0.0;
    for (double p : pm.probabilities) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("probability {} outside [0, 1]", p));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument(fmt::format("point-mass probabilities sum to {}, not 1", sum));
    }
  }

  if (auto* h = std::get_if<Hypothesis>(&labeler_)) {
    if (h->dimension() != dimension_) throw DimensionMismatch(dimension_, h->dimension());
  } else {
    auto& table = std::get<ConditionalTable>(labeler_);
    if (!has_finite_support()) {
      throw InvalidArgument("a conditional-table labeler needs a finite marginal");
    }
    if (table.p_one.size() != table.points.size()) {
      throw InvalidArgument("conditional table needs one probability per point");
    }
    if (common_dimension(table.points, "conditional table") != dimension_) {
      throw DimensionMismatch(dimension_, table.points.front().dimension());
    }
    for (double p : table.p_one) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("p(y=1|x) = {} outside [0, 1]", p));
    }
    // Sort for lookup; keep pairs aligned.
    std::vector<std::size_t> order(table.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return table.points[a] < table.points[b]; });
    ConditionalTable sorted;
    for (auto i : order) {
      sorted.points.push_back(table.points[i]);
      sorted.p_one.push_back(table.p_one[i]);
    }
    table = std::move(sorted);
    for (const auto& [x, _] : support()) {
      if (!std::binary_search(table.points.begin(), table.points.end(), x)) {
        throw InvalidArgument("conditional table does not cover every support point");
      }
    }
  }
}

bool DataDistribution::has_finite_support() const noexcept {
  return !std::holds_alternative<UniformBox>(marginal_);
}

std::vector<std::pair<Instance, double>> DataDistribution::support() const {
  std::vector<std::pair<Instance, double>> out;
  if (auto* fu = std::get_if<FiniteUniform>(&marginal_)) {
    const double p = 1.0 / static_cast<double>(fu->points.size());
    for (const auto& x : fu->points) out.emplace_back(x, p);
  } else if (auto* pm = std::get_if<PointMasses>(&marginal_)) {
    for (std::size_t i = 0; i < pm->points.size(); ++i) out.emplace_back(pm->points[i], pm->probabilities[i]);
  } else {
    throw InvalidArgument("uniform box marginal has no finite support");
  }
  return out;
}

double DataDistribution::noiseless_p_one(const Instance& x) const {
  if (auto* h = std::get_if<Hypothesis>(&labeler_)) return to_int((*h)(x));
  const auto& table = std::get<ConditionalTable>(labeler_);
  auto it = std::lower_bound(table.points.begin(), table.points.end(), x);
  if (it == table.points.end() || !(*it == x)) {
    throw InvalidArgument("instance is outside the conditional table's domain");
  }
  return table.p_one[static_cast<std::size_t>(it - table.points.begin())];
}

double DataDistribution::p_one(const Instance& x) const {
  const double q = noiseless_p_one(x);
  return (1.0 - noise_) * q + noise_ * (1.0 - q);
}

Example DataDistribution::draw(std::mt19937_64& g) const {
  Instance x;
  if (auto* box = std::get_if<UniformBox>(&marginal_)) {
    std::vector<double> c(box->lo.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = box->lo[k] + (box->hi[k] - box->lo[k]) * uniform01(g);
    x = Instance(std::move(c));
  } else if (auto* fu = std::get_if<FiniteUniform>(&marginal_)) {
    x = fu->points[uniform_index(g, fu->points.size())];
  } else {
    const auto& pm = std::get<PointMasses>(marginal_);
    const double u = uniform01(g);
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < pm.points.size(); ++i) {
      acc += pm.probabilities[i];
      if (u < acc) break;
    }
    x = pm.points[i];
  }
  Label y;
  if (auto* h = std::get_if<Hypothesis>(&labeler_)) {
    y = h->evaluate(x.coords());
  } else {
    y = to_label(uniform01(g) < noiseless_p_one(x));
  }
  if (uniform01(g) < noise_) y = flip(y);
  return {std::move(x), y};
}

LabeledSample draw_sample(const DataDistribution& D, std::size_t m, const SeedSpec& seed) {
  if (m == 0) throw InvalidArgument("sample size m must be >= 1");
  auto g = seed.engine();
  std::vector<Example> pairs;
  pairs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) pairs.push_back(D.draw(g));
  return LabeledSample(std::move(pairs));
}

std::optional<double> true_risk(const DataDistribution& D, const Hypothesis& h) {
  if (h.dimension() != D.dimension()) throw DimensionMismatch(D.dimension(), h.dimension());
  const double eta = D.noise_rate();
  if (D.has_finite_support()) {
    if (const auto* g = std::get_if<Hypothesis>(&D.labeler())) {
      if (const auto* fu = std::get_if<FiniteUniform>(&D.marginal())) {
        std::size_t disagree = 0;
        for (const auto& x : fu->points) disagree += h(x) != (*g)(x);
        const double rho = static_cast<double>(disagree) / static_cast<double>(fu->points.size());
        return (1.0 - eta) * rho + eta * (1.0 - rho);
      }
      double rho = 0.0;
      for (const auto& [x, p] : D.support()) rho += h(x) != (*g)(x) ? p : 0.0;
      return std::clamp((1.0 - eta) * rho + eta * (1.0 - rho), 0.0, 1.0);
    }
    double risk = 0.0;
    for (const auto& [x, p] : D.support()) {
      const double q = D.p_one(x);
      risk += p * (h(x) == Label::One ? 1.0 - q : q);
    }
    return std::clamp(risk, 0.0, 1.0);
  }
  const auto* g = std::get_if<Hypothesis>(&D.labeler());
  if (!g) return std::nullopt;
  auto rho = continuous_disagreement(std::get<UniformBox>(D.marginal()), h, *g);
  if (!rho) return std::nullopt;
  return (1.0 - eta) * *rho + eta * (1.0 - *rho);
}

double hoeffding_half_width(std::size_t n, double alpha) {
  if (n == 0) throw InvalidArgument("Hoeffding band needs n >= 1");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

McRisk mc_risk(const DataDistribution& D, const Hypothesis& h, std::size_t n, const SeedSpec& seed) {
  if (n == 0) throw InvalidArgument("Monte Carlo risk needs n >= 1");
  if (h.dimension() != D.dimension()) throw DimensionMismatch(D.dimension(), h.dimension());
  auto g = seed.engine();
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = D.draw(g);
    errors += h.evaluate(x.coords()) != y;
  }
  return {static_cast<double>(errors) / static_cast<double>(n), hoeffding_half_width(n), n};
}

RiskValue risk(const DataDistribution& D, const Hypothesis& h, const RiskOptions& options) {
  if (auto exact = true_risk(D, h)) return {*exact, true, 0.0};
  if (!options.mc_draws) {
    throw NoAnalyticRisk(fmt::format("no analytic risk for a '{}' hypothesis under this distribution "
                                     "and no Monte Carlo fallback configured",
                                     h.tag()));
  }
  const auto mc = mc_risk(D, h, *options.mc_draws, options.seed);
  return {mc.estimate, false, mc.half_width};
}

std::vector<RiskValue> member_risks(const DataDistribution& D, std::span<const Hypothesis> members,
                                    const RiskOptions& options) {
  std::vector<RiskValue> out;
  out.reserve(members.size());
  for (const auto& h : members) out.push_back(risk(D, h, options));
  return out;
}

ClassMinimum min_risk_in_class(const DataDistribution& D, std::span<const Hypothesis> members,
                               const RiskOptions& options) {
  if (members.empty()) throw InvalidArgument("class has no members");
  const auto risks = member_risks(D, members, options);
  std::size_t best = 0;
  for (std::size_t i = 1; i < risks.size(); ++i) {
    if (risks[i].value < risks[best].value) best = i;
  }
  return {members[best], best, risks[best].value, risks[best].analytic};
}

ClassMinimum min_risk_in_class(const DataDistribution& D, const HypothesisClass& H,
                               const Discretization& grid, const RiskOptions& options) {
  const auto members = enumerate_class(H, grid);
  return min_risk_in_class(D, members, options);
}

Json to_json(const DataDistribution& D) {
  Json marginal;
  if (const auto* box = std::get_if<UniformBox>(&D.marginal())) {
    marginal = {{"kind", "uniform_box"}, {"lo", box->lo}, {"hi", box->hi}};
  } else if (const auto* fu = std::get_if<FiniteUniform>(&D.marginal())) {
    marginal = {{"kind", "finite_uniform"}, {"points", points_json(fu->points)}};
  } else {
    const auto& pm = std::get<PointMasses>(D.marginal());
    marginal = {{"kind", "point_masses"}, {"points", points_json(pm.points)},
                {"probabilities", pm.probabilities}};
  }
  Json labeler;
  if (const auto* h = std::get_if<Hypothesis>(&D.labeler())) {
    labeler = to_json(*h);
  } else {
    const auto& t = std::get<ConditionalTable>(D.labeler());
    labeler = {{"kind", "conditional_table"}, {"points", points_json(t.points)}, {"p_one", t.p_one}};
  }
  return {{"marginal", marginal}, {"labeler", labeler}, {"noise", D.noise_rate()}};
}

DataDistribution distribution_from_json(const Json& j, const std::string& path) {
  require_known_keys(j, {"marginal", "labeler", "noise"}, path);
  auto fail = [](const std::string& p, std::string_view msg) -> void {
    throw ParseError(fmt::format("{}: {}", p, msg));
  };
  auto numbers = [&](const Json& v, const std::string& p) {
    if (!v.is_array()) fail(p, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(fmt::format("{}[{}]", p, i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  };
  auto points = [&](const Json& v, const std::string& p) {
    if (!v.is_array()) fail(p, "expected an array of points");
    std::vector<Instance> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(v[i].is_number() ? Instance{v[i].get<double>()}
                                     : instance_from_json(v[i], fmt::format("{}[{}]", p, i)));
    }
    return out;
  };
  auto need = [&](const Json& v, const char* key, const std::string& p) -> const Json& {
    if (!v.is_object() || !v.contains(key)) fail(p, fmt::format("missing key '{}'", key));
    return v.at(key);
  };

  const std::string mp = path + ".marginal";
  const auto& mj = need(j, "marginal", path);
  const auto& mkind = need(mj, "kind", mp);
  Marginal marginal = UniformBox{};
  if (mkind == "uniform_box") {
    require_known_keys(mj, {"kind", "lo", "hi"}, mp);
    marginal = UniformBox{numbers(need(mj, "lo", mp), mp + ".lo"), numbers(need(mj, "hi", mp), mp + ".hi")};
  } else if (mkind == "finite_uniform") {
    require_known_keys(mj, {"kind", "points"}, mp);
    marginal = FiniteUniform{points(need(mj, "points", mp), mp + ".points")};
  } else if (mkind == "point_masses") {
    require_known_keys(mj, {"kind", "points", "probabilities"}, mp);
    marginal = PointMasses{points(need(mj, "points", mp), mp + ".points"),
                           numbers(need(mj, "probabilities", mp), mp + ".probabilities")};
  } else {
    fail(mp + ".kind", "expected uniform_box, finite_uniform or point_masses");
  }

  const std::string lp = path + ".labeler";
  const auto& lj = need(j, "labeler", path);
  std::optional<Labeler> labeler;
  if (need(lj, "kind", lp) == "conditional_table") {
    require_known_keys(lj, {"kind", "points", "p_one"}, lp);
    labeler = ConditionalTable{points(need(lj, "points", lp), lp + ".points"),
                               numbers(need(lj, "p_one", lp), lp + ".p_one")};
  } else {
    labeler = hypothesis_from_json(lj, lp);
  }

  double noise = 0.0;
  if (auto it = j.find("noise"); it != j.end()) {
    if (!it->is_number()) fail(path + ".noise", "expected a number");
    noise = it->get<double>();
  }
  try {
    return DataDistribution(std::move(marginal), std::move(*labeler), noise);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace slt
