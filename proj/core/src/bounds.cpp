#include "slt/bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(fmt::format("{} must lie in (0, 1), got {}", name, v));
}

}  // namespace

void validate(const BoundParams& p) {
  check_unit(p.eps, "eps");
  check_unit(p.delta, "delta");
  if (p.m == 0) throw InvalidArgument("m must be >= 1");
  for (auto [v, name] : {std::pair{p.C, "C"}, {p.C1, "C1"}, {p.C2, "C2"}}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(fmt::format("{} must be positive", name));
  }
}

BoundReport sample_complexity(const BoundParams& params) {
  validate(params);
  BoundReport r;
  r.params = params;
  r.b = (static_cast<double>(params.d) - std::log(params.delta)) / (params.eps * params.eps);
  r.m_lower = params.C1 * r.b;
  r.m_upper = params.C2 * r.b;
  r.eps_uc = accuracy_bound(params.m, params.delta, params.d, params.C);
  return r;
}

double accuracy_bound(double m, double delta, std::size_t d, double C) {
  check_unit(delta, "delta");
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument(fmt::format("m must be positive, got {}", m));
  return C * std::sqrt((static_cast<double>(d) - std::log(delta)) / m);
}

double accuracy_bound(std::size_t m, double delta, std::size_t d, double C) {
  if (m == 0) throw InvalidArgument("m must be >= 1");
  return accuracy_bound(static_cast<double>(m), delta, d, C);
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

Representativeness is_eps_representative(const LabeledSample& S, std::span<const Hypothesis> members,
                                         std::span<const RiskValue> risks, double eps) {
  if (S.empty()) throw InvalidArgument("representativeness needs a nonempty sample");
  if (members.empty() || members.size() != risks.size()) {
    throw InvalidArgument("need one risk per class member");
  }
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be nonnegative");
  std::size_t worst = 0;
  double dev = -1.0;
  bool exceeded = false;
  bool straddles = false;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double d = std::abs(empirical_error(members[i], S) - risks[i].value);
    if (d > dev) {
      dev = d;
      worst = i;
    }
    const double hw = risks[i].analytic ? 0.0 : risks[i].half_width;
    if (d > eps + hw) {
      exceeded = true;
    } else if (hw > 0.0 && d >= eps - hw) {
      straddles = true;
    }
  }
  Representativeness r{Verdict::Pass, members[worst], worst, dev, risks[worst].half_width};
  if (exceeded) {
    r.verdict = Verdict::Fail;
  } else if (straddles) {
    r.verdict = Verdict::Indeterminate;
  }
  return r;
}

Representativeness is_eps_representative(const LabeledSample& S, std::span<const Hypothesis> members,
                                         const DataDistribution& D, double eps,
                                         const RiskOptions& options) {
  const auto risks = member_risks(D, members, options);
  return is_eps_representative(S, members, risks, eps);
}

Representativeness is_eps_representative(const LabeledSample& S, const HypothesisClass& H,
                                         const DataDistribution& D, double eps,
                                         const Discretization& grid, const RiskOptions& options) {
  const auto members = enumerate_class(H, grid);
  return is_eps_representative(S, members, D, eps, options);
}

ErrorDecomposition decompose_error(const DataDistribution& D, std::span<const Hypothesis> members,
                                   const Hypothesis& h_hat, const RiskOptions& options) {
  const auto best = min_risk_in_class(D, members, options);
  const double total = risk(D, h_hat, options).value;
  return {best.risk, total - best.risk, total};
}

ErrorDecomposition decompose_error(const DataDistribution& D, const HypothesisClass& H,
                                   const Hypothesis& h_hat, const Discretization& grid,
                                   const RiskOptions& options) {
  const auto members = enumerate_class(H, grid);
  return decompose_error(D, members, h_hat, options);
}

Json to_json(const BoundReport& r) {
  const auto& p = r.params;
  return {{"d", p.d},       {"eps", p.eps},         {"delta", p.delta},     {"m", p.m},
          {"b", r.b},       {"m_lower", r.m_lower}, {"m_upper", r.m_upper}, {"eps_uc", r.eps_uc},
          {"C", p.C},       {"C1", p.C1},           {"C2", p.C2},           {"log_base", r.log_base}};
}

std::string bound_csv_header() { return "d,eps,delta,m,b,m_lower,m_upper,eps_uc,C,C1,C2,log_base"; }

std::string bound_csv_row(const BoundReport& r) {
  const auto& p = r.params;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", p.d, format_double(p.eps),
                     format_double(p.delta), p.m, format_double(r.b), format_double(r.m_lower),
                     format_double(r.m_upper), format_double(r.eps_uc), format_double(p.C),
                     format_double(p.C1), format_double(p.C2), r.log_base);
}

}  // namespace slt
