#include "slt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

void check(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InvalidArgument("binomial bound needs at least one trial");
  if (successes > trials) throw InvalidArgument("successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
}

}  // namespace

double binomial_lower_bound(std::size_t successes, std::size_t trials, double confidence) {
  check(successes, trials, confidence);
  if (successes == 0) return 0.0;
  const boost::math::beta_distribution<double> beta(static_cast<double>(successes),
                                                    static_cast<double>(trials - successes + 1));
  return boost::math::quantile(beta, 1.0 - confidence);
}

double binomial_upper_bound(std::size_t successes, std::size_t trials, double confidence) {
  check(successes, trials, confidence);
  if (successes == trials) return 1.0;
  const boost::math::beta_distribution<double> beta(static_cast<double>(successes + 1),
                                                    static_cast<double>(trials - successes));
  return boost::math::quantile(beta, confidence);
}

Verdict binomial_verdict(std::size_t successes, std::size_t trials, double target,
                         const VerdictRule& rule) {
  const double threshold = target - rule.slack;
  if (binomial_lower_bound(successes, trials, rule.confidence) >= threshold) return Verdict::Pass;
  if (binomial_upper_bound(successes, trials, rule.confidence) < threshold) return Verdict::Fail;
  return Verdict::Indeterminate;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument(fmt::format("quantile level {} outside [0, 1]", q));
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) return {};
  Summary s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.q05 = quantile(values, 0.05);
  s.q25 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q75 = quantile(values, 0.75);
  s.q95 = quantile(values, 0.95);
  return s;
}

Json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"min", s.min},       {"q05", s.q05}, {"q25", s.q25},
          {"median", s.median}, {"q75", s.q75}, {"q95", s.q95}, {"max", s.max}};
}

}  // namespace slt
