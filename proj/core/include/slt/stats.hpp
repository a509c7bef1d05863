#pragma once

#include <cstddef>
#include <span>

#include "slt/bounds.hpp"
#include "slt/serialize.hpp"

namespace slt {

/// One-sided exact (Clopper-Pearson) confidence bounds on a binomial
/// success probability.
double binomial_lower_bound(std::size_t successes, std::size_t trials, double confidence = 0.95);
double binomial_upper_bound(std::size_t successes, std::size_t trials, double confidence = 0.95);

/// Decision rule for probabilistic guarantees "P[success] >= target":
/// pass when the 95% lower bound reaches target - slack, fail when the 95%
/// upper bound stays below target - slack, indeterminate otherwise.
struct VerdictRule {
  double confidence = 0.95;
  double slack = 0.02;
};
Verdict binomial_verdict(std::size_t successes, std::size_t trials, double target,
                         const VerdictRule& rule = {});

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted values.
double quantile(std::span<const double> values, double q);

struct Summary {
  double mean = 0.0;
  double min = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  double max = 0.0;
};
Summary summarize(std::span<const double> values);
Json to_json(const Summary& s);

}  // namespace slt
