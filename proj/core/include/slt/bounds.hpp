#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "slt/distribution.hpp"
#include "slt/hypothesis.hpp"
#include "slt/sample.hpp"
#include "slt/serialize.hpp"

namespace slt {

struct BoundParams {
  double eps = 0.1;
  double delta = 0.05;
  std::size_t m = 1;
  std::size_t d = 1;  ///< VC dimension
  double C = 2.0;
  double C1 = 1.0 / 16.0;
  double C2 = 64.0;
};

/// Sample-size bracket and accuracy bound for a class of VC dimension d,
/// with natural logarithms throughout.
struct BoundReport {
  BoundParams params;
  double b = 0.0;         ///< (d - ln delta) / eps^2
  double m_lower = 0.0;   ///< C1 * b
  double m_upper = 0.0;   ///< C2 * b
  double eps_uc = 0.0;    ///< C sqrt((d - ln delta) / m)
  std::string log_base = "e";
};

void validate(const BoundParams& p);
BoundReport sample_complexity(const BoundParams& params);
double accuracy_bound(std::size_t m, double delta, std::size_t d, double C);
/// Same formula with a real-valued sample size, so b itself can be substituted.
double accuracy_bound(double m, double delta, std::size_t d, double C);

enum class Verdict { Pass, Fail, Indeterminate };
std::string_view to_string(Verdict v) noexcept;

struct Representativeness {
  /// Pass: every |L_S(h) - L_D(h)| <= eps. Indeterminate only with Monte Carlo
  /// risks whose band straddles eps.
  Verdict verdict = Verdict::Pass;
  Hypothesis worst;
  std::size_t worst_index = 0;
  double deviation = 0.0;
  double half_width = 0.0;
};

Representativeness is_eps_representative(const LabeledSample& S, std::span<const Hypothesis> members,
                                         const DataDistribution& D, double eps,
                                         const RiskOptions& options = {});
Representativeness is_eps_representative(const LabeledSample& S, const HypothesisClass& H,
                                         const DataDistribution& D, double eps,
                                         const Discretization& grid, const RiskOptions& options = {});
/// Same check against precomputed member risks.
Representativeness is_eps_representative(const LabeledSample& S, std::span<const Hypothesis> members,
                                         std::span<const RiskValue> risks, double eps);

struct ErrorDecomposition {
  double approximation = 0.0;  ///< min over the class of L_D
  double estimation = 0.0;     ///< L_D(h_hat) - approximation
  double total = 0.0;          ///< L_D(h_hat)
};

ErrorDecomposition decompose_error(const DataDistribution& D, std::span<const Hypothesis> members,
                                   const Hypothesis& h_hat, const RiskOptions& options = {});
ErrorDecomposition decompose_error(const DataDistribution& D, const HypothesisClass& H,
                                   const Hypothesis& h_hat, const Discretization& grid,
                                   const RiskOptions& options = {});

Json to_json(const BoundReport& r);
/// Column names of the one-row CSV form of a BoundReport.
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace slt
