#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "slt/hypothesis.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/rng.hpp"
#include "slt/sample.hpp"
#include "slt/serialize.hpp"

namespace slt {

/// Uniform on the axis-aligned box [lo, hi] (lo < hi coordinatewise).
struct UniformBox {
  std::vector<double> lo;
  std::vector<double> hi;
};
/// Uniform over a list of distinct points.
struct FiniteUniform {
  std::vector<Instance> points;
};
/// Point masses with probabilities summing to 1.
struct PointMasses {
  std::vector<Instance> points;
  std::vector<double> probabilities;
};
using Marginal = std::variant<UniformBox, FiniteUniform, PointMasses>;

/// p(y = 1 | x) on a finite domain.
struct ConditionalTable {
  std::vector<Instance> points;
  std::vector<double> p_one;
};
using Labeler = std::variant<Hypothesis, ConditionalTable>;

/// A distribution over instances x labels: draw x from the marginal, label
/// it by the labeler, then flip the label with probability noise_rate.
class DataDistribution {
public:
  DataDistribution(Marginal marginal, Labeler labeler, double noise_rate = 0.0);

  const Marginal& marginal() const noexcept { return marginal_; }
  const Labeler& labeler() const noexcept { return labeler_; }
  double noise_rate() const noexcept { return noise_; }
  std::size_t dimension() const noexcept { return dimension_; }
  bool has_finite_support() const noexcept;

  /// Support points with their probabilities (finite marginals only).
  std::vector<std::pair<Instance, double>> support() const;
  /// P(Y = 1 | x) after noise; x must be in the support of a finite
  /// marginal, or any point when the labeler is a hypothesis.
  double p_one(const Instance& x) const;

  Example draw(std::mt19937_64& g) const;

private:
  double noiseless_p_one(const Instance& x) const;

  Marginal marginal_;
  Labeler labeler_;
  double noise_;
  std::size_t dimension_ = 0;
};

/// m i.i.d. pairs from D, fully determined by the seed.
LabeledSample draw_sample(const DataDistribution& D, std::size_t m, const SeedSpec& seed);

/// Exact L_D(h) when an analytic route exists, std::nullopt otherwise.
///
/// Routes: any finite marginal (exact weighted sum); uniform boxes in 1D when
/// both h and the labeler decompose into intervals; uniform boxes in 2D when
/// both are rectangles or halfspaces (convex polygon clipping). Noise enters
/// as (1 - eta) rho + eta (1 - rho), rho the noiseless disagreement measure.
std::optional<double> true_risk(const DataDistribution& D, const Hypothesis& h);

/// Half-width sqrt(ln(2 / alpha) / (2 n)) of the two-sided Hoeffding band.
double hoeffding_half_width(std::size_t n, double alpha = 0.05);

struct McRisk {
  double estimate = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;
};

/// Mean 0/1 error of h over n fresh draws, with its 95% Hoeffding band.
McRisk mc_risk(const DataDistribution& D, const Hypothesis& h, std::size_t n, const SeedSpec& seed);

/// How to obtain a true risk when no analytic route exists.
struct RiskOptions {
  /// Monte Carlo draws for the fallback; std::nullopt disables it.
  std::optional<std::size_t> mc_draws;
  SeedSpec seed{0, "risk", 0};
};

struct RiskValue {
  double value = 0.0;
  bool analytic = true;
  /// Hoeffding half-width when estimated, 0 when analytic.
  double half_width = 0.0;
};

/// Analytic risk when available, else Monte Carlo per `options`, else throws
/// NoAnalyticRisk.
RiskValue risk(const DataDistribution& D, const Hypothesis& h, const RiskOptions& options = {});

/// Risks of every member in order. Monte Carlo fallbacks share one seed
/// (common random numbers).
std::vector<RiskValue> member_risks(const DataDistribution& D, std::span<const Hypothesis> members,
                                    const RiskOptions& options = {});

struct ClassMinimum {
  Hypothesis hypothesis;
  std::size_t index = 0;
  double risk = 0.0;
  bool analytic = true;
};

/// argmin of L_D over the members; ties go to the earliest member.
ClassMinimum min_risk_in_class(const DataDistribution& D, std::span<const Hypothesis> members,
                               const RiskOptions& options = {});
ClassMinimum min_risk_in_class(const DataDistribution& D, const HypothesisClass& H,
                               const Discretization& grid, const RiskOptions& options = {});

Json to_json(const DataDistribution& D);
DataDistribution distribution_from_json(const Json& j, const std::string& path = "$");

}  // namespace slt
