#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slt/bounds.hpp"
#include "slt/distribution.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/learners.hpp"
#include "slt/stats.hpp"

namespace slt {

/// Runs fn(0), ..., fn(n - 1) on up to `workers` threads. fn must only write
/// to state owned by its index.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// One draw S ~ D^m and what the learner made of it. Reconstructable from
/// (config, master seed, trial index) alone.
struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t sample_seed = 0;  ///< derived seed word of the sample stream
  std::size_t member_index = 0;
  Json hypothesis;
  double empirical_error = 0.0;
  double true_risk = 0.0;
  double estimation_error = 0.0;
  std::optional<double> sup_deviation{};
  bool success = false;
};

struct ExperimentSummary {
  std::string experiment;
  Json config;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t indeterminate_trials = 0;
  double frequency = 0.0;
  double target = 0.0;     ///< 1 - delta
  double threshold = 0.0;  ///< target - slack
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double min_risk = 0.0;
  std::map<std::string, Summary> measures;
  Json bounds;
  Verdict verdict = Verdict::Indeterminate;
  std::vector<TrialRecord> records;
};

struct LearnabilityConfig {
  HypothesisClass cls;
  Discretization grid;
  DataDistribution distribution;
  std::size_t m = 100;
  double eps = 0.1;
  double delta = 0.1;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// When known, the sample-size bracket for (eps, delta) is echoed.
  std::optional<std::size_t> vc_dimension{};
  RiskOptions risk{};
  VerdictRule rule{};
  std::size_t workers = 1;
};

/// Draws `trials` samples S ~ D^m, runs ERM on each and counts how often
/// L_D(h_hat) <= min_H L_D + eps.
ExperimentSummary verify_learnability(const LearnabilityConfig& config);

/// Fraction of records whose estimation error is at most eps.
double success_frequency(std::span<const TrialRecord> records, double eps);

struct UniformConvergenceConfig {
  HypothesisClass cls;
  Discretization grid;
  DataDistribution distribution;
  std::vector<std::size_t> m_values{};
  double eps = 0.1;
  double delta = 0.1;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  std::optional<std::size_t> vc_dimension{};
  RiskOptions risk{};
  VerdictRule rule{};
  std::size_t workers = 1;
};

struct UniformConvergenceReport {
  std::vector<ExperimentSummary> per_m;
  std::vector<double> median_deviation;
  /// median_deviation[i] / median_deviation[i + 1].
  std::vector<double> median_ratio;
  /// Least-squares slope of log(median deviation) against log(m).
  double log_log_slope = 0.0;
};

/// For each m, the frequency of eps-representative samples and the
/// distribution of the sup deviation max_h |L_S(h) - L_D(h)|.
UniformConvergenceReport verify_uniform_convergence(const UniformConvergenceConfig& config);

using DataOnlyLearner = std::function<Hypothesis(const LabeledSample&)>;

enum class NflLearner { Memorizer, ErmAllFunctions };
std::string_view to_string(NflLearner l) noexcept;

struct NflReport {
  std::string learner;
  std::size_t m = 0;
  std::size_t domain_size = 0;
  std::uint64_t labelings = 0;
  std::uint64_t tuples = 0;
  /// Average over labelings of the expected true error, as an exact fraction.
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double average = 0.0;
  /// Per-labeling expected error numerators over per_labeling_denominator;
  /// labeling f gives x_j the label of bit j of f.
  std::vector<std::uint64_t> per_labeling;
  std::uint64_t per_labeling_denominator = 1;
  std::uint64_t worst_labeling = 0;
  double worst = 0.0;
  std::uint64_t best_labeling = 0;
  double best = 0.0;
};

inline constexpr std::size_t kMaxNflM = 4;

/// Exhaustive no-free-lunch computation on the domain {0, 1, ..., 2m - 1}
/// with a uniform marginal and no noise: every labeling function, every
/// ordered m-tuple of instances (each of weight (2m)^-m), exact integer
/// arithmetic throughout. The learner must be a deterministic function of
/// the sample.
NflReport nfl_exact(std::size_t m, const DataOnlyLearner& learner, std::string name);
NflReport nfl_exact(std::size_t m, NflLearner learner);

/// The class of all 2^n labelings of the points, in binary counting order.
std::vector<Hypothesis> all_functions_class(std::span<const Instance> domain);

struct TradeoffConfig {
  WeightedClassSequence sequence;
  DataDistribution distribution;
  std::vector<std::size_t> m_values{};
  std::size_t trials = 100;
  double delta = 0.1;
  double C = 2.0;
  /// Every master seed contributes `trials` draws per m; rows pool them all.
  std::vector<std::uint64_t> seeds{0};
  RiskOptions risk{};
  std::size_t workers = 1;
};

struct TradeoffRow {
  std::string learner;  ///< "erm" or "srm"
  std::optional<std::size_t> class_index{};
  std::size_t class_size = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double approximation = 0.0;
  double estimation = 0.0;
  double total = 0.0;
  double empirical_error = 0.0;
  /// |approximation + estimation - total|
  double identity_residual = 0.0;
  /// Mean selected class index (SRM rows).
  std::optional<double> mean_class_index{};
};

struct TradeoffRecord {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::size_t m = 0;
  std::string learner;
  std::size_t class_index = 0;
  std::size_t member_index = 0;
  double empirical_error = 0.0;
  double total = 0.0;
  double estimation = 0.0;
};

struct TradeoffTable {
  std::vector<TradeoffRow> rows;
  std::vector<TradeoffRecord> records;
};

/// For each class and m: mean approximation, estimation and total risk of
/// ERM; plus one SRM row per m over the whole sequence. SRM's approximation
/// error is taken over the union of the sequence.
TradeoffTable tradeoff_sweep(const TradeoffConfig& config);

Json to_json(const TrialRecord& r);
Json to_json(const ExperimentSummary& s, bool include_records = false);
Json to_json(const UniformConvergenceReport& r, bool include_records = false);
Json to_json(const NflReport& r);
Json to_json(const TradeoffRow& r);
Json to_json(const TradeoffTable& t, bool include_records = false);

// CSV column sets.
std::string summary_csv_header();
std::string summary_csv_row(const ExperimentSummary& s);
std::string records_csv_header();
std::string records_csv_row(const TrialRecord& r);
std::string nfl_csv_header();
std::string nfl_csv_row(const NflReport& r);
std::string tradeoff_csv_header();
std::string tradeoff_csv_row(const TradeoffRow& r);
std::string tradeoff_records_csv_header();
std::string tradeoff_records_csv_row(const TradeoffRecord& r);

/// Quotes a CSV cell when it contains commas, quotes or newlines.
std::string csv_escape(std::string_view cell);

}  // namespace slt
