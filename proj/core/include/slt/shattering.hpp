#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "slt/hypothesis.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/serialize.hpp"

namespace slt {

/// Labels of a point sequence, one per point, in point order.
using Labeling = std::vector<Label>;

/// A labeling of an ordered finite point set.
struct Dichotomy {
  std::vector<Instance> points;
  Labeling labeling;
};

/// One labeling of a witness set together with a hypothesis realizing it.
struct Realization {
  Labeling labeling;
  Hypothesis hypothesis;
};

struct VcReport {
  /// Exact VC dimension over the pool when `exact`, otherwise a lower bound
  /// reached before the subset-search budget ran out.
  std::size_t value = 0;
  bool exact = true;
  std::vector<Instance> witness;
  /// One realizing hypothesis for each of the 2^|witness| labelings, in
  /// lexicographic labeling order (first point most significant).
  std::vector<Realization> certificate;
  std::size_t class_size = 0;
  std::size_t distinct_restrictions = 0;
  std::size_t subsets_examined = 0;
};

/// H restricted to the points: every labeling some member realizes.
/// Points must be nonempty, distinct and of the class dimension.
std::set<Labeling> restriction(std::span<const Hypothesis> members,
                               std::span<const Instance> points);
std::set<Labeling> restriction(const HypothesisClass& H, std::span<const Instance> points,
                               const Discretization& grid);

/// True iff the restriction has 2^|points| labelings. The empty set is
/// shattered by every class.
bool shatters(std::span<const Hypothesis> members, std::span<const Instance> points);
bool shatters(const HypothesisClass& H, std::span<const Instance> points,
              const Discretization& grid);

inline constexpr std::size_t kDefaultSubsetBudget = 10'000'000;
inline constexpr std::size_t kMaxPoolSize = 64;

/// Largest shattered subset of `pool` (at most 64 points), searched by
/// increasing size and stopping at the first size with no shattered subset.
/// `subset_budget` caps the number of subsets tested; on exhaustion the
/// report carries exact = false and the best size found so far.
VcReport vc_dimension(std::span<const Hypothesis> members, std::span<const Instance> pool,
                      std::size_t subset_budget = kDefaultSubsetBudget);
VcReport vc_dimension(const HypothesisClass& H, std::span<const Instance> pool,
                      const Discretization& grid,
                      std::size_t subset_budget = kDefaultSubsetBudget);

/// Replays every certificate hypothesis on the witness.
bool verify_certificate(std::span<const Instance> witness, std::span<const Realization> certificate);

struct SineSearchOptions {
  /// Points to shatter; empty selects x_i = 10^-i, i = 1..k.
  std::vector<double> points;
  std::size_t max_k = 8;
  /// Maximum number of constant-label alpha cells examined.
  std::size_t budget = 100'000'000;
};

struct SineWitness {
  std::vector<Instance> points;
  /// Realized labelings with their frequencies, lexicographic labeling order.
  std::vector<Realization> realized;
  /// Labelings for which no frequency was found before the budget ran out.
  std::vector<Labeling> failed;
  std::size_t cells_examined = 0;

  bool complete() const noexcept { return failed.empty(); }
};

/// Searches frequencies alpha >= 0 so that 1[sin(alpha x) >= 0] realizes every
/// labeling of k points. Label changes only happen where alpha * |x_i| is a
/// multiple of pi, so the search sweeps those breakpoints in increasing order
/// and evaluates one alpha inside each constant-label cell.
SineWitness sine_shatter_witness(std::size_t k, const SineSearchOptions& options = {});

Json to_json(const VcReport& r);
Json to_json(const SineWitness& w);
Json to_json(const Labeling& l);

}  // namespace slt
