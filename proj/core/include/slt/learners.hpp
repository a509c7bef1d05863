#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "slt/hypothesis.hpp"
#include "slt/hypothesis_class.hpp"
#include "slt/sample.hpp"
#include "slt/serialize.hpp"

namespace slt {

/// Configuration an SRM run was made with; echoed in every output.
struct SrmSettings {
  double delta = 0.05;
  double C = 2.0;
  std::vector<double> weights;
  std::vector<std::size_t> vc_dimensions;
};

struct LearnerOutput {
  Hypothesis hypothesis;
  double empirical_error = 0.0;
  /// Position of the hypothesis in its class enumeration.
  std::size_t member_index = 0;
  /// 1-based class index n (SRM only).
  std::optional<std::size_t> class_index{};
  /// L_S(h) + eps_n (SRM only).
  std::optional<double> objective{};
  std::optional<SrmSettings> srm{};
};

/// First member, in canonical order, with minimal empirical error.
LearnerOutput erm(std::span<const Hypothesis> members, const LabeledSample& S);
LearnerOutput erm(const HypothesisClass& H, const LabeledSample& S, const Discretization& grid);

/// Mistake counts of every member on S, in member order.
std::vector<std::size_t> mistake_counts(std::span<const Hypothesis> members, const LabeledSample& S);

/// Complexity penalty eps_n = C sqrt((d_n - ln(w_n delta)) / m).
double srm_penalty(std::size_t vc_dimension, double weight, double delta, double C, std::size_t m);

/// Minimizes L_S(h) + eps_n over classes n and members h of H_n. Ties go to the
/// lower n, then to canonical order. Every class needs a VC dimension, either
/// declared on the sequence or supplied through `vc_dimensions`.
LearnerOutput srm(const WeightedClassSequence& seq, const LabeledSample& S, double delta,
                  double C = 2.0, std::span<const std::size_t> vc_dimensions = {});

/// Same, over classes that were already enumerated (one member list per class).
LearnerOutput srm(std::span<const std::vector<Hypothesis>> classes, std::span<const double> weights,
                  std::span<const std::size_t> vc_dimensions, const LabeledSample& S, double delta,
                  double C = 2.0);

/// Lookup table predicting the majority label seen at each sampled instance
/// (ties and unseen instances get `fallback`).
Hypothesis memorizer(const LabeledSample& S, Label fallback = Label::Zero);

Json to_json(const LearnerOutput& out);

}  // namespace slt
