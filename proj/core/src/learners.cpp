#include "slt/learners.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {

std::vector<std::size_t> mistake_counts(std::span<const Hypothesis> members, const LabeledSample& S) {
  std::vector<std::size_t> out;
  out.reserve(members.size());
  for (const auto& h : members) out.push_back(mistakes(h, S));
  return out;
}

LearnerOutput erm(std::span<const Hypothesis> members, const LabeledSample& S) {
  if (S.empty()) throw InvalidArgument("ERM needs a nonempty sample");
  if (members.empty()) throw InvalidArgument("ERM needs a nonempty class");
  std::size_t best = 0;
  std::size_t best_mistakes = mistakes(members[0], S);
  for (std::size_t i = 1; i < members.size() && best_mistakes > 0; ++i) {
    const std::size_t e = mistakes(members[i], S);
    if (e < best_mistakes) {
      best = i;
      best_mistakes = e;
    }
  }
  LearnerOutput out{.hypothesis = members[best]};
  out.empirical_error = static_cast<double>(best_mistakes) / static_cast<double>(S.size());
  out.member_index = best;
  return out;
}

LearnerOutput erm(const HypothesisClass& H, const LabeledSample& S, const Discretization& grid) {
  const auto members = enumerate_class(H, grid);
  return erm(members, S);
}

double srm_penalty(std::size_t vc_dimension, double weight, double delta, double C, std::size_t m) {
  const double wd = weight * delta;
  if (!(wd > 0.0 && wd < 1.0)) {
    throw InvalidArgument(fmt::format("w_n * delta must lie in (0, 1), got {}", wd));
  }
  if (m == 0) throw InvalidArgument("SRM penalty needs m >= 1");
  return C * std::sqrt((static_cast<double>(vc_dimension) - std::log(wd)) / static_cast<double>(m));
}

LearnerOutput srm(std::span<const std::vector<Hypothesis>> classes, std::span<const double> weights,
                  std::span<const std::size_t> vc_dimensions, const LabeledSample& S, double delta,
                  double C) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument(fmt::format("delta must lie in (0, 1), got {}", delta));
  if (!(C > 0.0)) throw InvalidArgument("SRM constant C must be positive");
  if (classes.empty() || classes.size() != weights.size() || classes.size() != vc_dimensions.size()) {
    throw InvalidArgument("SRM needs one weight and one VC dimension per class");
  }
  if (S.empty()) throw InvalidArgument("SRM needs a nonempty sample");
  std::vector<double> penalty(classes.size());
  for (std::size_t n = 0; n < classes.size(); ++n) {
    penalty[n] = srm_penalty(vc_dimensions[n], weights[n], delta, C, S.size());
  }
  std::optional<LearnerOutput> best;
  for (std::size_t n = 0; n < classes.size(); ++n) {
    auto cand = erm(classes[n], S);
    const double objective = cand.empirical_error + penalty[n];
    if (!best || objective < *best->objective) {
      cand.class_index = n + 1;
      cand.objective = objective;
      best = std::move(cand);
    }
  }
  best->srm = SrmSettings{delta, C, std::vector<double>(weights.begin(), weights.end()),
                          std::vector<std::size_t>(vc_dimensions.begin(), vc_dimensions.end())};
  return std::move(*best);
}

LearnerOutput srm(const WeightedClassSequence& seq, const LabeledSample& S, double delta, double C,
                  std::span<const std::size_t> vc_dimensions) {
  if (!vc_dimensions.empty() && vc_dimensions.size() != seq.size()) {
    throw InvalidArgument("SRM needs one VC dimension per class");
  }
  std::vector<std::vector<Hypothesis>> classes;
  std::vector<double> weights;
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto& e = seq[n];
    if (!vc_dimensions.empty()) {
      dims.push_back(vc_dimensions[n]);
    } else if (e.vc_dimension) {
      dims.push_back(*e.vc_dimension);
    } else {
      throw InvalidArgument(fmt::format("class {} of the SRM sequence has no VC dimension", n + 1));
    }
    // Checked before enumerating anything.
    srm_penalty(dims.back(), e.weight, delta, C, std::max<std::size_t>(S.size(), 1));
    weights.push_back(e.weight);
  }
  for (const auto& e : seq.entries()) classes.push_back(enumerate_class(e.cls, e.grid));
  return srm(classes, weights, dims, S, delta, C);
}

Hypothesis memorizer(const LabeledSample& S, Label fallback) {
  std::map<Instance, std::pair<std::size_t, std::size_t>> votes;  // (zeros, ones)
  for (const auto& [x, y] : S) {
    auto& v = votes[x];
    (y == Label::One ? v.second : v.first) += 1;
  }
  LookupTable t;
  t.dimension = std::max<std::size_t>(S.dimension(), 1);
  t.fallback = fallback;
  for (const auto& [x, v] : votes) {
    const Label y = v.first == v.second ? fallback : to_label(v.second > v.first);
    t.entries.push_back({x, y});
  }
  return Hypothesis(std::move(t));
}

Json to_json(const LearnerOutput& out) {
  Json j = {{"hypothesis", to_json(out.hypothesis)},
            {"empirical_error", out.empirical_error},
            {"member_index", out.member_index}};
  if (out.class_index) j["class_index"] = *out.class_index;
  if (out.objective) j["objective"] = *out.objective;
  if (out.srm) {
    j["srm"] = {{"delta", out.srm->delta},
                {"C", out.srm->C},
                {"weights", out.srm->weights},
                {"vc_dimensions", out.srm->vc_dimensions},
                {"log_base", "e"},
                {"penalty", "C * sqrt((d_n - ln(w_n * delta)) / m)"}};
  }
  return j;
}

}  // namespace slt
