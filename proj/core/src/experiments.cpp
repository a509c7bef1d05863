#include "slt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {
namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(fmt::format("{} must lie in (0, 1), got {}", name, v));
}

std::string sample_stream(std::size_t m) { return fmt::format("sample/m={}", m); }

std::size_t min_index(std::span<const RiskValue> risks) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < risks.size(); ++i) {
    if (risks[i].value < risks[best].value) best = i;
  }
  return best;
}

Json bound_echo(std::optional<std::size_t> d, double eps, double delta, std::size_t m) {
  if (!d || eps >= 1.0) return nullptr;
  BoundParams p;
  p.d = *d;
  p.eps = eps;
  p.delta = delta;
  p.m = m;
  return to_json(sample_complexity(p));
}

void finish_verdict(ExperimentSummary& s, double delta, const VerdictRule& rule) {
  s.frequency = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.target = 1.0 - delta;
  s.threshold = s.target - rule.slack;
  s.lower_bound = binomial_lower_bound(s.successes, s.trials, rule.confidence);
  s.upper_bound = binomial_upper_bound(s.successes, s.trials, rule.confidence);
  s.verdict = binomial_verdict(s.successes, s.trials, s.target, rule);
}

std::vector<double> column(std::span<const TrialRecord> records, double TrialRecord::*field) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.*field);
  return v;
}

}  // namespace

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ExperimentSummary verify_learnability(const LearnabilityConfig& c) {
  if (!(c.eps > 0.0 && c.eps <= 1.0)) throw InvalidArgument(fmt::format("eps must lie in (0, 1], got {}", c.eps));
  check_unit(c.delta, "delta");
  if (c.trials == 0) throw InvalidArgument("trials must be >= 1");
  if (c.m == 0) throw InvalidArgument("m must be >= 1");
  const auto members = enumerate_class(c.cls, c.grid);
  const auto risks = member_risks(c.distribution, members, c.risk);
  const double min_risk = risks[min_index(risks)].value;

  ExperimentSummary s;
  s.experiment = "learnability";
  s.m = c.m;
  s.trials = c.trials;
  s.min_risk = min_risk;
  s.records.resize(c.trials);
  const SeedSpec base{c.seed, "", 0};
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    const auto seed = base.with(sample_stream(c.m), t);
    const auto S = draw_sample(c.distribution, c.m, seed);
    const auto out = erm(members, S);
    auto& r = s.records[t];
    r.trial = t;
    r.sample_seed = seed.derived();
    r.member_index = out.member_index;
    r.hypothesis = to_json(out.hypothesis);
    r.empirical_error = out.empirical_error;
    r.true_risk = risks[out.member_index].value;
    r.estimation_error = r.true_risk - min_risk;
    r.success = r.estimation_error <= c.eps;
  });
  for (const auto& r : s.records) s.successes += r.success;
  s.measures["true_risk"] = summarize(column(s.records, &TrialRecord::true_risk));
  s.measures["estimation_error"] = summarize(column(s.records, &TrialRecord::estimation_error));
  s.measures["empirical_error"] = summarize(column(s.records, &TrialRecord::empirical_error));
  s.bounds = bound_echo(c.vc_dimension, c.eps, c.delta, c.m);
  finish_verdict(s, c.delta, c.rule);
  s.config = {{"class", to_json(c.cls)},       {"grid", to_json(c.grid)},
              {"distribution", to_json(c.distribution)},
              {"m", c.m},                       {"eps", c.eps},
              {"delta", c.delta},               {"trials", c.trials},
              {"seed", c.seed},                 {"slack", c.rule.slack},
              {"confidence", c.rule.confidence}};
  return s;
}

double success_frequency(std::span<const TrialRecord> records, double eps) {
  if (records.empty()) throw InvalidArgument("no records");
  std::size_t hits = 0;
  for (const auto& r : records) hits += r.estimation_error <= eps;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

UniformConvergenceReport verify_uniform_convergence(const UniformConvergenceConfig& c) {
  if (!(c.eps > 0.0 && c.eps <= 1.0)) throw InvalidArgument(fmt::format("eps must lie in (0, 1], got {}", c.eps));
  check_unit(c.delta, "delta");
  if (c.trials == 0) throw InvalidArgument("trials must be >= 1");
  if (c.m_values.empty()) throw InvalidArgument("uniform convergence needs at least one m");
  const auto members = enumerate_class(c.cls, c.grid);
  const auto risks = member_risks(c.distribution, members, c.risk);
  const double min_risk = risks[min_index(risks)].value;

  UniformConvergenceReport report;
  const SeedSpec base{c.seed, "", 0};
  for (std::size_t m : c.m_values) {
    if (m == 0) throw InvalidArgument("m must be >= 1");
    ExperimentSummary s;
    s.experiment = "uniform_convergence";
    s.m = m;
    s.trials = c.trials;
    s.min_risk = min_risk;
    s.records.resize(c.trials);
    std::vector<Verdict> verdicts(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
      const auto seed = base.with(sample_stream(m), t);
      const auto S = draw_sample(c.distribution, m, seed);
      const auto rep = is_eps_representative(S, members, risks, c.eps);
      const auto out = erm(members, S);
      auto& r = s.records[t];
      r.trial = t;
      r.sample_seed = seed.derived();
      r.member_index = rep.worst_index;
      r.hypothesis = to_json(rep.worst);
      r.empirical_error = empirical_error(rep.worst, S);
      r.true_risk = risks[out.member_index].value;
      r.estimation_error = r.true_risk - min_risk;
      r.sup_deviation = rep.deviation;
      r.success = rep.verdict == Verdict::Pass;
      verdicts[t] = rep.verdict;
    });
    for (std::size_t t = 0; t < c.trials; ++t) {
      s.successes += verdicts[t] == Verdict::Pass;
      s.indeterminate_trials += verdicts[t] == Verdict::Indeterminate;
    }
    std::vector<double> devs;
    for (const auto& r : s.records) devs.push_back(*r.sup_deviation);
    s.measures["sup_deviation"] = summarize(devs);
    s.measures["estimation_error"] = summarize(column(s.records, &TrialRecord::estimation_error));
    s.bounds = bound_echo(c.vc_dimension, c.eps, c.delta, m);
    finish_verdict(s, c.delta, c.rule);
    s.config = {{"class", to_json(c.cls)},   {"grid", to_json(c.grid)},
                {"distribution", to_json(c.distribution)},
                {"m", m},                     {"eps", c.eps},
                {"delta", c.delta},           {"trials", c.trials},
                {"seed", c.seed},             {"slack", c.rule.slack},
                {"confidence", c.rule.confidence}};
    report.median_deviation.push_back(s.measures["sup_deviation"].median);
    report.per_m.push_back(std::move(s));
  }
  for (std::size_t i = 0; i + 1 < report.median_deviation.size(); ++i) {
    report.median_ratio.push_back(report.median_deviation[i] / report.median_deviation[i + 1]);
  }
  if (c.m_values.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(c.m_values.size());
    for (std::size_t i = 0; i < c.m_values.size(); ++i) {
      const double x = std::log(static_cast<double>(c.m_values[i]));
      const double y = std::log(report.median_deviation[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    report.log_log_slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  }
  return report;
}

std::string_view to_string(NflLearner l) noexcept {
  return l == NflLearner::Memorizer ? "memorizer" : "erm_all_functions";
}

std::vector<Hypothesis> all_functions_class(std::span<const Instance> domain) {
  if (domain.empty() || domain.size() > 20) throw InvalidArgument("all-functions class needs 1..20 points");
  std::vector<Hypothesis> out;
  const std::size_t count = std::size_t{1} << domain.size();
  out.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    LookupTable t;
    t.dimension = domain.front().dimension();
    for (std::size_t j = 0; j < domain.size(); ++j) t.entries.push_back({domain[j], to_label((f >> j) & 1U)});
    out.emplace_back(std::move(t));
  }
  return out;
}

NflReport nfl_exact(std::size_t m, const DataOnlyLearner& learner, std::string name) {
  if (m == 0 || m > kMaxNflM) {
    const double n = static_cast<double>(2 * m);
    throw InvalidArgument(fmt::format(
        "nfl_exact supports 1 <= m <= {}; m = {} would enumerate 2^{} labelings x {:.0f} tuples",
        kMaxNflM, m, 2 * m, std::pow(n, static_cast<double>(m))));
  }
  const std::size_t n = 2 * m;
  std::vector<Instance> domain;
  for (std::size_t j = 0; j < n; ++j) domain.push_back(Instance{static_cast<double>(j)});

  NflReport rep;
  rep.learner = std::move(name);
  rep.m = m;
  rep.domain_size = n;
  rep.labelings = std::uint64_t{1} << n;
  rep.tuples = 1;
  for (std::size_t i = 0; i < m; ++i) rep.tuples *= n;
  rep.per_labeling_denominator = rep.tuples * n;
  rep.denominator = rep.per_labeling_denominator * rep.labelings;

  // The learned hypothesis depends only on (tuple, labels of the tuple), so it
  // is computed once per such sample and stored as a bit mask over the domain.
  const std::uint64_t label_patterns = std::uint64_t{1} << m;
  std::vector<std::int64_t> cache(rep.tuples * label_patterns, -1);
  std::vector<std::size_t> tuple(m);

  rep.per_labeling.assign(rep.labelings, 0);
  for (std::uint64_t f = 0; f < rep.labelings; ++f) {
    std::uint64_t mistakes_sum = 0;
    for (std::uint64_t t = 0; t < rep.tuples; ++t) {
      std::uint64_t rest = t;
      std::uint64_t pattern = 0;
      for (std::size_t i = 0; i < m; ++i) {
        tuple[i] = rest % n;
        rest /= n;
        pattern |= ((f >> tuple[i]) & 1U) << i;
      }
      auto& slot = cache[t * label_patterns + pattern];
      if (slot < 0) {
        std::vector<Example> pairs;
        for (std::size_t i = 0; i < m; ++i) pairs.push_back({domain[tuple[i]], to_label((pattern >> i) & 1U)});
        const auto h = learner(LabeledSample(std::move(pairs)));
        std::int64_t mask = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (h(domain[j]) == Label::One) mask |= std::int64_t{1} << j;
        }
        slot = mask;
      }
      mistakes_sum += static_cast<std::uint64_t>(
          __builtin_popcountll(static_cast<std::uint64_t>(slot) ^ f));
    }
    rep.per_labeling[f] = mistakes_sum;
    rep.numerator += mistakes_sum;
  }
  const auto [lo, hi] = std::minmax_element(rep.per_labeling.begin(), rep.per_labeling.end());
  rep.best_labeling = static_cast<std::uint64_t>(lo - rep.per_labeling.begin());
  rep.worst_labeling = static_cast<std::uint64_t>(hi - rep.per_labeling.begin());
  const double pd = static_cast<double>(rep.per_labeling_denominator);
  rep.best = static_cast<double>(*lo) / pd;
  rep.worst = static_cast<double>(*hi) / pd;
  rep.average = static_cast<double>(rep.numerator) / static_cast<double>(rep.denominator);
  return rep;
}

NflReport nfl_exact(std::size_t m, NflLearner learner) {
  if (learner == NflLearner::Memorizer) {
    return nfl_exact(m, [](const LabeledSample& S) { return memorizer(S, Label::Zero); },
                     std::string(to_string(learner)));
  }
  if (m == 0 || m > kMaxNflM) return nfl_exact(m, DataOnlyLearner{}, std::string(to_string(learner)));
  std::vector<Instance> domain;
  for (std::size_t j = 0; j < 2 * m; ++j) domain.push_back(Instance{static_cast<double>(j)});
  const auto members = all_functions_class(domain);
  return nfl_exact(m, [&](const LabeledSample& S) { return erm(members, S).hypothesis; },
                   std::string(to_string(learner)));
}

TradeoffTable tradeoff_sweep(const TradeoffConfig& c) {
  check_unit(c.delta, "delta");
  if (c.trials == 0) throw InvalidArgument("trials must be >= 1");
  if (c.m_values.empty()) throw InvalidArgument("tradeoff sweep needs at least one m");
  if (c.seeds.empty()) throw InvalidArgument("tradeoff sweep needs at least one master seed");
  const auto& seq = c.sequence;
  const std::size_t N = seq.size();

  std::vector<std::vector<Hypothesis>> classes;
  std::vector<std::vector<RiskValue>> risks;
  std::vector<double> approx;
  std::vector<double> weights;
  std::vector<std::size_t> dims;
  for (std::size_t n = 0; n < N; ++n) {
    const auto& e = seq[n];
    if (!e.vc_dimension) throw InvalidArgument(fmt::format("class {} has no VC dimension", n + 1));
    classes.push_back(enumerate_class(e.cls, e.grid));
    risks.push_back(member_risks(c.distribution, classes.back(), c.risk));
    approx.push_back(risks.back()[min_index(risks.back())].value);
    weights.push_back(e.weight);
    dims.push_back(*e.vc_dimension);
  }
  const double union_approx = *std::min_element(approx.begin(), approx.end());

  TradeoffTable table;
  const std::size_t per_m = c.seeds.size() * c.trials;
  for (std::size_t m : c.m_values) {
    if (m == 0) throw InvalidArgument("m must be >= 1");
    // N ERM records then one SRM record per (seed, trial).
    std::vector<TradeoffRecord> recs(per_m * (N + 1));
    parallel_for(per_m, c.workers, [&](std::size_t k) {
      const std::uint64_t seed = c.seeds[k / c.trials];
      const std::size_t t = k % c.trials;
      const auto S = draw_sample(c.distribution, m, SeedSpec{seed, sample_stream(m), t});
      for (std::size_t n = 0; n <= N; ++n) {
        auto& r = recs[k * (N + 1) + n];
        r.seed = seed;
        r.trial = t;
        r.m = m;
        if (n < N) {
          const auto out = erm(classes[n], S);
          r.learner = "erm";
          r.class_index = n + 1;
          r.member_index = out.member_index;
          r.empirical_error = out.empirical_error;
          r.total = risks[n][out.member_index].value;
          r.estimation = r.total - approx[n];
        } else {
          const auto out = srm(classes, weights, dims, S, c.delta, c.C);
          r.learner = "srm";
          r.class_index = *out.class_index;
          r.member_index = out.member_index;
          r.empirical_error = out.empirical_error;
          r.total = risks[r.class_index - 1][out.member_index].value;
          r.estimation = r.total - union_approx;
        }
      }
    });
    for (std::size_t n = 0; n <= N; ++n) {
      TradeoffRow row;
      row.learner = n < N ? "erm" : "srm";
      if (n < N) {
        row.class_index = n + 1;
        row.class_size = classes[n].size();
      }
      row.m = m;
      row.trials = per_m;
      row.approximation = n < N ? approx[n] : union_approx;
      double est = 0, total = 0, emp = 0, cls = 0;
      for (std::size_t k = 0; k < per_m; ++k) {
        const auto& r = recs[k * (N + 1) + n];
        est += r.estimation;
        total += r.total;
        emp += r.empirical_error;
        cls += static_cast<double>(r.class_index);
      }
      const double T = static_cast<double>(per_m);
      row.estimation = est / T;
      row.total = total / T;
      row.empirical_error = emp / T;
      row.identity_residual = std::abs(row.approximation + row.estimation - row.total);
      if (n == N) row.mean_class_index = cls / T;
      table.rows.push_back(row);
    }
    std::move(recs.begin(), recs.end(), std::back_inserter(table.records));
  }
  return table;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

Json to_json(const TrialRecord& r) {
  Json j = {{"trial", r.trial},
            {"sample_seed", r.sample_seed},
            {"member_index", r.member_index},
            {"hypothesis", r.hypothesis},
            {"empirical_error", r.empirical_error},
            {"true_risk", r.true_risk},
            {"estimation_error", r.estimation_error},
            {"success", r.success}};
  if (r.sup_deviation) j["sup_deviation"] = *r.sup_deviation;
  return j;
}

Json to_json(const ExperimentSummary& s, bool include_records) {
  Json measures = Json::object();
  for (const auto& [k, v] : s.measures) measures[k] = to_json(v);
  Json j = {{"experiment", s.experiment},
            {"config", s.config},
            {"m", s.m},
            {"trials", s.trials},
            {"successes", s.successes},
            {"indeterminate_trials", s.indeterminate_trials},
            {"frequency", s.frequency},
            {"target", s.target},
            {"threshold", s.threshold},
            {"lower_bound", s.lower_bound},
            {"upper_bound", s.upper_bound},
            {"min_risk", s.min_risk},
            {"measures", measures},
            {"bounds", s.bounds},
            {"verdict", to_string(s.verdict)},
            {"decision_rule",
             "pass iff one-sided exact binomial lower bound >= target - slack; "
             "fail iff upper bound < target - slack; otherwise indeterminate"}};
  if (include_records) {
    Json recs = Json::array();
    for (const auto& r : s.records) recs.push_back(to_json(r));
    j["records"] = recs;
  }
  return j;
}

Json to_json(const UniformConvergenceReport& r, bool include_records) {
  Json per = Json::array();
  for (const auto& s : r.per_m) per.push_back(to_json(s, include_records));
  return {{"per_m", per},
          {"median_deviation", r.median_deviation},
          {"median_ratio", r.median_ratio},
          {"log_log_slope", r.log_log_slope}};
}

Json to_json(const NflReport& r) {
  return {{"learner", r.learner},
          {"m", r.m},
          {"domain_size", r.domain_size},
          {"labelings", r.labelings},
          {"tuples", r.tuples},
          {"average", r.average},
          {"average_fraction", fmt::format("{}/{}", r.numerator, r.denominator)},
          {"worst", r.worst},
          {"worst_labeling", r.worst_labeling},
          {"best", r.best},
          {"best_labeling", r.best_labeling},
          {"per_labeling_numerators", r.per_labeling},
          {"per_labeling_denominator", r.per_labeling_denominator},
          {"marginal", "uniform"},
          {"noise", 0}};
}

Json to_json(const TradeoffRow& r) {
  Json j = {{"learner", r.learner},
            {"m", r.m},
            {"trials", r.trials},
            {"approximation", r.approximation},
            {"estimation", r.estimation},
            {"total", r.total},
            {"empirical_error", r.empirical_error},
            {"identity_residual", r.identity_residual}};
  j["class_index"] = r.class_index ? Json(*r.class_index) : Json(nullptr);
  j["class_size"] = r.class_size;
  if (r.mean_class_index) j["mean_class_index"] = *r.mean_class_index;
  return j;
}

Json to_json(const TradeoffTable& t, bool include_records) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  Json j = {{"rows", rows}};
  if (include_records) {
    Json recs = Json::array();
    for (const auto& r : t.records) {
      recs.push_back({{"seed", r.seed}, {"trial", r.trial}, {"m", r.m}, {"learner", r.learner},
                      {"class_index", r.class_index}, {"member_index", r.member_index},
                      {"empirical_error", r.empirical_error}, {"total", r.total},
                      {"estimation", r.estimation}});
    }
    j["records"] = recs;
  }
  return j;
}

std::string summary_csv_header() {
  return "experiment,m,trials,successes,indeterminate_trials,frequency,lower_bound,upper_bound,"
         "target,threshold,verdict,min_risk,mean_true_risk,median_estimation_error,"
         "mean_estimation_error,median_sup_deviation";
}

std::string summary_csv_row(const ExperimentSummary& s) {
  auto measure = [&](const char* key, double Summary::*f) {
    auto it = s.measures.find(key);
    return it == s.measures.end() ? std::string{} : format_double(it->second.*f);
  };
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", s.experiment, s.m, s.trials,
                     s.successes, s.indeterminate_trials, format_double(s.frequency),
                     format_double(s.lower_bound), format_double(s.upper_bound),
                     format_double(s.target), format_double(s.threshold), to_string(s.verdict),
                     format_double(s.min_risk), measure("true_risk", &Summary::mean),
                     measure("estimation_error", &Summary::median),
                     measure("estimation_error", &Summary::mean),
                     measure("sup_deviation", &Summary::median));
}

std::string records_csv_header() {
  return "trial,sample_seed,member_index,hypothesis,empirical_error,true_risk,estimation_error,"
         "sup_deviation,success";
}

std::string records_csv_row(const TrialRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.trial, r.sample_seed, r.member_index,
                     csv_escape(r.hypothesis.dump()), format_double(r.empirical_error),
                     format_double(r.true_risk), format_double(r.estimation_error),
                     r.sup_deviation ? format_double(*r.sup_deviation) : std::string{},
                     r.success ? 1 : 0);
}

std::string nfl_csv_header() {
  return "learner,m,domain_size,labelings,tuples,numerator,denominator,average,worst,"
         "worst_labeling,best,best_labeling";
}

std::string nfl_csv_row(const NflReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", r.learner, r.m, r.domain_size,
                     r.labelings, r.tuples, r.numerator, r.denominator, format_double(r.average),
                     format_double(r.worst), r.worst_labeling, format_double(r.best),
                     r.best_labeling);
}

std::string tradeoff_csv_header() {
  return "learner,class_index,class_size,m,trials,approximation,estimation,total,empirical_error,"
         "identity_residual,mean_class_index";
}

std::string tradeoff_csv_row(const TradeoffRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", r.learner,
                     r.class_index ? fmt::format("{}", *r.class_index) : std::string{},
                     r.class_size, r.m, r.trials, format_double(r.approximation),
                     format_double(r.estimation), format_double(r.total),
                     format_double(r.empirical_error), format_double(r.identity_residual),
                     r.mean_class_index ? format_double(*r.mean_class_index) : std::string{});
}

std::string tradeoff_records_csv_header() {
  return "seed,trial,m,learner,class_index,member_index,empirical_error,total,estimation";
}

std::string tradeoff_records_csv_row(const TradeoffRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.seed, r.trial, r.m, r.learner, r.class_index,
                     r.member_index, format_double(r.empirical_error), format_double(r.total),
                     format_double(r.estimation));
}

}  // namespace slt
