#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "internal.hpp"
#include "slt/bounds.hpp"
#include "slt/experiments.hpp"
#include "slt/learners.hpp"
#include "slt/shattering.hpp"

namespace slt::cli {
namespace {

using namespace detail;

struct Options {
  std::size_t workers = 1;
  bool records = false;
};

struct Outcome {
  int exit_code = kOk;
  std::string summary;
  Json result;
  std::vector<OutputFile> files;
};

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kOk;
    case Verdict::Fail: return kFail;
    case Verdict::Indeterminate: return kIndeterminate;
  }
  return kOk;
}

std::string csv(std::string header, std::vector<std::string> rows) {
  std::string out = std::move(header) + "\n";
  for (auto& r : rows) out += r + "\n";
  return out;
}

RiskOptions risk_options(const Json& cfg) {
  RiskOptions r;
  r.mc_draws = optional_count(cfg, "mc_draws", 1);
  if (cfg.contains("seed")) r.seed = SeedSpec{seed(cfg), "risk", 0};
  return r;
}

void forbid(const Json& cfg, std::string_view key, std::string_view why) {
  if (is_set(cfg, key)) throw ConfigError(key_path(key), std::string(why));
}

Outcome run_vcdim(const Json& cfg, const Options&) {
  const auto cls = class_at(required(cfg, "class"), "$.class");
  Outcome o;
  if (std::holds_alternative<SineFamily>(cls.family())) {
    forbid(cfg, "grid", "not used by the sine class; set k (and optionally points)");
    forbid(cfg, "pool", "not used by the sine class; set k (and optionally points)");
    SineSearchOptions opts;
    opts.max_k = count(cfg, "max_k", 1);
    opts.budget = count(cfg, "cell_budget", 1);
    const std::size_t k = count(cfg, "k", 1);
    if (k > opts.max_k) throw ConfigError("$.k", fmt::format("must be <= max_k = {}", opts.max_k));
    if (is_set(cfg, "points")) {
      const auto pts = points_at(cfg["points"], "$.points");
      if (pts.size() != k) throw ConfigError("$.points", fmt::format("expected {} points, got {}", k, pts.size()));
      for (const auto& x : pts) opts.points.push_back(x[0]);
    }
    const auto w = sine_shatter_witness(k, opts);
    const bool replay = verify_certificate(w.points, w.realized);
    o.result = to_json(w);
    o.result["replay_verified"] = replay;
    const auto required_labelings = std::size_t{1} << k;
    o.summary = fmt::format("sine class: {} of {} labelings of {} points realized ({} cells examined); "
                            "certificates replay: {}",
                            w.realized.size(), required_labelings, k, w.cells_examined, replay ? "yes" : "no");
    o.files.push_back({"vcdim_witness.json",
                       dump({{"class", to_json(cls)}, {"points", o.result["points"]},
                             {"certificate", o.result["realized"]}})});
    o.files.push_back({"vcdim.csv", csv("class,k,realized,required,cells_examined,complete,replay_verified",
                                        {fmt::format("sine,{},{},{},{},{},{}", k, w.realized.size(),
                                                     required_labelings, w.cells_examined, w.complete(), replay)})});
    o.exit_code = w.complete() && replay ? kOk : kFail;
    return o;
  }
  forbid(cfg, "k", "only used by the sine class");
  forbid(cfg, "points", "only used by the sine class; use pool");
  const auto grid = grid_at(required(cfg, "grid"), "$.grid");
  const auto pool = points_at(required(cfg, "pool"), "$.pool");
  const auto budget = count(cfg, "subset_budget", 1);
  const auto r = vc_dimension(cls, pool, grid, budget);
  const bool replay = verify_certificate(r.witness, r.certificate);
  o.result = to_json(r);
  o.result["replay_verified"] = replay;
  o.summary = fmt::format("VC dimension of {} over a pool of {} points: {}{}; witness of {} points, "
                          "certificate replay: {}",
                          cls.tag(), pool.size(), o.result["display"].get<std::string>(),
                          r.exact ? " (exact)" : "", r.witness.size(), replay ? "yes" : "no");
  o.files.push_back({"vcdim_witness.json",
                     dump({{"class", to_json(cls)}, {"points", o.result["witness"]},
                           {"certificate", o.result["certificate"]}})});
  o.files.push_back({"vcdim.csv",
                     csv("class,value,exact,class_size,distinct_restrictions,subsets_examined,witness_size,"
                         "replay_verified",
                         {fmt::format("{},{},{},{},{},{},{},{}", cls.tag(), r.value, r.exact, r.class_size,
                                      r.distinct_restrictions, r.subsets_examined, r.witness.size(), replay)})});
  o.exit_code = replay ? kOk : kFail;
  return o;
}

Outcome run_risk(const Json& cfg, const Options&) {
  const auto D = distribution_at(required(cfg, "distribution"), "$.distribution");
  const auto h = hypothesis_from_json(required(cfg, "hypothesis"), "$.hypothesis");
  const auto r = risk(D, h, risk_options(cfg));
  Outcome o;
  o.result = {{"risk", r.value}, {"analytic", r.analytic}, {"half_width", r.half_width}};
  o.summary = r.analytic ? fmt::format("L_D(h) = {} (analytic)", format_double(r.value))
                         : fmt::format("L_D(h) ~ {} +/- {} (Monte Carlo)", format_double(r.value),
                                       format_double(r.half_width));
  o.files.push_back({"risk.csv", csv("risk,analytic,half_width",
                                     {fmt::format("{},{},{}", format_double(r.value), r.analytic,
                                                  format_double(r.half_width))})});
  return o;
}

struct SampleSource {
  LabeledSample sample;
  std::optional<DataDistribution> distribution;
};

SampleSource sample_source(const Json& cfg) {
  if (is_set(cfg, "data")) {
    forbid(cfg, "m", "conflicts with data; the sample size comes from the file");
    const auto& d = cfg["data"];
    if (!d.is_string()) throw ConfigError("$.data", "expected a CSV file path");
    const std::size_t dim = count(cfg, "dimension");
    std::optional<DataDistribution> D;
    if (is_set(cfg, "distribution")) D = distribution_at(cfg["distribution"], "$.distribution");
    try {
      return {ingest_csv(d.get<std::string>(), CsvSchema{dim}), D};
    } catch (const ParseError& e) {
      throw ConfigError("$.data", e.what());
    }
  }
  if (!is_set(cfg, "distribution")) throw ConfigError("$.data", "required unless distribution and m are set");
  auto D = distribution_at(cfg["distribution"], "$.distribution");
  const std::size_t m = count(cfg, "m", 1);
  auto S = draw_sample(D, m, SeedSpec{seed(cfg), "sample", 0});
  return {std::move(S), std::move(D)};
}

void add_sample_file(Outcome& o, const std::string& name, const LabeledSample& S) {
  std::ostringstream s;
  write_sample_csv(s, S);
  o.files.push_back({name, s.str()});
}

Outcome run_erm(const Json& cfg, const Options& opt) {
  const auto cls = class_at(required(cfg, "class"), "$.class");
  const auto grid = grid_at(required(cfg, "grid"), "$.grid");
  const auto src = sample_source(cfg);
  const auto out = erm(cls, src.sample, grid);
  Outcome o;
  o.result = to_json(out);
  std::string risk_cell;
  if (src.distribution) {
    const auto r = risk(*src.distribution, out.hypothesis, risk_options(cfg));
    o.result["true_risk"] = r.value;
    o.result["true_risk_analytic"] = r.analytic;
    risk_cell = format_double(r.value);
  }
  o.summary = fmt::format("ERM over {} members on m = {}: L_S = {}{}", class_size(cls, grid), src.sample.size(),
                          format_double(out.empirical_error),
                          risk_cell.empty() ? "" : fmt::format(", L_D = {}", risk_cell));
  o.files.push_back({"erm.csv", csv("m,member_index,empirical_error,true_risk,hypothesis",
                                    {fmt::format("{},{},{},{},{}", src.sample.size(), out.member_index,
                                                 format_double(out.empirical_error), risk_cell,
                                                 csv_escape(to_json(out.hypothesis).dump()))})});
  if (opt.records) add_sample_file(o, "erm_sample.csv", src.sample);
  return o;
}

Outcome run_srm(const Json& cfg, const Options& opt) {
  const auto seq = sequence_at(required(cfg, "sequence"), "$.sequence");
  const double delta = unit_open(cfg, "delta");
  const double C = positive(cfg, "C");
  const auto src = sample_source(cfg);
  const auto out = [&] {
    try {
      return srm(seq, src.sample, delta, C);
    } catch (const InvalidArgument& e) {
      throw ConfigError("$.sequence", e.what());
    }
  }();
  Outcome o;
  o.result = to_json(out);
  std::string risk_cell;
  if (src.distribution) {
    const auto r = risk(*src.distribution, out.hypothesis, risk_options(cfg));
    o.result["true_risk"] = r.value;
    risk_cell = format_double(r.value);
  }
  o.summary = fmt::format("SRM on m = {}: class n = {}, L_S = {}, objective = {}{}", src.sample.size(),
                          *out.class_index, format_double(out.empirical_error), format_double(*out.objective),
                          risk_cell.empty() ? "" : fmt::format(", L_D = {}", risk_cell));
  o.files.push_back({"srm.csv", csv("m,class_index,member_index,empirical_error,objective,true_risk,hypothesis",
                                    {fmt::format("{},{},{},{},{},{},{}", src.sample.size(), *out.class_index,
                                                 out.member_index, format_double(out.empirical_error),
                                                 format_double(*out.objective), risk_cell,
                                                 csv_escape(to_json(out.hypothesis).dump()))})});
  if (opt.records) add_sample_file(o, "srm_sample.csv", src.sample);
  return o;
}

double eps_up_to_one(const Json& cfg) {
  const double eps = number(cfg, "eps");
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("$.eps", fmt::format("must lie in (0, 1], got {}", eps));
  return eps;
}

VerdictRule verdict_rule(const Json& cfg) {
  VerdictRule r;
  r.confidence = unit_open(cfg, "confidence");
  r.slack = number(cfg, "slack");
  if (r.slack < 0.0 || r.slack >= 1.0) throw ConfigError("$.slack", "must lie in [0, 1)");
  return r;
}

void add_records(Outcome& o, const std::string& name, std::span<const TrialRecord> records) {
  std::vector<std::string> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(records_csv_row(r));
  o.files.push_back({name, csv(records_csv_header(), std::move(rows))});
}

Outcome run_pac(const Json& cfg, const Options& opt) {
  LearnabilityConfig c{class_at(required(cfg, "class"), "$.class"), grid_at(required(cfg, "grid"), "$.grid"),
                       distribution_at(required(cfg, "distribution"), "$.distribution")};
  c.m = count(cfg, "m", 1);
  c.eps = eps_up_to_one(cfg);
  c.delta = unit_open(cfg, "delta");
  c.trials = count(cfg, "trials", 1);
  c.seed = seed(cfg);
  c.vc_dimension = optional_count(cfg, "vc_dimension");
  c.risk = risk_options(cfg);
  c.rule = verdict_rule(cfg);
  c.workers = opt.workers;
  const auto s = verify_learnability(c);
  Outcome o;
  o.result = to_json(s, opt.records);
  o.summary = fmt::format("success frequency {}/{} = {}; 95% lower bound {} vs threshold {}: {}", s.successes,
                          s.trials, format_double(s.frequency), format_double(s.lower_bound),
                          format_double(s.threshold), to_string(s.verdict));
  o.files.push_back({"pac.csv", csv(summary_csv_header(), {summary_csv_row(s)})});
  if (opt.records) add_records(o, "pac_records.csv", s.records);
  o.exit_code = exit_for(s.verdict);
  return o;
}

Outcome run_uc(const Json& cfg, const Options& opt) {
  UniformConvergenceConfig c{class_at(required(cfg, "class"), "$.class"), grid_at(required(cfg, "grid"), "$.grid"),
                             distribution_at(required(cfg, "distribution"), "$.distribution")};
  c.m_values = count_list(cfg, "m_values", 1);
  c.eps = eps_up_to_one(cfg);
  c.delta = unit_open(cfg, "delta");
  c.trials = count(cfg, "trials", 1);
  c.seed = seed(cfg);
  c.vc_dimension = optional_count(cfg, "vc_dimension");
  c.risk = risk_options(cfg);
  c.rule = verdict_rule(cfg);
  c.workers = opt.workers;
  const auto r = verify_uniform_convergence(c);
  Outcome o;
  o.result = to_json(r, opt.records);
  std::vector<std::string> rows;
  bool any_fail = false, any_indeterminate = false;
  std::string lines;
  for (const auto& s : r.per_m) {
    rows.push_back(summary_csv_row(s));
    any_fail |= s.verdict == Verdict::Fail;
    any_indeterminate |= s.verdict == Verdict::Indeterminate;
    lines += fmt::format("m = {}: median sup deviation {}, eps-representative in {}/{} trials: {}\n", s.m,
                         format_double(s.measures.at("sup_deviation").median), s.successes, s.trials,
                         to_string(s.verdict));
    if (opt.records) add_records(o, fmt::format("uc_records_m{}.csv", s.m), s.records);
  }
  for (std::size_t i = 0; i < r.median_ratio.size(); ++i) {
    lines += fmt::format("median ratio m = {} / m = {}: {}\n", r.per_m[i].m, r.per_m[i + 1].m,
                         format_double(r.median_ratio[i]));
  }
  if (r.per_m.size() >= 2) lines += fmt::format("log-log slope: {}\n", format_double(r.log_log_slope));
  if (!lines.empty()) lines.pop_back();
  o.summary = lines;
  o.files.insert(o.files.begin(), {"uc.csv", csv(summary_csv_header(), std::move(rows))});
  o.exit_code = any_fail ? kFail : any_indeterminate ? kIndeterminate : kOk;
  return o;
}

Outcome run_tradeoff(const Json& cfg, const Options& opt) {
  TradeoffConfig c{sequence_at(required(cfg, "sequence"), "$.sequence"),
                   distribution_at(required(cfg, "distribution"), "$.distribution")};
  c.m_values = count_list(cfg, "m_values", 1);
  c.trials = count(cfg, "trials", 1);
  c.delta = unit_open(cfg, "delta");
  c.C = positive(cfg, "C");
  c.seeds = seed_list(cfg, "seeds");
  c.risk = risk_options(cfg);
  c.workers = opt.workers;
  for (std::size_t i = 0; i < c.sequence.size(); ++i) {
    if (!c.sequence[i].vc_dimension) {
      throw ConfigError(fmt::format("$.sequence[{}].vc_dimension", i), "required for SRM");
    }
  }
  const auto t = tradeoff_sweep(c);
  Outcome o;
  o.result = to_json(t, opt.records);
  std::vector<std::string> rows;
  std::string lines = fmt::format("{:<5} {:>5} {:>6} {:>5} {:>14} {:>14} {:>14}\n", "rule", "class", "size", "m",
                                  "approximation", "estimation", "total");
  for (const auto& r : t.rows) {
    rows.push_back(tradeoff_csv_row(r));
    lines += fmt::format("{:<5} {:>5} {:>6} {:>5} {:>14.6f} {:>14.6f} {:>14.6f}\n", r.learner,
                         r.class_index ? fmt::format("{}", *r.class_index) : std::string("-"), r.class_size,
                         r.m, r.approximation, r.estimation, r.total);
  }
  lines.pop_back();
  o.summary = lines;
  o.files.push_back({"tradeoff.csv", csv(tradeoff_csv_header(), std::move(rows))});
  if (opt.records) {
    std::vector<std::string> recs;
    for (const auto& r : t.records) recs.push_back(tradeoff_records_csv_row(r));
    o.files.push_back({"tradeoff_records.csv", csv(tradeoff_records_csv_header(), std::move(recs))});
  }
  return o;
}

Outcome run_nfl(const Json& cfg, const Options&) {
  const auto ms = count_list(cfg, "m_values", 1);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] > kMaxNflM) {
      throw ConfigError(fmt::format("$.m_values[{}]", i),
                        fmt::format("exact enumeration supports m <= {}, got {}", kMaxNflM, ms[i]));
    }
  }
  std::vector<NflLearner> learners;
  const auto names = string_list(cfg, "learners");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == to_string(NflLearner::Memorizer)) {
      learners.push_back(NflLearner::Memorizer);
    } else if (names[i] == to_string(NflLearner::ErmAllFunctions)) {
      learners.push_back(NflLearner::ErmAllFunctions);
    } else {
      throw ConfigError(fmt::format("$.learners[{}]", i),
                        fmt::format("unknown learner '{}'; expected memorizer or erm_all_functions", names[i]));
    }
  }
  Outcome o;
  o.result = Json::array();
  std::vector<std::string> rows;
  std::string lines;
  for (std::size_t m : ms) {
    for (auto l : learners) {
      const auto r = nfl_exact(m, l);
      o.result.push_back(to_json(r));
      rows.push_back(nfl_csv_row(r));
      lines += fmt::format("m = {}, {}: average expected error {}/{} = {}, worst labeling {}\n", m, r.learner,
                           r.numerator, r.denominator, format_double(r.average), format_double(r.worst));
    }
  }
  lines.pop_back();
  o.summary = lines;
  o.files.push_back({"nfl.csv", csv(nfl_csv_header(), std::move(rows))});
  return o;
}

Outcome run_bounds(const Json& cfg, const Options&) {
  BoundParams p;
  p.d = count(cfg, "d");
  p.eps = unit_open(cfg, "eps");
  p.delta = unit_open(cfg, "delta");
  p.C = positive(cfg, "C");
  p.C1 = positive(cfg, "C1");
  p.C2 = positive(cfg, "C2");
  if (p.C1 > p.C2) throw ConfigError("$.C1", "must not exceed C2");
  const double b = (static_cast<double>(p.d) - std::log(p.delta)) / (p.eps * p.eps);
  p.m = is_set(cfg, "m") ? count(cfg, "m", 1) : static_cast<std::size_t>(std::ceil(b));
  const auto r = sample_complexity(p);
  Outcome o;
  o.result = to_json(r);
  o.result["m_source"] = is_set(cfg, "m") ? "config" : "ceil(b)";
  o.summary = fmt::format("b = (d - ln delta) / eps^2 = {}\nbracket: C1*b = {} <= m(eps, delta) <= C2*b = {}\n"
                          "eps_uc(m = {}) = C sqrt((d - ln delta) / m) = {}",
                          format_double(r.b), format_double(r.m_lower), format_double(r.m_upper), p.m,
                          format_double(r.eps_uc));
  o.files.push_back({"bounds.csv", csv(bound_csv_header(), {bound_csv_row(r)})});
  return o;
}

const std::map<std::string, std::function<Outcome(const Json&, const Options&)>, std::less<>>& handlers() {
  static const std::map<std::string, std::function<Outcome(const Json&, const Options&)>, std::less<>> table = {
      {"vcdim", run_vcdim}, {"risk", run_risk}, {"erm", run_erm},           {"srm", run_srm},
      {"pac", run_pac},     {"uc", run_uc},     {"tradeoff", run_tradeoff}, {"nfl", run_nfl},
      {"bounds", run_bounds}};
  return table;
}

Outcome dispatch(const ResolvedConfig& rc, const Options& opt) {
  try {
    return handlers().at(rc.command)(rc.config, opt);
  } catch (const ConfigError&) {
    throw;
  } catch (const NoAnalyticRisk& e) {
    throw ConfigError("$.mc_draws", fmt::format("{}; set mc_draws to estimate risks by Monte Carlo", e.what()));
  } catch (const BudgetExceeded& e) {
    throw ConfigError("$.grid", e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("$", e.what());
  }
}

}  // namespace

RunResult run(const Invocation& inv) {
  const auto start = std::chrono::steady_clock::now();
  if (inv.workers == 0) throw ConfigError("--workers", "must be >= 1");
  const auto rc = resolve(inv);
  auto outcome = dispatch(rc, Options{inv.workers, inv.records});

  RunResult result;
  result.exit_code = outcome.exit_code;
  result.summary = outcome.summary;
  const Json document = {{"tool", kToolName},
                         {"version", kToolVersion},
                         {"command", rc.command},
                         {"preset", rc.preset ? Json(*rc.preset) : Json(nullptr)},
                         {"config", rc.config},
                         {"result", outcome.result}};
  result.files.push_back({rc.command + ".json", dump(document)});
  for (auto& f : outcome.files) result.files.push_back(std::move(f));

  std::error_code ec;
  std::filesystem::create_directories(inv.out_dir, ec);
  if (ec) throw ConfigError("--out-dir", fmt::format("cannot create '{}': {}", inv.out_dir.string(), ec.message()));
  Json outputs = Json::array();
  for (const auto& f : result.files) {
    const auto path = inv.out_dir / f.name;
    {
      std::ofstream out(path, std::ios::binary);
      out << f.content;
      if (!out) throw ConfigError("--out-dir", fmt::format("cannot write '{}'", path.string()));
    }
    outputs.push_back({{"file", f.name}, {"bytes", f.content.size()}, {"sha256", sha256_file(path)}});
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.manifest = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"command", rc.command},
                     {"preset", rc.preset ? Json(*rc.preset) : Json(nullptr)},
                     {"config", rc.config},
                     {"runtime", {{"workers", inv.workers}, {"records", inv.records}, {"out_dir", inv.out_dir.string()}}},
                     {"exit_code", result.exit_code},
                     {"duration_seconds", seconds},
                     {"outputs", outputs}};
  std::ofstream(inv.out_dir / "manifest.json", std::ios::binary) << dump(result.manifest);
  return result;
}

}  // namespace slt::cli
