#include "upt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "upt/baselines.hpp"
#include "upt/config.hpp"
#include "upt/oracle.hpp"
#include "upt/version.hpp"

namespace upt {

const char* method_name(Method m) {
  switch (m) {
    case Method::bh:
      return "BH";
    case Method::by:
      return "BY";
    case Method::upt_ideal:
      return "UPT*";
    case Method::upt_estimated:
      return "UPT";
    case Method::oracle:
      return "ORACLE";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "bh") return Method::bh;
  if (k == "by") return Method::by;
  if (k == "upt*" || k == "upt_ideal" || k == "upt-ideal" || k == "upt-star" || k == "upt_star")
    return Method::upt_ideal;
  if (k == "upt" || k == "upt_estimated" || k == "upt-estimated") return Method::upt_estimated;
  if (k == "oracle") return Method::oracle;
  throw InvalidArgument("unknown method '" + s + "'");
}

Index ExperimentConfig::sample_size() const {
  if (n) return *n;
  if (phi) return static_cast<Index>(std::llround(std::pow(static_cast<double>(p), *phi)));
  throw InvalidArgument("experiment needs n or phi");
}

void ExperimentConfig::validate() const {
  if (p < 2) throw InvalidArgument("experiment needs p >= 2");
  if (reps < 1) throw InvalidArgument("reps must be at least 1");
  if (tau_grid.empty()) throw InvalidArgument("tau grid must be nonempty");
  if (methods.empty()) throw InvalidArgument("at least one method is required");
  if (t1_factor_grid.empty()) throw InvalidArgument("t1 factor grid must be nonempty");
  for (double f : t1_factor_grid)
    if (!(f > 0.0)) throw InvalidArgument("t1 factors must be positive");
  for (double t : tau_grid)
    if (!(t >= 0.0)) throw InvalidArgument("tau values must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (phi && !n && !(*phi > 1.0 - signal.theta && *phi < 1.0))
    throw InvalidArgument("phi must lie in (1 - theta, 1)");
  if (sample_size() < 3) throw InvalidArgument("n must be at least 3");
  if (covariance.p != p) throw InvalidArgument("covariance dimension differs from p");
  signal.validate();
  if (std::find(methods.begin(), methods.end(), Method::oracle) != methods.end()) {
    if (p > kOracleMaxDimension) throw InvalidArgument("oracle method needs p <= 12");
    if (signal.perturbation != 0.0) throw InvalidArgument("oracle method needs point-mass signals");
    if (!(oracle_lambda > 0.0)) throw InvalidArgument("oracle lambda must be positive");
  }
}

namespace {

ExperimentConfig base_experiment(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.p = 5000;
  c.n = 1000;
  c.covariance = CovarianceSpec::block_diagonal(c.p, 0.5);
  c.signal = SignalSpec::with_magnitude(0.5, 0.0);
  c.design = DesignKind::gaussian;
  c.tau_grid = {2.0, 4.0, 6.0, 8.0};
  c.methods = {Method::bh, Method::by, Method::upt_ideal, Method::upt_estimated};
  c.alpha = 0.05;
  c.reps = 100;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"EXP1", "EXP2", "EXP3", "EXP4", "EXP5", "SMOKE", "TABLE1"}; }

ExperimentConfig bh_inflation_preset(double a) {
  ExperimentConfig c;
  c.name = "TABLE1";
  c.p = 1000;
  c.n = 200;
  c.covariance = CovarianceSpec::block_diagonal(c.p, a);
  c.signal = SignalSpec::with_magnitude(0.5, 0.0);
  c.signal.support = SupportMode::balanced_count;
  c.tau_grid = {std::sqrt(2.0 * 0.7 * std::log(1000.0))};
  c.methods = {Method::bh};
  c.alpha = 0.05;
  c.reps = 100;
  return c;
}

ExperimentConfig preset(const std::string& raw) {
  std::string name;
  for (char ch : raw) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (name == "EXP1") return base_experiment(name);
  if (name == "EXP2" || name == "EXP3" || name == "EXP4" || name == "EXP5") {
    ExperimentConfig c = base_experiment(name);
    c.covariance = CovarianceSpec::penta_diagonal(c.p, 0.5, 0.1);
    c.signal.perturbation = 0.5;
    if (name == "EXP3") {
      c.methods = {Method::upt_ideal};
      c.t1_factor_grid = {0.90, 0.95, 1.00, 1.05, 1.10};
    }
    if (name == "EXP4" || name == "EXP5") c.design = DesignKind::uniform;
    if (name == "EXP5") {
      c.methods = {Method::bh, Method::upt_ideal, Method::upt_estimated};
      c.match_reference = Method::bh;
    }
    return c;
  }
  if (name == "SMOKE") {
    ExperimentConfig c = base_experiment(name);
    c.p = 1000;
    c.n = 300;
    c.covariance = CovarianceSpec::block_diagonal(c.p, 0.5);
    c.reps = 20;
    return c;
  }
  if (name == "TABLE1") return bh_inflation_preset(0.9);
  throw InvalidArgument("unknown preset '" + raw + "'");
}

const ResultRow* ResultsTable::find(Method m, double tau, double t1_factor) const {
  for (const auto& row : rows)
    if (row.key.method == m && std::abs(row.key.tau - tau) < 1e-12 && std::abs(row.key.t1_factor - t1_factor) < 1e-12)
      return &row;
  return nullptr;
}

bool ResultsTable::operator==(const ResultsTable& o) const {
  std::ostringstream a, b;
  write_results_csv(a, *this);
  write_results_csv(b, o);
  return a.str() == b.str() && metadata == o.metadata;
}

namespace {

template <typename F>
void parallel_for(Index count, unsigned threads, F&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<Index>(threads, count); ++t) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Context {
  const ExperimentConfig& config;
  Index p;
  Index n;
  LowerTriangularFactord factor;
  std::vector<double> factors;
  bool wants(Method m) const {
    return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
  }
};

Context make_context(const ExperimentConfig& config) {
  config.validate();
  Context ctx{config, config.p, config.sample_size(), factorize(build_covariance(config.covariance)), config.t1_factor_grid};
  std::sort(ctx.factors.begin(), ctx.factors.end());
  return ctx;
}

struct ReplicateData {
  Eigen::MatrixXd X;
  SignalPattern pattern;
  Eigen::VectorXd noise;
};

ReplicateData generate_replicate(const Context& ctx, Index rep) {
  const auto seed = ctx.config.master_seed;
  const auto r = static_cast<std::uint64_t>(rep);
  Rng signal_rng = make_rng(seed, r, Stream::signal);
  Rng design_rng = make_rng(seed, r, Stream::design);
  Rng noise_rng = make_rng(seed, r, Stream::noise);
  ReplicateData d;
  d.pattern = draw_signal_pattern(ctx.p, ctx.config.signal, signal_rng);
  d.X = ctx.config.design == DesignKind::gaussian ? draw_design_gaussian(ctx.n, ctx.factor, design_rng)
                                                  : draw_design_uniform(ctx.n, ctx.factor, design_rng);
  if (ctx.config.normalize_columns) normalize_columns(d.X);
  d.noise = standard_normal_vector(ctx.n, noise_rng);
  return d;
}

Eigen::VectorXd response_for(const ReplicateData& d, const Eigen::VectorXd& beta) {
  Index k = 0;
  return draw_response(d.X, beta, [&] { return d.noise(k++); });
}

UptSettings settings_for(const ExperimentConfig& c, double factor) {
  UptSettings s = c.tuning;
  s.t1_factor = factor;
  return s;
}

PreparedUpt prepare_upt(Method m, const Context& ctx, const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde,
                        double tau, const UptSettings& settings) {
  PreparedUpt prep = m == Method::upt_ideal
                         ? prepare_ideal(X, y_tilde, ctx.config.signal.theta, strength_exponent(tau, ctx.p), settings)
                         : prepare_estimated(X, y_tilde, settings);
  // Only components and their blocks are needed from here on.
  prep.problem.graph.gram_entries.clear();
  prep.problem.graph.gram_entries.shrink_to_fit();
  return prep;
}

ReplicateRecord upt_record(Method m, const Context& ctx, const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde,
                           const Indicator& theta, double tau, double factor, double alpha, Index rep) {
  ReplicateRecord rec;
  rec.replicate = rep;
  rec.key = {m, tau, factor};
  const UptSettings settings = settings_for(ctx.config, factor);
  try {
    const PreparedUpt prep = prepare_upt(m, ctx, X, y_tilde, tau, settings);
    rec.survivors = static_cast<Index>(prep.problem.graph.survivors.size());
    rec.max_component_size = prep.problem.graph.max_component_size;
    rec.estimates = prep.estimates;
    const TuningParams tuning = finalize_tuning(prep, alpha, settings);
    rec.tuning = tuning;
    rec.counts = confusion(theta, decide(prep, tuning, settings).delta);
  } catch (const ComponentTooLarge& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.max_component_size = e.size();
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

std::vector<ReplicateRecord> run_replicate(const Context& ctx, Index rep) {
  const ExperimentConfig& c = ctx.config;
  const ReplicateData data = generate_replicate(ctx, rep);
  std::vector<ReplicateRecord> out;
  for (double tau : c.tau_grid) {
    const Eigen::VectorXd beta = data.pattern.realize(tau);
    const Indicator theta = indicator_of(beta);
    const Eigen::VectorXd Y = response_for(data, beta);
    const Eigen::VectorXd y_tilde = marginal_stats(data.X, Y).y_tilde;

    auto simple = [&](Method m, auto&& decide_fn) {
      ReplicateRecord rec;
      rec.replicate = rep;
      rec.key = {m, tau, 1.0};
      try {
        rec.counts = confusion(theta, decide_fn());
      } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      out.push_back(std::move(rec));
    };
    if (ctx.wants(Method::bh) || ctx.wants(Method::by)) {
      const PValueVector pv = marginal_pvalues(data.X, Y);
      if (ctx.wants(Method::bh)) simple(Method::bh, [&] { return bh(pv.pvals, c.alpha); });
      if (ctx.wants(Method::by)) simple(Method::by, [&] { return by(pv.pvals, c.alpha); });
    }
    if (ctx.wants(Method::oracle)) {
      simple(Method::oracle, [&] {
        DiscretePrior prior;
        prior.pi1 = c.signal.signal_probability(ctx.p);
        prior.atoms = c.signal.random_sign ? std::vector<std::pair<double, double>>{{tau, 0.5}, {-tau, 0.5}}
                                           : std::vector<std::pair<double, double>>{{tau, 1.0}};
        return oracle_decide(exact_local_fdr(data.X, Y, prior), c.oracle_lambda);
      });
    }
    for (Method m : {Method::upt_ideal, Method::upt_estimated}) {
      if (!ctx.wants(m)) continue;
      for (double f : ctx.factors) out.push_back(upt_record(m, ctx, data.X, y_tilde, theta, tau, f, c.alpha, rep));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

ResultsTable build_table(const ExperimentConfig& config, const std::vector<ReplicateRecord>& records,
                         std::vector<std::string>* failures) {
  std::map<ResultKey, std::vector<const ReplicateRecord*>> groups;
  for (const auto& r : records) groups[r.key].push_back(&r);
  ResultsTable table;
  for (const auto& [key, recs] : groups) {
    ResultRow row;
    row.key = key;
    row.alpha = config.alpha;
    row.attempted = static_cast<Index>(recs.size());
    std::vector<ConfusionCounts> ok;
    for (const auto* r : recs) {
      if (r->ok) {
        ok.push_back(r->counts);
      } else {
        ++row.errors;
        row.last_error = r->error;
      }
    }
    if (!ok.empty()) row.summary = aggregate(ok);
    if (failures && static_cast<double>(row.errors) > kMaxErrorFraction * static_cast<double>(row.attempted)) {
      std::ostringstream os;
      os << method_name(key.method) << " tau=" << format_double(key.tau)
         << " t1_factor=" << format_double(key.t1_factor) << ": " << row.errors << "/" << row.attempted
         << " replicates failed (" << row.last_error << ")";
      failures->push_back(os.str());
    }
    table.rows.push_back(std::move(row));
  }
  table.metadata = {{"config_hash", config_hash(config)},
                    {"master_seed", std::to_string(config.master_seed)},
                    {"name", config.name},
                    {"reps", std::to_string(config.reps)},
                    {"version", kVersion}};
  return table;
}

[[noreturn]] void abort_run(const std::vector<std::string>& failures, ExperimentRun run) {
  std::string msg = "experiment aborted:";
  for (const auto& f : failures) msg += "\n  " + f;
  throw ExperimentAborted(msg, std::move(run));
}

}  // namespace

ExperimentRun run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const Context ctx = make_context(config);
  std::vector<std::vector<ReplicateRecord>> per_rep(config.reps);
  std::atomic<Index> done{0};
  std::mutex progress_mutex;
  parallel_for(config.reps, options.threads, [&](Index rep) {
    per_rep[rep] = run_replicate(ctx, rep);
    const Index d = ++done;
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(d, config.reps);
    }
  });
  ExperimentRun run;
  for (auto& v : per_rep)
    for (auto& r : v) run.records.push_back(std::move(r));
  std::vector<std::string> failures;
  run.table = build_table(config, run.records, &failures);
  if (!failures.empty()) abort_run(failures, std::move(run));
  return run;
}

MatchResult match_mfdr(const ExperimentConfig& config, Method reference, Method target, const RunOptions& options) {
  if (target != Method::upt_ideal && target != Method::upt_estimated && target != reference)
    throw InvalidArgument("match target must be UPT* or UPT");
  ExperimentConfig cfg = config;
  cfg.methods = {reference};
  cfg.t1_factor_grid = {1.0};
  MatchResult result;

  if (reference == target) {
    const ExperimentRun run = run_experiment(cfg, options);
    result.table = run.table;
    for (const auto& row : run.table.rows)
      result.outcomes.push_back({row.key.tau, row.summary.mfdr, cfg.alpha, row.summary.mfdr, 0, true, "reference equals target"});
    return result;
  }

  const Context ctx = make_context(cfg);
  const Index R = cfg.reps;
  const std::size_t T = cfg.tau_grid.size();
  struct Slot {
    std::optional<PreparedUpt> prep;
    std::string error;
    Indicator theta;
  };
  std::vector<std::vector<ReplicateRecord>> ref_records(R);
  std::vector<std::vector<Slot>> slots(R, std::vector<Slot>(T));
  const UptSettings settings = settings_for(cfg, 1.0);
  parallel_for(R, options.threads, [&](Index rep) {
    ref_records[rep] = run_replicate(ctx, rep);
    const ReplicateData data = generate_replicate(ctx, rep);
    for (std::size_t t = 0; t < T; ++t) {
      const double tau = cfg.tau_grid[t];
      const Eigen::VectorXd beta = data.pattern.realize(tau);
      Slot& s = slots[rep][t];
      s.theta = indicator_of(beta);
      const Eigen::VectorXd y_tilde = marginal_stats(data.X, response_for(data, beta)).y_tilde;
      try {
        s.prep = prepare_upt(target, ctx, data.X, y_tilde, tau, settings);
      } catch (const Error& e) {
        s.error = e.what();
      }
    }
  });

  std::vector<ReplicateRecord> records;
  for (auto& v : ref_records)
    for (auto& r : v) records.push_back(std::move(r));

  std::vector<ResultRow> target_rows;
  for (std::size_t t = 0; t < T; ++t) {
    const double tau = cfg.tau_grid[t];
    std::vector<ConfusionCounts> ref_counts;
    for (const auto& r : records)
      if (r.ok && r.key.tau == tau) ref_counts.push_back(r.counts);
    MatchOutcome outcome;
    outcome.tau = tau;
    if (ref_counts.empty()) {
      outcome.note = "reference failed on every replicate";
      result.outcomes.push_back(outcome);
      continue;
    }
    const MetricsSummary ref_summary = aggregate(ref_counts);
    outcome.reference_mfdr = ref_summary.mfdr;
    if (ref_summary.atp + ref_summary.afp <= 0.0) outcome.note = "reference made no discoveries";

    auto evaluate = [&](double alpha) {
      ResultRow row;
      row.key = {target, tau, 1.0};
      row.alpha = alpha;
      row.attempted = R;
      std::vector<ConfusionCounts> counts;
      for (Index rep = 0; rep < R; ++rep) {
        const Slot& s = slots[rep][t];
        if (!s.prep) {
          ++row.errors;
          row.last_error = s.error;
          continue;
        }
        try {
          const TuningParams tuning = finalize_tuning(*s.prep, alpha, settings);
          counts.push_back(confusion(s.theta, decide(*s.prep, tuning, settings).delta));
        } catch (const Error& e) {
          ++row.errors;
          row.last_error = e.what();
        }
      }
      if (!counts.empty()) row.summary = aggregate(counts);
      return row;
    };

    const double goal = ref_summary.mfdr;
    ResultRow best;
    double best_gap = std::numeric_limits<double>::infinity();
    auto consider = [&](const ResultRow& row) {
      const double gap = std::abs(row.summary.mfdr - goal);
      if (row.summary.rep_count > 0 && gap < best_gap) {
        best_gap = gap;
        best = row;
      }
      ++outcome.iterations;
      return row.summary.mfdr - goal;
    };
    double lo = 1e-6, hi = kMatchAlphaMax;
    const double d_hi = consider(evaluate(hi));
    const double d_lo = best_gap <= kMatchTolerance ? 0.0 : consider(evaluate(lo));
    if (best_gap > kMatchTolerance) {
      if (d_hi < 0.0) {
        outcome.note = "target mFDR stays below the reference up to alpha = 0.5";
      } else if (d_lo > 0.0) {
        outcome.note = "target mFDR exceeds the reference at the smallest alpha";
      } else {
        while (outcome.iterations < kMatchMaxIterations && best_gap > kMatchTolerance) {
          const double mid = 0.5 * (lo + hi);
          const double d = consider(evaluate(mid));
          (d < 0.0 ? lo : hi) = mid;
        }
      }
    }
    if (best.attempted == 0) best = evaluate(cfg.alpha);
    outcome.alpha = best.alpha;
    outcome.achieved_mfdr = best.summary.mfdr;
    outcome.converged = best_gap <= kMatchTolerance;
    if (!outcome.converged && outcome.note.empty()) outcome.note = "closest achieved value reported";
    result.outcomes.push_back(outcome);
    target_rows.push_back(best);
  }

  result.table = build_table(cfg, records, nullptr);
  for (auto& row : target_rows) result.table.rows.push_back(std::move(row));
  std::stable_sort(result.table.rows.begin(), result.table.rows.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });
  result.table.metadata["match_reference"] = method_name(reference);
  result.table.metadata["match_target"] = method_name(target);
  return result;
}

namespace {

constexpr const char* kResultsHeader =
    "method,tau,t1_factor,alpha,rep_count,attempted,errors,atp,atp_se,afp,afp_se,fdr,fdr_se,fnr,fnr_se,"
    "mfdr,mfdr_se,mfnr,mfnr_se,fwer,fwer_se,mean_hamming,hamming_se";

}  // namespace

void write_results_csv(std::ostream& out, const ResultsTable& table) {
  out << kResultsHeader << '\n';
  for (const auto& row : table.rows) {
    const auto& s = row.summary;
    out << method_name(row.key.method) << ',' << format_double(row.key.tau) << ','
        << format_double(row.key.t1_factor) << ',' << format_double(row.alpha) << ',' << s.rep_count << ','
        << row.attempted << ',' << row.errors;
    for (double v : {s.atp, s.atp_se, s.afp, s.afp_se, s.fdr, s.fdr_se, s.fnr, s.fnr_se, s.mfdr, s.mfdr_se, s.mfnr,
                     s.mfnr_se, s.fwer, s.fwer_se, s.mean_hamming, s.hamming_se})
      out << ',' << format_double(v);
    out << '\n';
  }
}

ResultsTable parse_results_csv(std::istream& in, const std::string& source) {
  ResultsTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kResultsHeader) throw ParseError(source, line_no, "unexpected results header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 23) throw ParseError(source, line_no, "expected 23 fields, found " + std::to_string(f.size()));
    try {
      ResultRow row;
      row.key.method = parse_method(f[0]);
      row.key.tau = std::stod(f[1]);
      row.key.t1_factor = std::stod(f[2]);
      row.alpha = std::stod(f[3]);
      row.summary.rep_count = std::stoll(f[4]);
      row.attempted = std::stoll(f[5]);
      row.errors = std::stoll(f[6]);
      double* dst[] = {&row.summary.atp,  &row.summary.atp_se,  &row.summary.afp,  &row.summary.afp_se,
                       &row.summary.fdr,  &row.summary.fdr_se,  &row.summary.fnr,  &row.summary.fnr_se,
                       &row.summary.mfdr, &row.summary.mfdr_se, &row.summary.mfnr, &row.summary.mfnr_se,
                       &row.summary.fwer, &row.summary.fwer_se, &row.summary.mean_hamming,
                       &row.summary.hamming_se};
      for (std::size_t k = 0; k < 16; ++k) *dst[k] = std::stod(f[7 + k]);
      table.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!header) throw ParseError(source, line_no, "empty results file");
  return table;
}

void write_replicate_csv(std::ostream& out, const std::vector<ReplicateRecord>& records) {
  out << "replicate,method,tau,t1_factor,status,tp,fp,fn,tn,survivors,max_component_size,error\n";
  for (const auto& r : records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << r.replicate << ',' << method_name(r.key.method) << ',' << format_double(r.key.tau) << ','
        << format_double(r.key.t1_factor) << ',' << (r.ok ? "ok" : "error") << ',' << r.counts.tp << ','
        << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ',' << r.survivors << ','
        << r.max_component_size << ',' << err << '\n';
  }
}

void write_tuning_audit(std::ostream& out, const std::vector<ReplicateRecord>& records) {
  for (const auto& r : records) {
    if (!r.tuning && !r.estimates) continue;
    out << "[replicate=" << r.replicate << " method=" << method_name(r.key.method)
        << " tau=" << format_double(r.key.tau) << " t1_factor=" << format_double(r.key.t1_factor) << "]\n";
    if (r.estimates) {
      out << "theta_hat=" << format_double(r.estimates->theta_hat) << '\n'
          << "r_hat=" << format_double(r.estimates->r_hat) << '\n'
          << "f_bar=" << format_double(r.estimates->f_bar) << '\n'
          << "mu_bar=" << format_double(r.estimates->mu_bar) << '\n';
    }
    if (r.tuning) out << audit_block(*r.tuning);
    out << '\n';
  }
}

void write_run_outputs(const std::filesystem::path& dir, const ExperimentRun& run) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, run.table);
  }
  {
    auto f = open("replicates.csv");
    write_replicate_csv(f, run.records);
  }
  {
    auto f = open("tuning_audit.txt");
    write_tuning_audit(f, run.records);
  }
  {
    auto f = open("metadata.txt");
    write_key_values(f, run.table.metadata);
  }
}

}  // namespace upt
