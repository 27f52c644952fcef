#include "upt/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace upt {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string where, const std::string& source) : j_(j), where_(std::move(where)), source_(source) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, 0, (where_.empty() ? std::string() : where_ + ": ") + what);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <typename T>
  void get(const char* key, T& dst) {
    if (!has(key)) return;
    try {
      dst = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail("bad value for '" + std::string(key) + "'");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& dst) {
    if (!has(key)) return;
    T v{};
    get(key, v);
    dst = v;
  }

  Reader child(const char* key) {
    seen_.insert(key);
    return Reader(j_.at(key), where_.empty() ? key : where_ + "." + key, source_);
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail("unknown key '" + item.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  const std::string& source_;
  std::set<std::string> seen_;
};

template <typename E>
E pick(Reader& r, const std::string& value, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, e] : options)
    if (value == name) return e;
  r.fail("unrecognized value '" + value + "'");
}

const char* covariance_name(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::identity:
      return "identity";
    case CovarianceKind::block_diagonal:
      return "block_diagonal";
    case CovarianceKind::penta_diagonal:
      return "penta_diagonal";
    case CovarianceKind::custom:
      return "custom";
  }
  return "?";
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::string& source) {
  Reader r(j, "", source);
  ExperimentConfig c;
  std::string base;
  r.get("preset", base);
  if (!base.empty()) c = preset(base);

  r.get("name", c.name);
  r.get("p", c.p);
  if (r.has("n")) {
    Index n = 0;
    r.get("n", n);
    c.n = n;
    c.phi.reset();
  }
  if (r.has("phi")) {
    double phi = 0.0;
    r.get("phi", phi);
    c.phi = phi;
    if (!j.contains("n")) c.n.reset();
  }

  if (r.has("covariance")) {
    Reader cr = r.child("covariance");
    std::string kind = covariance_name(c.covariance.kind);
    cr.get("kind", kind);
    c.covariance.kind = pick<CovarianceKind>(cr, kind,
                                             {{"identity", CovarianceKind::identity},
                                              {"block_diagonal", CovarianceKind::block_diagonal},
                                              {"penta_diagonal", CovarianceKind::penta_diagonal},
                                              {"custom", CovarianceKind::custom}});
    cr.get("a", c.covariance.a);
    cr.get("a1", c.covariance.a1);
    cr.get("a2", c.covariance.a2);
    if (cr.has("matrix")) {
      std::vector<std::vector<double>> rows;
      cr.get("matrix", rows);
      Eigen::MatrixXd m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Index>(rows[i].size()) != m.cols()) cr.fail("ragged matrix");
        for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
      }
      c.covariance.custom = std::move(m);
    }
    if (c.covariance.kind == CovarianceKind::custom && c.covariance.custom.size() == 0)
      cr.fail("custom covariance needs 'matrix'");
    cr.finish();
  }
  // The covariance dimension follows p unless a custom matrix fixes it.
  if (c.covariance.kind == CovarianceKind::custom)
    c.covariance.p = c.covariance.custom.rows();
  else
    c.covariance.p = c.p;

  if (r.has("signal")) {
    Reader sr = r.child("signal");
    sr.get("theta", c.signal.theta);
    sr.get("perturbation", c.signal.perturbation);
    sr.get("random_sign", c.signal.random_sign);
    std::string support = c.signal.support == SupportMode::bernoulli ? "bernoulli" : "balanced_count";
    sr.get("support", support);
    c.signal.support = pick<SupportMode>(
        sr, support, {{"bernoulli", SupportMode::bernoulli}, {"balanced_count", SupportMode::balanced_count}});
    sr.finish();
  }

  if (r.has("design")) {
    std::string d;
    r.get("design", d);
    c.design = pick<DesignKind>(r, d, {{"gaussian", DesignKind::gaussian}, {"uniform", DesignKind::uniform}});
  }
  r.get("tau_grid", c.tau_grid);
  if (r.has("methods")) {
    std::vector<std::string> names;
    r.get("methods", names);
    c.methods.clear();
    try {
      for (const auto& n : names) c.methods.push_back(parse_method(n));
    } catch (const InvalidArgument& e) {
      r.fail(e.what());
    }
  }
  r.get("alpha", c.alpha);
  r.get("reps", c.reps);
  r.get("seed", c.master_seed);
  r.get("t1_factor_grid", c.t1_factor_grid);
  r.get("oracle_lambda", c.oracle_lambda);
  r.get("normalize_columns", c.normalize_columns);
  r.get("output_dir", c.output_dir);
  if (r.has("match_reference")) {
    std::string m;
    r.get("match_reference", m);
    try {
      c.match_reference = parse_method(m);
    } catch (const InvalidArgument& e) {
      r.fail(e.what());
    }
  }

  if (r.has("tuning")) {
    Reader tr = r.child("tuning");
    UptSettings& t = c.tuning;
    tr.get("q", t.q);
    tr.get("K", t.K);
    tr.get("gram_threshold", t.gram_threshold);
    tr.get("pilot_q", t.pilot_q);
    tr.get("clamp_negative_radicand", t.clamp_negative_radicand);
    tr.get("max_component_size", t.clean.max_component_size);
    if (tr.has("sidedness")) {
      std::string s;
      tr.get("sidedness", s);
      t.sidedness = pick<Sidedness>(tr, s, {{"one_sided", Sidedness::one_sided}, {"two_sided", Sidedness::two_sided}});
    }
    if (tr.has("sign_mode")) {
      std::string s;
      tr.get("sign_mode", s);
      t.clean.sign_mode = pick<SignMode>(tr, s, {{"one_sided", SignMode::one_sided}, {"both_signs", SignMode::both_signs}});
    }
    if (tr.has("penalty")) {
      std::string s;
      tr.get("penalty", s);
      t.clean.penalty = pick<PenaltyConvention>(
          tr, s, {{"half_squared", PenaltyConvention::half_squared}, {"squared", PenaltyConvention::squared}});
    }
    tr.finish();
  }
  r.finish();

  try {
    c.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return config_from_json(j, path.string());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["p"] = c.p;
  if (c.n) j["n"] = *c.n;
  if (c.phi) j["phi"] = *c.phi;
  json cov{{"kind", covariance_name(c.covariance.kind)}};
  switch (c.covariance.kind) {
    case CovarianceKind::identity:
      break;
    case CovarianceKind::block_diagonal:
      cov["a"] = c.covariance.a;
      break;
    case CovarianceKind::penta_diagonal:
      cov["a1"] = c.covariance.a1;
      cov["a2"] = c.covariance.a2;
      break;
    case CovarianceKind::custom: {
      json rows = json::array();
      for (Index i = 0; i < c.covariance.custom.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < c.covariance.custom.cols(); ++k) row.push_back(c.covariance.custom(i, k));
        rows.push_back(row);
      }
      cov["matrix"] = rows;
      break;
    }
  }
  j["covariance"] = cov;
  j["signal"] = {{"theta", c.signal.theta},
                 {"perturbation", c.signal.perturbation},
                 {"random_sign", c.signal.random_sign},
                 {"support", c.signal.support == SupportMode::bernoulli ? "bernoulli" : "balanced_count"}};
  j["design"] = c.design == DesignKind::gaussian ? "gaussian" : "uniform";
  j["tau_grid"] = c.tau_grid;
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["alpha"] = c.alpha;
  j["reps"] = c.reps;
  j["seed"] = c.master_seed;
  j["t1_factor_grid"] = c.t1_factor_grid;
  j["oracle_lambda"] = c.oracle_lambda;
  j["normalize_columns"] = c.normalize_columns;
  if (c.match_reference) j["match_reference"] = method_name(*c.match_reference);
  json t;
  if (c.tuning.q) t["q"] = *c.tuning.q;
  if (c.tuning.K) t["K"] = *c.tuning.K;
  if (c.tuning.gram_threshold) t["gram_threshold"] = *c.tuning.gram_threshold;
  t["pilot_q"] = c.tuning.pilot_q;
  t["clamp_negative_radicand"] = c.tuning.clamp_negative_radicand;
  t["max_component_size"] = c.tuning.clean.max_component_size;
  t["sidedness"] = c.tuning.sidedness == Sidedness::two_sided ? "two_sided" : "one_sided";
  t["sign_mode"] = c.tuning.clean.sign_mode == SignMode::both_signs ? "both_signs" : "one_sided";
  t["penalty"] = c.tuning.clean.penalty == PenaltyConvention::half_squared ? "half_squared" : "squared";
  j["tuning"] = t;
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string s = config_to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace upt
