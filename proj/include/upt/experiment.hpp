#pragma once

// Replicated simulation experiments: configuration, presets, the replication
// loop, and nominal-level matching between methods.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "upt/covariance.hpp"
#include "upt/datagen.hpp"
#include "upt/error.hpp"
#include "upt/io.hpp"
#include "upt/metrics.hpp"
#include "upt/procedure.hpp"

namespace upt {

enum class Method { bh, by, upt_ideal, upt_estimated, oracle };

// Display names: UPT*, UPT, BH, BY, ORACLE.
const char* method_name(Method m);
// Accepts display names and snake_case ids, case-insensitive (upt*, upt_ideal, upt-star, upt, ...).
Method parse_method(const std::string& s);

struct ExperimentConfig {
  std::string name = "custom";
  Index p = 1000;
  std::optional<Index> n;
  std::optional<double> phi;  // n = round(p^phi) when n is absent
  CovarianceSpec covariance = CovarianceSpec::identity(0);
  SignalSpec signal = SignalSpec::with_magnitude(0.5, 0.0);  // magnitude comes from tau_grid
  DesignKind design = DesignKind::gaussian;
  std::vector<double> tau_grid;
  std::vector<Method> methods;
  double alpha = 0.05;
  Index reps = 100;
  std::uint64_t master_seed = 20150101;
  std::vector<double> t1_factor_grid{1.0};
  UptSettings tuning;
  double oracle_lambda = 1.0;
  bool normalize_columns = false;
  std::optional<Method> match_reference;
  std::string output_dir;

  Index sample_size() const;
  void validate() const;
};

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);
// Block-diagonal BH inflation study at correlation a (p = 1000, n = 200).
ExperimentConfig bh_inflation_preset(double a);

struct ResultKey {
  Method method = Method::bh;
  double tau = 0.0;
  double t1_factor = 1.0;
  auto operator<=>(const ResultKey&) const = default;
};

struct ResultRow {
  ResultKey key;
  MetricsSummary summary;
  double alpha = 0.05;
  Index attempted = 0;
  Index errors = 0;
  std::string last_error;
};

struct ResultsTable {
  std::vector<ResultRow> rows;  // sorted by key
  KeyValues metadata;

  const ResultRow* find(Method m, double tau, double t1_factor = 1.0) const;
  bool operator==(const ResultsTable&) const;
};

struct ReplicateRecord {
  Index replicate = 0;
  ResultKey key;
  bool ok = true;
  std::string error;
  ConfusionCounts counts;
  Index survivors = 0;
  Index max_component_size = 0;
  std::optional<TuningParams> tuning;
  std::optional<TailEstimates> estimates;
};

struct RunOptions {
  unsigned threads = 1;
  std::function<void(Index done, Index total)> progress;
};

struct ExperimentRun {
  ResultsTable table;
  std::vector<ReplicateRecord> records;  // ordered by (replicate, key)
};

// Raised when more than 5% of the replicates of some row failed; carries
// everything computed.
class ExperimentAborted : public Error {
 public:
  ExperimentAborted(const std::string& what, ExperimentRun partial)
      : Error(what), partial_(std::move(partial)) {}
  const ExperimentRun& partial() const { return partial_; }

 private:
  ExperimentRun partial_;
};

inline constexpr double kMaxErrorFraction = 0.05;

ExperimentRun run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct MatchOutcome {
  double tau = 0.0;
  double reference_mfdr = 0.0;
  double alpha = 0.0;  // nominal level chosen for the target
  double achieved_mfdr = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string note;
};

struct MatchResult {
  ResultsTable table;
  std::vector<MatchOutcome> outcomes;
};

inline constexpr double kMatchTolerance = 0.005;
inline constexpr int kMatchMaxIterations = 25;
inline constexpr double kMatchAlphaMax = 0.5;

// Bisection on the target's nominal alpha in (0, 0.5] until its empirical mFDR
// is within 0.005 of the reference method's, separately for each tau.
MatchResult match_mfdr(const ExperimentConfig& config, Method reference, Method target,
                       const RunOptions& options = {});

// Results CSV: one row per key with every summary field and its SE.
void write_results_csv(std::ostream& out, const ResultsTable& table);
ResultsTable parse_results_csv(std::istream& in, const std::string& source_name);

void write_replicate_csv(std::ostream& out, const std::vector<ReplicateRecord>& records);
void write_tuning_audit(std::ostream& out, const std::vector<ReplicateRecord>& records);

// Writes results.csv, replicates.csv, tuning_audit.txt, metadata.txt into dir.
void write_run_outputs(const std::filesystem::path& dir, const ExperimentRun& run);

}  // namespace upt
