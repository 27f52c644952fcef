#pragma once

// UPT on user-supplied data: decisions, provenance, X'Y and the tuning audit.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "upt/procedure.hpp"

namespace upt {

struct AnalyzeRequest {
  double alpha = 0.05;
  // Ideal mode when both are set; estimated mode otherwise.
  std::optional<double> theta;
  std::optional<double> r;
  UptSettings settings;
};

struct AnalyzeReport {
  TuningParams tuning;
  DecisionVector decision;
  Eigen::VectorXd y_tilde;
  std::optional<TailEstimates> estimates;
  Index survivors = 0;
  Index max_component_size = 0;
};

AnalyzeReport analyze(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const AnalyzeRequest& request);
AnalyzeReport analyze_files(const std::filesystem::path& x_csv, const std::filesystem::path& y_csv,
                            const AnalyzeRequest& request);

// Audit block as "# key=value" lines, then index,decision,provenance,y_tilde rows (0-based index).
void write_report(std::ostream& out, const AnalyzeReport& report);

}  // namespace upt
