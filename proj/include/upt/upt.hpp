#pragma once

// End-to-end screening -> Gram decomposition -> cleaning decision pipeline.

#include <cstdint>
#include <optional>
#include <vector>

#include "upt/cleaning.hpp"
#include "upt/common.hpp"
#include "upt/gram_graph.hpp"
#include "upt/tuning.hpp"

namespace upt {

enum class Provenance : std::uint8_t { screened_out, cleaned_zero, selected };

const char* to_string(Provenance p);

struct DecisionVector {
  Indicator delta;
  std::vector<Provenance> provenance;

  Index rejections() const { return delta.sum(); }
};

// Screening and decomposition do not depend on t2 or t3, so one screened
// problem can be cleaned at many (t2, t3).
struct ScreenedProblem {
  Index p = 0;
  double t1 = 0.0;
  Eigen::VectorXd y_tilde;
  ComponentGraph<double> graph;
};

struct PipelineOptions {
  CleanOptions clean;
  std::optional<double> gram_threshold;  // default log^-2(p)
};

ScreenedProblem screen_and_decompose(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, double t1,
                                     std::optional<double> gram_threshold = std::nullopt);
// Same, from precomputed X'Y.
ScreenedProblem screen_marginals(const Eigen::MatrixXd& X, Eigen::VectorXd y_tilde, double t1,
                                     std::optional<double> gram_threshold = std::nullopt);

// Cleans every component; throws ComponentTooLarge if one exceeds the cap.
DecisionVector clean_components(const ScreenedProblem& problem, double t2, double t3,
                                const CleanOptions& options = {});

DecisionVector upt_decide(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const TuningParams& params,
                          const PipelineOptions& options = {});

}  // namespace upt
