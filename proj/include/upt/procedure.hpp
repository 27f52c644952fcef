#pragma once

// UPT with ideal (known theta, r) or estimated tuning. Preparation screens and
// decomposes once; the alpha-dependent t2 and the cleaning step run after, so
// one prepared problem can be decided at several nominal levels.

#include <optional>

#include "upt/cleaning.hpp"
#include "upt/tuning.hpp"
#include "upt/upt.hpp"

namespace upt {

struct UptSettings {
  std::optional<double> q;  // screening exponent; theta (ideal) or two-pass estimate
  std::optional<double> K;  // default: max component size, floor 5
  CleanOptions clean;
  std::optional<double> gram_threshold;
  Sidedness sidedness = Sidedness::two_sided;
  double pilot_q = 0.25;
  bool clamp_negative_radicand = false;
  double t1_factor = 1.0;
};

struct PreparedUpt {
  ScreenedProblem problem;
  TuningSource source = TuningSource::ideal;
  double theta = 0.0;
  double r = 0.0;
  double q = 0.0;
  double K = 5.0;
  std::optional<TailEstimates> estimates;
};

// Throws ComponentTooLarge when the screened graph has a component over the cap.
PreparedUpt prepare_ideal(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde, double theta, double r,
                          const UptSettings& settings);
PreparedUpt prepare_estimated(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde,
                              const UptSettings& settings);

TuningParams finalize_tuning(const PreparedUpt& prepared, double alpha, const UptSettings& settings);
DecisionVector decide(const PreparedUpt& prepared, const TuningParams& tuning, const UptSettings& settings);

}  // namespace upt
