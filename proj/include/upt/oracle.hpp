#pragma once

// Exact posterior null probabilities for tiny p by enumerating every joint
// coefficient configuration of a discrete prior, the threshold rule built on
// them, and a Monte Carlo estimate of that rule's risk.

#include <utility>
#include <vector>

#include "upt/common.hpp"

namespace upt {

struct DiscretePrior {
  double pi1 = 0.1;
  // Signal atoms (value, weight); weights sum to 1, no atom at 0.
  std::vector<std::pair<double, double>> atoms;

  static DiscretePrior symmetric(double pi1, double tau) { return {pi1, {{tau, 0.5}, {-tau, 0.5}}}; }
  void validate() const;
};

struct LocalFdrVector {
  Eigen::VectorXd fdr;
  // Sum of normalized posterior weights; 1 up to rounding.
  double total_weight = 1.0;
};

inline constexpr Index kOracleMaxDimension = 12;

// fdr_i = P(beta_i = 0 | Y) under Y = X beta + N(0, I_n), beta_i iid from the prior.
LocalFdrVector exact_local_fdr(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const DiscretePrior& prior);

// delta_i = 1{fdr_i <= 1 / (1 + lambda)}.
Indicator oracle_decide(const LocalFdrVector& fdr, double lambda);

// sum_i lambda (1 - theta_i) delta_i + theta_i (1 - delta_i)
double weighted_loss(const Indicator& theta, const Indicator& delta, double lambda);

struct RiskEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Monte Carlo mean over (beta, Y) draws of
//   sum_i 1{fdr_i <= 1/(1+lambda)} ((lambda + 1) fdr_i - 1) + pi1.
RiskEstimate oracle_risk_formula(const Eigen::MatrixXd& X, const DiscretePrior& prior, double lambda,
                                 Index reps, Rng& rng);

// beta_i iid from the prior.
Eigen::VectorXd draw_from_prior(Index p, const DiscretePrior& prior, Rng& rng);

}  // namespace upt
