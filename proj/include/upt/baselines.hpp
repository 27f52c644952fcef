#pragma once

// Marginal simple-regression t tests and the BH / BY step-up procedures.

#include <vector>

#include "upt/common.hpp"

namespace upt {

struct PValueVector {
  Eigen::VectorXd pvals;
  Eigen::VectorXd tstats;
  Index dof = 0;
  // Columns with zero variance; their p-value is 1.
  std::vector<Index> degenerate;
};

// Per predictor: OLS of Y on (1, X_i), two-sided t test on the slope with n - 2 dof.
PValueVector marginal_pvalues(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y);

// Two-sided Student t p-value 2 P(T > |t|).
double two_sided_t_pvalue(double t, double dof);

// Step-up at level alpha: reject the k* smallest, k* = max{k : p_(k) <= k alpha / m}.
Indicator bh(const Eigen::VectorXd& pvals, double alpha);

// BH at alpha / H_m with H_m = sum_{i<=m} 1/i.
Indicator by(const Eigen::VectorXd& pvals, double alpha);

double harmonic_number(Index m);

}  // namespace upt
