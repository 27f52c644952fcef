#include "upt/oracle.hpp"

#include <cmath>
#include <limits>

#include "upt/datagen.hpp"
#include "upt/error.hpp"

namespace upt {

void DiscretePrior::validate() const {
  if (!(pi1 >= 0.0 && pi1 < 1.0)) throw InvalidArgument("prior signal probability must lie in [0, 1)");
  if (atoms.empty()) throw InvalidArgument("prior needs at least one signal atom");
  double total = 0.0;
  for (const auto& [value, weight] : atoms) {
    if (value == 0.0) throw InvalidArgument("signal atoms must be nonzero");
    if (!(weight > 0.0)) throw InvalidArgument("atom weights must be positive");
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("atom weights must sum to 1");
}

LocalFdrVector exact_local_fdr(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const DiscretePrior& prior) {
  prior.validate();
  const Index p = X.cols();
  if (p > kOracleMaxDimension)
    throw InvalidArgument("exact local fdr enumerates (1 + atoms)^p configurations; p must be <= " +
                          std::to_string(kOracleMaxDimension));
  if (Y.size() != X.rows()) throw InvalidArgument("exact_local_fdr: X rows differ from Y length");

  LocalFdrVector out;
  out.fdr = Eigen::VectorXd::Ones(p);
  if (prior.pi1 == 0.0 || p == 0) return out;

  const Index levels = static_cast<Index>(prior.atoms.size()) + 1;
  std::vector<double> value(levels, 0.0), log_weight(levels);
  log_weight[0] = std::log1p(-prior.pi1);
  for (Index a = 1; a < levels; ++a) {
    value[a] = prior.atoms[a - 1].first;
    log_weight[a] = std::log(prior.pi1) + std::log(prior.atoms[a - 1].second);
  }

  // log likelihood up to a constant: beta'X'Y - 1/2 beta'X'X beta
  const Eigen::MatrixXd gram = X.transpose() * X;
  const Eigen::VectorXd xty = X.transpose() * Y;

  Index configs = 1;
  for (Index i = 0; i < p; ++i) configs *= levels;
  std::vector<double> log_post(configs);
  std::vector<int> code(p, 0);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double max_log = -std::numeric_limits<double>::infinity();
  for (Index c = 0; c < configs; ++c) {
    double lw = 0.0;
    for (Index i = 0; i < p; ++i) {
      beta(i) = value[code[i]];
      lw += log_weight[code[i]];
    }
    const double ll = beta.dot(xty) - 0.5 * beta.dot(gram * beta);
    log_post[c] = lw + ll;
    max_log = std::max(max_log, log_post[c]);
    for (Index i = 0; i < p && ++code[i] == levels; ++i) code[i] = 0;
  }

  double total = 0.0;
  Eigen::VectorXd null_mass = Eigen::VectorXd::Zero(p);
  std::fill(code.begin(), code.end(), 0);
  for (Index c = 0; c < configs; ++c) {
    const double w = std::exp(log_post[c] - max_log);
    total += w;
    for (Index i = 0; i < p; ++i)
      if (code[i] == 0) null_mass(i) += w;
    for (Index i = 0; i < p && ++code[i] == levels; ++i) code[i] = 0;
  }
  out.fdr = (null_mass / total).cwiseMin(1.0).cwiseMax(0.0);
  double check = 0.0;
  for (Index c = 0; c < configs; ++c) check += std::exp(log_post[c] - max_log) / total;
  out.total_weight = check;
  return out;
}

Indicator oracle_decide(const LocalFdrVector& fdr, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const double cut = 1.0 / (1.0 + lambda);
  return (fdr.fdr.array() <= cut).cast<int>().matrix();
}

double weighted_loss(const Indicator& theta, const Indicator& delta, double lambda) {
  if (theta.size() != delta.size()) throw InvalidArgument("weighted_loss: length mismatch");
  double loss = 0.0;
  for (Index i = 0; i < theta.size(); ++i)
    loss += lambda * (1 - theta(i)) * delta(i) + theta(i) * (1 - delta(i));
  return loss;
}

Eigen::VectorXd draw_from_prior(Index p, const DiscretePrior& prior, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (Index i = 0; i < p; ++i) {
    const bool on = unit(rng) < prior.pi1;
    double u = unit(rng);
    double v = prior.atoms.back().first;
    for (const auto& [value, weight] : prior.atoms) {
      if (u < weight) {
        v = value;
        break;
      }
      u -= weight;
    }
    if (on) beta(i) = v;
  }
  return beta;
}

RiskEstimate oracle_risk_formula(const Eigen::MatrixXd& X, const DiscretePrior& prior, double lambda,
                                 Index reps, Rng& rng) {
  prior.validate();
  if (reps < 2) throw InvalidArgument("risk estimate needs at least 2 draws");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const Index p = X.cols();
  const double cut = 1.0 / (1.0 + lambda);
  double sum = 0.0, sum_sq = 0.0;
  for (Index r = 0; r < reps; ++r) {
    const Eigen::VectorXd beta = draw_from_prior(p, prior, rng);
    const Eigen::VectorXd Y = draw_response(X, beta, rng);
    const LocalFdrVector f = exact_local_fdr(X, Y, prior);
    double term = static_cast<double>(p) * prior.pi1;
    for (Index i = 0; i < p; ++i)
      if (f.fdr(i) <= cut) term += (lambda + 1.0) * f.fdr(i) - 1.0;
    sum += term;
    sum_sq += term * term;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace upt
