#include "upt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "upt/error.hpp"

namespace upt {

void SignalSpec::validate() const {
  if (!(theta > 0.0)) throw InvalidArgument("signal sparsity exponent theta must be positive");
  if (r.has_value() == tau_abs.has_value())
    throw InvalidArgument("signal spec needs exactly one of r and tau_abs");
  if (r && !(*r >= 0.0)) throw InvalidArgument("strength exponent r must be non-negative");
  if (tau_abs && !(*tau_abs >= 0.0)) throw InvalidArgument("signal magnitude must be non-negative");
  if (!(perturbation >= 0.0)) throw InvalidArgument("perturbation half-width must be non-negative");
}

double SignalSpec::signal_probability(Index p) const { return std::pow(static_cast<double>(p), -theta); }

double SignalSpec::magnitude(Index p) const {
  if (tau_abs) return *tau_abs;
  return std::sqrt(2.0 * r.value() * std::log(static_cast<double>(p)));
}

double strength_exponent(double tau, Index p) {
  return tau * tau / (2.0 * std::log(static_cast<double>(p)));
}

Eigen::VectorXd SignalPattern::realize(double tau) const {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < support.size(); ++k) beta(support[k]) = sign[k] * (tau + offset[k]);
  return beta;
}

Indicator indicator_of(const Eigen::VectorXd& beta) {
  return (beta.array() != 0.0).cast<int>().matrix();
}

SignalPattern draw_signal_pattern(Index p, const SignalSpec& spec, Rng& rng) {
  spec.validate();
  SignalPattern pat;
  pat.p = p;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = spec.perturbation;
  auto offset = [&] { return u > 0.0 ? u * (2.0 * unit(rng) - 1.0) : 0.0; };

  if (spec.support == SupportMode::bernoulli) {
    const double pi1 = spec.signal_probability(p);
    for (Index i = 0; i < p; ++i) {
      // Three draws per coordinate keep the stream layout independent of which
      // coordinates end up selected.
      const bool on = unit(rng) < pi1;
      const double s = spec.random_sign ? (unit(rng) < 0.5 ? -1.0 : 1.0) : 1.0;
      const double o = offset();
      if (on) {
        pat.support.push_back(i);
        pat.sign.push_back(s);
        pat.offset.push_back(o);
      }
    }
  } else {
    const auto count = std::min<Index>(
        p, static_cast<Index>(std::ceil(std::pow(static_cast<double>(p), 1.0 - spec.theta) - 1e-9)));
    std::vector<Index> idx(p);
    std::iota(idx.begin(), idx.end(), Index{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    std::vector<double> signs(count, 1.0);
    if (spec.random_sign) {
      for (Index k = count / 2 + count % 2; k < count; ++k) signs[k] = -1.0;
      std::shuffle(signs.begin(), signs.end(), rng);
    }
    pat.support = std::move(idx);
    pat.sign = std::move(signs);
    for (Index k = 0; k < count; ++k) pat.offset.push_back(offset());
  }
  return pat;
}

SignalDraw draw_beta(Index p, const SignalSpec& spec, Rng& rng) {
  const SignalPattern pat = draw_signal_pattern(p, spec, rng);
  SignalDraw d;
  d.beta = pat.realize(spec.magnitude(p));
  d.theta = indicator_of(d.beta);
  return d;
}

Eigen::MatrixXd draw_design_gaussian(Index n, const LowerTriangularFactord& factor, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Z(n, factor.p());
  for (Index j = 0; j < Z.cols(); ++j)
    for (Index i = 0; i < n; ++i) Z(i, j) = normal(rng);
  return factor.correlate_rows(Z) / std::sqrt(static_cast<double>(n));
}

Eigen::MatrixXd draw_design_uniform(Index n, const LowerTriangularFactord& factor, Rng& rng) {
  const double h = std::sqrt(3.0);
  std::uniform_real_distribution<double> uniform(-h, h);
  Eigen::MatrixXd M(n, factor.p());
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < n; ++i) M(i, j) = uniform(rng);
  return factor.correlate_rows(M) / std::sqrt(static_cast<double>(n));
}

void normalize_columns(Eigen::MatrixXd& X) {
  for (Index j = 0; j < X.cols(); ++j) {
    const double norm = X.col(j).norm();
    if (norm > 0.0) X.col(j) /= norm;
  }
}

Eigen::VectorXd draw_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, const NoiseSource& noise) {
  if (beta.size() != X.cols()) throw InvalidArgument("response: beta length differs from column count");
  Eigen::VectorXd Y(X.rows());
  for (Index i = 0; i < Y.size(); ++i) Y(i) = noise();
  for (Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) Y.noalias() += beta(j) * X.col(j);
  return Y;
}

Eigen::VectorXd standard_normal_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Eigen::VectorXd draw_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return draw_response(X, beta, [&] { return normal(rng); });
}

RegressionDataset generate_dataset(Index n, const CovarianceSpec& covariance, const SignalSpec& signal,
                                   DesignKind design, SeedRecord seed) {
  const auto omega = build_covariance(covariance);
  const auto factor = factorize(omega);
  Rng signal_rng = make_rng(seed.master_seed, seed.replicate, Stream::signal);
  Rng design_rng = make_rng(seed.master_seed, seed.replicate, Stream::design);
  Rng noise_rng = make_rng(seed.master_seed, seed.replicate, Stream::noise);

  RegressionDataset d;
  SignalDraw s = draw_beta(covariance.p, signal, signal_rng);
  d.X = design == DesignKind::gaussian ? draw_design_gaussian(n, factor, design_rng)
                                       : draw_design_uniform(n, factor, design_rng);
  d.Y = draw_response(d.X, s.beta, noise_rng);
  d.beta = std::move(s.beta);
  d.theta = std::move(s.theta);
  d.seed = seed;
  return d;
}

}  // namespace upt
