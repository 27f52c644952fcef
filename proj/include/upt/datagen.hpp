#pragma once

// Synthetic rare/weak regression data: sparse signed coefficients, random
// Gaussian or uniform designs with row covariance Omega / n, and unit noise.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "upt/common.hpp"
#include "upt/covariance.hpp"

namespace upt {

enum class SupportMode {
  bernoulli,        // each coordinate nonzero independently with probability p^-theta
  balanced_count,   // exactly ceil(p^(1-theta)) nonzeros, half positive, half negative
};

struct SignalSpec {
  double theta = 0.5;             // sparsity exponent
  std::optional<double> r;        // strength exponent, tau = sqrt(2 r log p)
  std::optional<double> tau_abs;  // absolute magnitude
  double perturbation = 0.0;      // half-width u of an additive Uniform[-u, u]
  bool random_sign = true;
  SupportMode support = SupportMode::bernoulli;

  static SignalSpec with_exponent(double theta, double r, double perturbation = 0.0) {
    SignalSpec s;
    s.theta = theta;
    s.r = r;
    s.perturbation = perturbation;
    return s;
  }
  static SignalSpec with_magnitude(double theta, double tau, double perturbation = 0.0) {
    SignalSpec s;
    s.theta = theta;
    s.tau_abs = tau;
    s.perturbation = perturbation;
    return s;
  }

  void validate() const;
  double signal_probability(Index p) const;
  double magnitude(Index p) const;
};

// Strength exponent r with tau = sqrt(2 r log p).
double strength_exponent(double tau, Index p);

// Signal locations, signs and perturbations; magnitude applied later so one
// pattern can be realized at every tau of an experiment grid.
struct SignalPattern {
  Index p = 0;
  std::vector<Index> support;
  std::vector<double> sign;
  std::vector<double> offset;

  Eigen::VectorXd realize(double tau) const;
};

struct SignalDraw {
  Eigen::VectorXd beta;
  Indicator theta;
};

Indicator indicator_of(const Eigen::VectorXd& beta);

SignalPattern draw_signal_pattern(Index p, const SignalSpec& spec, Rng& rng);
SignalDraw draw_beta(Index p, const SignalSpec& spec, Rng& rng);

// Rows iid N(0, Omega / n): row = L z / sqrt(n).
Eigen::MatrixXd draw_design_gaussian(Index n, const LowerTriangularFactord& factor, Rng& rng);
// X = M L^T / sqrt(n) with M iid Uniform(-sqrt 3, sqrt 3).
Eigen::MatrixXd draw_design_uniform(Index n, const LowerTriangularFactord& factor, Rng& rng);

// Rescales every column to unit Euclidean norm (exact unit-diagonal Gram).
void normalize_columns(Eigen::MatrixXd& X);

using NoiseSource = std::function<double()>;

inline NoiseSource noiseless() {
  return [] { return 0.0; };
}

// Y = X beta + eps; zero coefficients are skipped.
Eigen::VectorXd draw_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, const NoiseSource& noise);
Eigen::VectorXd draw_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, Rng& rng);
Eigen::VectorXd standard_normal_vector(Index n, Rng& rng);

struct SeedRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate = 0;
};

struct RegressionDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd Y;
  std::optional<Eigen::VectorXd> beta;
  std::optional<Indicator> theta;
  SeedRecord seed;
};

enum class DesignKind { gaussian, uniform };

// One complete dataset, fully determined by (master seed, replicate).
RegressionDataset generate_dataset(Index n, const CovarianceSpec& covariance, const SignalSpec& signal,
                                   DesignKind design, SeedRecord seed);

}  // namespace upt
