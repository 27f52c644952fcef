#pragma once

// Thresholds (t1, t2, t3) for the screening/cleaning procedure: ideal values
// from known (theta, r) and plug-in values from tail estimates of X'Y.

#include <cmath>
#include <optional>
#include <string>

#include "upt/common.hpp"

namespace upt {

enum class TuningSource { ideal, estimated };
enum class Sidedness { one_sided, two_sided };

struct TuningParams {
  Index p = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double zeta = 0.0;
  double q = 0.0;
  double K = 5.0;
  double alpha = 0.05;
  double M = 0.0;
  TuningSource source = TuningSource::ideal;
  double theta_used = 0.0;
  double r_used = 0.0;
  double t2_radicand = 0.0;
  bool t2_clamped = false;
  // r <= theta lies outside the regime the thresholds were derived for.
  bool outside_regime = false;
};

struct TuningOptions {
  std::optional<double> q;  // screening exponent; defaults to theta
  bool clamp_negative_radicand = false;
  // When both are given, q is checked against (max{delta0^2 (1+eta)^2 r, theta - zeta}, theta].
  std::optional<double> delta0;
  std::optional<double> omega0;
  double t1_factor = 1.0;
};

double zeta_exponent(double theta, double r);
double m_constant(double theta, double r, double alpha, double K);
double t2_star_radicand(Index p, double theta, double r, double alpha, double K);

TuningParams ideal_params(Index p, double theta, double r, double alpha, double K,
                          const TuningOptions& options = {});

struct TailEstimates {
  double theta_hat = 0.0;
  double r_hat = 0.0;
  double f_bar = 0.0;
  double mu_bar = 0.0;
  Index exceedances = 0;
  double t1 = 0.0;
};

TailEstimates estimate_theta_r(const Eigen::VectorXd& y_tilde, double t1, Index p,
                               Sidedness sidedness = Sidedness::two_sided);

struct DataDrivenOptions {
  double pilot_q = 0.25;
  std::optional<double> q;  // fixed q skips the pilot pass
  Sidedness sidedness = Sidedness::two_sided;
  bool clamp_negative_radicand = false;
  double t1_factor = 1.0;
};

// Pilot screen at q0, q = theta_hat, re-screen and re-estimate, then the
// ideal formulas at (theta_hat, r_hat).
TuningParams data_driven_params(const Eigen::VectorXd& y_tilde, Index p, double alpha, double K,
                                const DataDrivenOptions& options = {},
                                TailEstimates* estimates = nullptr);

// t1 = factor * sqrt(2 q log p).
inline double screening_threshold(double q, Index p, double factor = 1.0) {
  return factor * std::sqrt(2.0 * q * std::log(static_cast<double>(p)));
}

// Observed maximum component size, floored at 5.
double component_constant(Index max_component_size);

// key=value audit block of every field.
std::string audit_block(const TuningParams& params);

}  // namespace upt
