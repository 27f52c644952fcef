#include "upt/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "upt/covariance.hpp"
#include "upt/error.hpp"

namespace upt {

double zeta_exponent(double theta, double r) {
  const double d = std::sqrt(r) - std::sqrt(theta);
  return d * d;
}

double m_constant(double theta, double r, double alpha, double K) {
  const double zeta = zeta_exponent(theta, r);
  return alpha * std::sqrt(std::numbers::pi) * (r + theta - zeta) /
         (std::pow(2.0 * std::numbers::e, K) * std::sqrt(r) * (1.0 - alpha));
}

double t2_star_radicand(Index p, double theta, double r, double alpha, double K) {
  const double log_p = std::log(static_cast<double>(p));
  const double zeta = zeta_exponent(theta, r);
  const double M = m_constant(theta, r, alpha, K);
  return 2.0 * (theta - zeta) * log_p +
         4.0 * r / (r + theta - zeta) * ((K - 0.5) * std::log(log_p) - std::log(M));
}

TuningParams ideal_params(Index p, double theta, double r, double alpha, double K,
                          const TuningOptions& options) {
  if (p < 2) throw InvalidArgument("tuning needs p >= 2");
  if (!(theta > 0.0) || !(r > 0.0)) throw InvalidArgument("tuning needs theta > 0 and r > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(K >= 1.0)) throw InvalidArgument("K must be at least 1");

  TuningParams t;
  t.p = p;
  t.theta_used = theta;
  t.r_used = r;
  t.alpha = alpha;
  t.K = K;
  t.outside_regime = !(theta < r);
  t.zeta = zeta_exponent(theta, r);
  t.q = options.q.value_or(theta);
  if (!(t.q > 0.0)) throw InvalidArgument("screening exponent q must be positive");
  if (options.delta0 && options.omega0 && !t.outside_regime) {
    const double eta = compute_eta(theta, r, *options.omega0);
    const double lower = std::max(*options.delta0 * *options.delta0 * (1.0 + eta) * (1.0 + eta) * r,
                                  theta - t.zeta);
    if (!(t.q > lower && t.q <= theta))
      throw InvalidArgument("q = " + std::to_string(t.q) + " outside (" + std::to_string(lower) + ", " +
                            std::to_string(theta) + "]");
  }
  const double log_p = std::log(static_cast<double>(p));
  t.t1 = screening_threshold(t.q, p, options.t1_factor);
  t.t3 = std::sqrt(2.0 * r * log_p);
  t.M = m_constant(theta, r, alpha, K);
  t.t2_radicand = t2_star_radicand(p, theta, r, alpha, K);
  if (t.t2_radicand < 0.0) {
    if (!options.clamp_negative_radicand) throw NegativeRadicand(t.t2_radicand);
    t.t2 = 0.0;
    t.t2_clamped = true;
  } else {
    t.t2 = std::sqrt(t.t2_radicand);
  }
  return t;
}

TailEstimates estimate_theta_r(const Eigen::VectorXd& y_tilde, double t1, Index p, Sidedness sidedness) {
  if (p < 2) throw InvalidArgument("tail estimates need p >= 2");
  TailEstimates e;
  e.t1 = t1;
  double sum = 0.0;
  for (Index j = 0; j < y_tilde.size(); ++j) {
    const double v = sidedness == Sidedness::two_sided ? std::abs(y_tilde(j)) : y_tilde(j);
    if (v > t1) {
      ++e.exceedances;
      sum += v;
    }
  }
  if (e.exceedances == 0)
    throw NoExceedances("no marginal statistic exceeds t1 = " + std::to_string(t1) +
                        "; use a smaller t1");
  const double log_p = std::log(static_cast<double>(p));
  e.f_bar = static_cast<double>(e.exceedances) / static_cast<double>(p);
  e.mu_bar = sum / static_cast<double>(p);
  e.theta_hat = -std::log(e.f_bar) / log_p;
  const double ratio = e.mu_bar / e.f_bar;
  e.r_hat = ratio * ratio / (2.0 * log_p);
  return e;
}

TuningParams data_driven_params(const Eigen::VectorXd& y_tilde, Index p, double alpha, double K,
                                const DataDrivenOptions& options, TailEstimates* estimates) {
  if (y_tilde.size() == 0) throw InvalidArgument("data-driven tuning needs a nonempty X'Y");
  double q = 0.0;
  if (options.q) {
    q = *options.q;
  } else {
    const TailEstimates pilot =
        estimate_theta_r(y_tilde, screening_threshold(options.pilot_q, p), p, options.sidedness);
    q = pilot.theta_hat;
  }
  const TailEstimates est =
      estimate_theta_r(y_tilde, screening_threshold(q, p, options.t1_factor), p, options.sidedness);
  if (estimates) *estimates = est;

  TuningOptions to;
  to.q = q;
  to.clamp_negative_radicand = options.clamp_negative_radicand;
  to.t1_factor = options.t1_factor;
  TuningParams t = ideal_params(p, est.theta_hat, est.r_hat, alpha, K, to);
  t.source = TuningSource::estimated;
  return t;
}

double component_constant(Index max_component_size) {
  return std::max(5.0, static_cast<double>(max_component_size));
}

std::string audit_block(const TuningParams& t) {
  std::ostringstream os;
  os.precision(17);
  os << "source=" << (t.source == TuningSource::ideal ? "ideal" : "estimated") << '\n'
     << "p=" << t.p << '\n'
     << "theta_used=" << t.theta_used << '\n'
     << "r_used=" << t.r_used << '\n'
     << "q=" << t.q << '\n'
     << "zeta=" << t.zeta << '\n'
     << "K=" << t.K << '\n'
     << "alpha=" << t.alpha << '\n'
     << "M=" << t.M << '\n'
     << "t1=" << t.t1 << '\n'
     << "t2=" << t.t2 << '\n'
     << "t2_radicand=" << t.t2_radicand << '\n'
     << "t2_clamped=" << (t.t2_clamped ? 1 : 0) << '\n'
     << "t3=" << t.t3 << '\n'
     << "outside_regime=" << (t.outside_regime ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace upt
