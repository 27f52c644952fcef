#include "upt/procedure.hpp"

namespace upt {

namespace {

void finish_preparation(PreparedUpt& out, const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde,
                        const UptSettings& settings) {
  const Index p = X.cols();
  out.problem = screen_marginals(X, y_tilde, screening_threshold(out.q, p, settings.t1_factor),
                                     settings.gram_threshold);
  if (out.problem.graph.max_component_size > settings.clean.max_component_size)
    throw ComponentTooLarge(out.problem.graph.max_component_size, settings.clean.max_component_size);
  out.K = settings.K.value_or(component_constant(out.problem.graph.max_component_size));
}

}  // namespace

PreparedUpt prepare_ideal(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde, double theta, double r,
                          const UptSettings& settings) {
  PreparedUpt out;
  out.source = TuningSource::ideal;
  out.theta = theta;
  out.r = r;
  out.q = settings.q.value_or(theta);
  finish_preparation(out, X, y_tilde, settings);
  return out;
}

PreparedUpt prepare_estimated(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_tilde,
                              const UptSettings& settings) {
  const Index p = X.cols();
  PreparedUpt out;
  out.source = TuningSource::estimated;
  if (settings.q) {
    out.q = *settings.q;
  } else {
    out.q = estimate_theta_r(y_tilde, screening_threshold(settings.pilot_q, p), p, settings.sidedness).theta_hat;
  }
  const TailEstimates est =
      estimate_theta_r(y_tilde, screening_threshold(out.q, p, settings.t1_factor), p, settings.sidedness);
  out.estimates = est;
  out.theta = est.theta_hat;
  out.r = est.r_hat;
  finish_preparation(out, X, y_tilde, settings);
  return out;
}

TuningParams finalize_tuning(const PreparedUpt& prepared, double alpha, const UptSettings& settings) {
  TuningOptions to;
  to.q = prepared.q;
  to.clamp_negative_radicand = settings.clamp_negative_radicand;
  to.t1_factor = settings.t1_factor;
  TuningParams t = ideal_params(prepared.problem.p, prepared.theta, prepared.r, alpha, prepared.K, to);
  t.source = prepared.source;
  return t;
}

DecisionVector decide(const PreparedUpt& prepared, const TuningParams& tuning, const UptSettings& settings) {
  return clean_components(prepared.problem, tuning.t2, tuning.t3, settings.clean);
}

}  // namespace upt
