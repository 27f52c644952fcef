#include "upt/upt.hpp"

namespace upt {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::screened_out:
      return "screened_out";
    case Provenance::cleaned_zero:
      return "cleaned_zero";
    case Provenance::selected:
      return "selected";
  }
  return "unknown";
}

ScreenedProblem screen_marginals(const Eigen::MatrixXd& X, Eigen::VectorXd y_tilde, double t1,
                                     std::optional<double> gram_threshold) {
  if (y_tilde.size() != X.cols()) throw InvalidArgument("X'Y length differs from column count");
  ScreenedProblem sp;
  sp.p = X.cols();
  sp.t1 = t1;
  sp.y_tilde = std::move(y_tilde);
  sp.graph = restricted_gram(X, screen(sp.y_tilde, t1), gram_threshold);
  return sp;
}

ScreenedProblem screen_and_decompose(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, double t1,
                                     std::optional<double> gram_threshold) {
  return screen_marginals(X, marginal_stats(X, Y).y_tilde, t1, gram_threshold);
}

DecisionVector clean_components(const ScreenedProblem& problem, double t2, double t3,
                                const CleanOptions& options) {
  if (problem.graph.max_component_size > options.max_component_size)
    throw ComponentTooLarge(problem.graph.max_component_size, options.max_component_size);
  DecisionVector d;
  d.delta = Indicator::Zero(problem.p);
  d.provenance.assign(problem.p, Provenance::screened_out);
  const auto& g = problem.graph;
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    const auto& members = g.components[c];
    Eigen::VectorXd y(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) y(k) = problem.y_tilde(members[k]);
    const auto res = clean_component(y, g.component_gram[c], t2, t3, options);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const bool on = res.decisions(k) != 0;
      d.delta(members[k]) = on;
      d.provenance[members[k]] = on ? Provenance::selected : Provenance::cleaned_zero;
    }
  }
  return d;
}

DecisionVector upt_decide(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const TuningParams& params,
                          const PipelineOptions& options) {
  const ScreenedProblem sp = screen_and_decompose(X, Y, params.t1, options.gram_threshold);
  return clean_components(sp, params.t2, params.t3, options.clean);
}

}  // namespace upt
