#include "upt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "upt/error.hpp"

namespace upt {

double two_sided_t_pvalue(double t, double dof) {
  const double a = std::abs(t);
  if (std::isinf(a)) return 0.0;
  if (std::isnan(a)) return 1.0;
  const boost::math::students_t dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, a)));
}

PValueVector marginal_pvalues(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y) {
  const Index n = X.rows();
  if (Y.size() != n) throw InvalidArgument("marginal_pvalues: X rows differ from Y length");
  if (n < 3) throw InvalidArgument("marginal_pvalues needs n >= 3");
  PValueVector out;
  out.dof = n - 2;
  out.pvals.resize(X.cols());
  out.tstats.resize(X.cols());

  const Eigen::VectorXd yc = Y.array() - Y.mean();
  const double syy = yc.squaredNorm();
  const Eigen::RowVectorXd means = X.colwise().mean();
  const Eigen::VectorXd sxy = X.transpose() * yc;  // centering of X cancels against centered y
  const double eps = std::numeric_limits<double>::epsilon();
  for (Index j = 0; j < X.cols(); ++j) {
    const double sxx = (X.col(j).array() - means(j)).square().sum();
    if (!(sxx > 0.0)) {
      out.degenerate.push_back(j);
      out.tstats(j) = 0.0;
      out.pvals(j) = 1.0;
      continue;
    }
    const double slope = sxy(j) / sxx;
    const double rss = syy - slope * sxy(j);
    if (rss <= 64.0 * eps * syy) {
      // Residual at rounding level: a perfect fit (or a constant response).
      out.tstats(j) = slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), slope);
      out.pvals(j) = slope == 0.0 ? 1.0 : 0.0;
      continue;
    }
    const double se = std::sqrt(rss / static_cast<double>(out.dof) / sxx);
    out.tstats(j) = slope / se;
    out.pvals(j) = two_sided_t_pvalue(out.tstats(j), static_cast<double>(out.dof));
  }
  return out;
}

namespace {

Indicator step_up(const Eigen::VectorXd& pvals, double level) {
  const Index m = pvals.size();
  Indicator out = Indicator::Zero(m);
  if (m == 0) return out;
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return pvals(a) < pvals(b); });
  Index k_star = 0;
  for (Index k = 1; k <= m; ++k)
    if (pvals(order[k - 1]) <= static_cast<double>(k) * level / static_cast<double>(m)) k_star = k;
  for (Index k = 0; k < k_star; ++k) out(order[k]) = 1;
  return out;
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

}  // namespace

Indicator bh(const Eigen::VectorXd& pvals, double alpha) {
  require_level(alpha);
  return step_up(pvals, alpha);
}

double harmonic_number(Index m) {
  double h = 0.0;
  for (Index i = m; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

Indicator by(const Eigen::VectorXd& pvals, double alpha) {
  require_level(alpha);
  return step_up(pvals, alpha / harmonic_number(pvals.size()));
}

}  // namespace upt
