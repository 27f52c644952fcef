#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "upt/gram_graph.hpp"

using namespace upt;

namespace {

// Components of the dense thresholded Gram by breadth-first search.
std::set<std::vector<Index>> bfs_components(const Eigen::MatrixXd& X, const std::vector<Index>& surv, double thr) {
  const Eigen::MatrixXd G = X.transpose() * X;
  std::set<std::vector<Index>> out;
  std::vector<bool> seen(surv.size(), false);
  for (std::size_t s = 0; s < surv.size(); ++s) {
    if (seen[s]) continue;
    std::vector<Index> comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const auto a = q.front();
      q.pop();
      comp.push_back(surv[a]);
      for (std::size_t b = 0; b < surv.size(); ++b)
        if (!seen[b] && std::abs(G(surv[a], surv[b])) > thr) {
          seen[b] = true;
          q.push(b);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.insert(comp);
  }
  return out;
}

}  // namespace

TEST_SUITE("gram_graph") {
  TEST_CASE("identity design passes Y through") {
    Eigen::VectorXd Y(3);
    Y << 1, 2, 3;
    CHECK(marginal_stats(Eigen::MatrixXd::Identity(3, 3), Y).y_tilde == Y);
  }

  TEST_CASE("column of ones") {
    CHECK(marginal_stats(Eigen::MatrixXd::Ones(4, 1), Eigen::VectorXd::Ones(4)).y_tilde(0) == 4.0);
  }

  TEST_CASE("random 50x20 against a naive double loop") {
    const Eigen::MatrixXd X = Eigen::MatrixXd::Random(50, 20);
    const Eigen::VectorXd Y = Eigen::VectorXd::Random(50);
    const auto yt = marginal_stats(X, Y).y_tilde;
    for (Index j = 0; j < 20; ++j) {
      double s = 0.0;
      for (Index i = 0; i < 50; ++i) s += X(i, j) * Y(i);
      CHECK(std::abs(yt(j) - s) < 1e-12);
    }
    CHECK_THROWS_AS(marginal_stats(X, Eigen::VectorXd::Zero(3)), InvalidArgument);
  }

  TEST_CASE("screening is strict and ordered") {
    Eigen::VectorXd yt(3);
    yt << 3.0, 1.0, -4.0;
    CHECK(screen(yt, 2.5) == std::vector<Index>{0, 2});
    CHECK(screen(yt, 3.0) == std::vector<Index>{2});
    CHECK(screen(yt, std::numeric_limits<double>::infinity()).empty());
  }

  TEST_CASE("threshold") {
    CHECK(gram_threshold<double>(5000) == doctest::Approx(1.0 / std::pow(std::log(5000.0), 2)));
    CHECK(std::isinf(gram_threshold<double>(1)));
  }

  TEST_CASE("no survivors") {
    const auto g = restricted_gram(Eigen::MatrixXd::Random(10, 5), {});
    CHECK(g.components.empty());
    CHECK(g.max_component_size == 0);
  }

  TEST_CASE("orthogonal columns are singletons") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(100, 100);
    X.diagonal().setOnes();
    const auto g = restricted_gram(X, {3, 70});
    REQUIRE(g.components.size() == 2);
    CHECK(g.components[0] == std::vector<Index>{3});
    CHECK(g.components[1] == std::vector<Index>{70});
    CHECK(g.max_component_size == 1);
    CHECK(g.component_gram[0](0, 0) == 1.0);
  }

  TEST_CASE("components match a dense BFS") {
    for (int trial = 0; trial < 20; ++trial) {
      std::srand(100 + trial);
      const Eigen::MatrixXd X = Eigen::MatrixXd::Random(30, 10) / std::sqrt(30.0);
      std::vector<Index> all(10);
      for (Index j = 0; j < 10; ++j) all[j] = j;
      const double thr = 0.15;
      const auto g = restricted_gram(X, all, thr);
      std::set<std::vector<Index>> got(g.components.begin(), g.components.end());
      CHECK(got == bfs_components(X, all, thr));
      std::vector<Index> some{1, 4, 5, 8};
      const auto h = restricted_gram(X, some, thr);
      std::set<std::vector<Index>> got2(h.components.begin(), h.components.end());
      CHECK(got2 == bfs_components(X, some, thr));
      // blocks hold the raw Gram entries
      const Eigen::MatrixXd G = X.transpose() * X;
      for (std::size_t c = 0; c < g.components.size(); ++c)
        for (std::size_t a = 0; a < g.components[c].size(); ++a)
          for (std::size_t b = 0; b < g.components[c].size(); ++b)
            CHECK(std::abs(g.component_gram[c](a, b) - G(g.components[c][a], g.components[c][b])) < 1e-12);
    }
  }
}
