#include <doctest.h>

#include <cmath>

#include "upt/error.hpp"
#include "upt/datagen.hpp"
#include "upt/oracle.hpp"

using namespace upt;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double fdr_1d(double y, double pi1, double tau) {
  const double num = (1 - pi1) * phi(y);
  return num / (num + pi1 * 0.5 * (phi(y - tau) + phi(y + tau)));
}

RiskEstimate direct_loss(const Eigen::MatrixXd& X, const DiscretePrior& prior, double lambda, Index reps, Rng& rng) {
  double s = 0, ss = 0;
  for (Index r = 0; r < reps; ++r) {
    const Eigen::VectorXd beta = draw_from_prior(X.cols(), prior, rng);
    const Eigen::VectorXd Y = draw_response(X, beta, rng);
    const double l = weighted_loss(indicator_of(beta), oracle_decide(exact_local_fdr(X, Y, prior), lambda), lambda);
    s += l;
    ss += l * l;
  }
  const double n = static_cast<double>(reps);
  const double m = s / n;
  return {m, std::sqrt((ss - n * m * m) / (n - 1) / n)};
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("no signal mass gives fdr 1") {
    const auto f = exact_local_fdr(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Constant(3, 5.0),
                                   DiscretePrior::symmetric(0.0, 2.0));
    CHECK(f.fdr.isOnes(0.0));
  }

  TEST_CASE("one-dimensional closed form") {
    const auto prior = DiscretePrior::symmetric(0.2, 2.5);
    for (double y : {-4.0, -1.0, 0.0, 0.7, 3.3}) {
      const auto f = exact_local_fdr(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, y), prior);
      CHECK(std::abs(f.fdr(0) - fdr_1d(y, 0.2, 2.5)) < 1e-12);
    }
    const auto f0 = exact_local_fdr(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), prior);
    CHECK(std::abs(f0.fdr(0) - 0.8 / (0.8 + 0.2 * std::exp(-2.5 * 2.5 / 2))) < 1e-12);
  }

  TEST_CASE("orthogonal design factorizes") {
    const auto prior = DiscretePrior::symmetric(0.3, 2.0);
    Eigen::VectorXd y(3);
    y << 0.5, -2.2, 3.1;
    const auto f = exact_local_fdr(Eigen::MatrixXd::Identity(3, 3), y, prior);
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(f.fdr(i) - fdr_1d(y(i), 0.3, 2.0)) < 1e-12);
    CHECK(std::abs(f.total_weight - 1.0) < 1e-10);
  }

  TEST_CASE("entries in [0, 1] under correlation") {
    Rng rng(4);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 6);
    const auto prior = DiscretePrior::symmetric(0.2, 3.0);
    for (int k = 0; k < 20; ++k) {
      const auto f = exact_local_fdr(X, draw_response(X, draw_from_prior(6, prior, rng), rng), prior);
      CHECK((f.fdr.array() >= 0.0).all());
      CHECK((f.fdr.array() <= 1.0).all());
      CHECK(std::abs(f.total_weight - 1.0) < 1e-10);
    }
  }

  TEST_CASE("dimension cap and prior validation") {
    CHECK_THROWS_AS(exact_local_fdr(Eigen::MatrixXd::Identity(13, 13), Eigen::VectorXd::Zero(13),
                                    DiscretePrior::symmetric(0.1, 1.0)),
                    InvalidArgument);
    CHECK_THROWS_AS(DiscretePrior({0.1, {{0.0, 1.0}}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(DiscretePrior({0.1, {{1.0, 0.4}}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(DiscretePrior({1.0, {{1.0, 1.0}}}).validate(), InvalidArgument);
  }

  TEST_CASE("decision thresholds") {
    LocalFdrVector f;
    f.fdr = (Eigen::VectorXd(5) << 0.0, 0.3, 0.5, 0.51, 0.95).finished();
    CHECK(oracle_decide(f, 1.0) == Indicator((Indicator(5) << 1, 1, 1, 0, 0).finished()));
    CHECK(oracle_decide(f, 1e12) == Indicator((Indicator(5) << 1, 0, 0, 0, 0).finished()));
    const double lam = std::pow(1000.0, -0.3);
    CHECK(oracle_decide(f, lam).sum() > oracle_decide(f, 1.0).sum());
    CHECK_THROWS_AS(oracle_decide(f, 0.0), InvalidArgument);
  }

  TEST_CASE("weighted loss") {
    const Indicator a = (Indicator(2) << 1, 0).finished(), b = (Indicator(2) << 0, 1).finished();
    CHECK(weighted_loss(a, a, 3.0) == 0.0);
    CHECK(weighted_loss(a, b, 2.0) == 3.0);
    Rng rng(8);
    std::bernoulli_distribution coin(0.4);
    for (int k = 0; k < 50; ++k) {
      Indicator t(30), d(30);
      for (Index i = 0; i < 30; ++i) {
        t(i) = coin(rng);
        d(i) = coin(rng);
      }
      double s = 0;
      for (Index i = 0; i < 30; ++i) s += (t(i) == 0 && d(i) == 1) ? 0.7 : ((t(i) == 1 && d(i) == 0) ? 1.0 : 0.0);
      CHECK(weighted_loss(t, d, 0.7) == doctest::Approx(s).epsilon(1e-14));
    }
    CHECK_THROWS_AS(weighted_loss(a, Indicator::Zero(3), 1.0), InvalidArgument);
  }

  TEST_CASE("risk formula is zero without signals") {
    Rng rng(1);
    const auto r = oracle_risk_formula(Eigen::MatrixXd::Identity(2, 2), DiscretePrior::symmetric(0.0, 2.0), 1.0, 100, rng);
    CHECK(r.estimate == 0.0);
  }

  TEST_CASE("risk formula matches direct loss simulation") {
    const auto prior = DiscretePrior::symmetric(0.2, 2.5);
    for (Index p : {1, 2}) {
      Rng a(100 + p), b(200 + p);
      const auto X = Eigen::MatrixXd::Identity(p, p);
      const auto f = oracle_risk_formula(X, prior, 1.0, 40000, a);
      const auto d = direct_loss(X, prior, 1.0, 40000, b);
      CHECK(std::abs(f.estimate - d.estimate) <= 3 * (f.standard_error + d.standard_error));
    }
  }
}
