#include <doctest.h>

#include <cmath>
#include <vector>

#include "upt/covariance.hpp"

using namespace upt;

namespace {

Eigen::MatrixXd dense(const CovarianceSpec& s) { return build_covariance(s).dense(); }

}  // namespace

TEST_SUITE("covariance") {
  TEST_CASE("identity p=3") { CHECK(dense(CovarianceSpec::identity(3)).isIdentity(0.0)); }

  TEST_CASE("block diagonal p=4 is two 2x2 blocks") {
    Eigen::MatrixXd expect(4, 4);
    expect << 1, .5, 0, 0, .5, 1, 0, 0, 0, 0, 1, .5, 0, 0, .5, 1;
    CHECK(dense(CovarianceSpec::block_diagonal(4, 0.5)) == expect);
  }

  TEST_CASE("penta diagonal first row") {
    const auto m = dense(CovarianceSpec::penta_diagonal(5, 0.5, 0.1));
    CHECK(m(0, 1) == 0.5);
    CHECK(m(0, 2) == 0.1);
    CHECK(m(0, 3) == 0.0);
    CHECK(m.isApprox(m.transpose(), 0.0));
    CHECK((m.diagonal().array() == 1.0).all());
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(build_covariance(CovarianceSpec::block_diagonal(5, 0.5)), InvalidArgument);
    CHECK_THROWS_AS(build_covariance(CovarianceSpec::block_diagonal(4, 1.0)), InvalidArgument);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(build_covariance(CovarianceSpec::from_matrix(bad)), NotPositiveDefinite);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, .2, .3, 1;
    CHECK_THROWS_AS(build_covariance(CovarianceSpec::from_matrix(asym)), InvalidArgument);
    CHECK_THROWS_AS(build_covariance(CovarianceSpec::penta_diagonal(10, 0.9, 0.9)), NotPositiveDefinite);
  }

  TEST_CASE("factor of identity is identity") {
    CHECK(factorize(build_covariance(CovarianceSpec::identity(6))).dense().isIdentity(0.0));
  }

  TEST_CASE("2x2 closed-form Cholesky") {
    const auto L = factorize(build_covariance(CovarianceSpec::block_diagonal(2, 0.5))).dense();
    CHECK(L(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(L(0, 1) == 0.0);
    CHECK(L(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(L(1, 1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  }

  TEST_CASE("reconstruction residual") {
    for (const auto& spec : {CovarianceSpec::penta_diagonal(100), CovarianceSpec::block_diagonal(100, -0.7),
                             CovarianceSpec::identity(100)}) {
      const auto omega = build_covariance(spec);
      const auto L = factorize(omega).dense();
      CHECK((L * L.transpose() - omega.dense()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(L.isLowerTriangular(0.0));
    }
    Eigen::MatrixXd c = dense(CovarianceSpec::penta_diagonal(30));
    const auto omega = build_covariance(CovarianceSpec::from_matrix(c));
    const auto L = factorize(omega).dense();
    CHECK((L * L.transpose() - c).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("correlate_rows applies L^T") {
    const auto f = factorize(build_covariance(CovarianceSpec::penta_diagonal(9)));
    Eigen::MatrixXd Z = Eigen::MatrixXd::Random(4, 9);
    CHECK((f.correlate_rows(Z) - Z * f.dense().transpose()).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("matrix class: identity") {
    const auto r = check_matrix_class(build_covariance(CovarianceSpec::identity(10)), 0.5, 2.0, 0.4);
    CHECK(r.max_row_power == 1.0);
    CHECK(r.d_omega == 0.0);
    CHECK(r.delta0 == 0.0);
    CHECK(r.in_class);
  }

  TEST_CASE("matrix class: block diagonal") {
    const auto r = check_matrix_class(build_covariance(CovarianceSpec::block_diagonal(10, 0.5)), 0.5, 3.0, 0.4);
    CHECK(r.max_row_power == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.d_omega == doctest::Approx(0.5));
    CHECK(r.delta0 == doctest::Approx(0.5));
    CHECK_FALSE(r.in_class);
  }

  TEST_CASE("matrix class: penta diagonal interior row") {
    const auto r = check_matrix_class(build_covariance(CovarianceSpec::penta_diagonal(20, 0.5, 0.1)));
    CHECK(r.d_omega == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r.delta0 <= r.d_omega);
  }

  TEST_CASE("matrix class monotone in A and omega0") {
    const auto omega = build_covariance(CovarianceSpec::penta_diagonal(20, 0.3, 0.1));
    const std::vector<double> As{1.0, 1.5, 2.0, 2.5, 3.0, 4.0}, ws{0.1, 0.3, 0.4, 0.45, 0.49};
    for (std::size_t i = 0; i < As.size(); ++i)
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (!check_matrix_class(omega, 0.5, As[i], ws[k]).in_class) continue;
        if (i + 1 < As.size()) CHECK(check_matrix_class(omega, 0.5, As[i + 1], ws[k]).in_class);
        if (k + 1 < ws.size()) CHECK(check_matrix_class(omega, 0.5, As[i], ws[k + 1]).in_class);
      }
  }

  TEST_CASE("eta closed form") {
    CHECK(compute_eta(0.5, 1.0, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    // Independent evaluation of each branch at theta=0.25, r=1, omega0=0.25.
    const double pre = 0.25 / (1.25 * std::sqrt(1.5));
    const double a = 0.5, b = 0.75, c = std::sqrt(1.5) - 1.0 + 0.25;
    CHECK(compute_eta(0.25, 1.0, 0.25) == doctest::Approx(pre * std::min({a, b, c})).epsilon(1e-14));
    CHECK(compute_eta(0.999999, 1.0, 0.1) < 1e-6);
    CHECK(compute_eta(0.3, 1.0, 0.2) > 0.0);
    CHECK_THROWS_AS(compute_eta(1.0, 0.5, 0.1), InvalidArgument);
    CHECK_THROWS_AS(compute_eta(0.2, 0.5, 0.5), InvalidArgument);
  }
}
