#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "upt/datagen.hpp"
#include "upt/tuning.hpp"

using namespace upt;

namespace {

// Threshold formula written out from scratch with 2 sqrt(r theta) for r + theta - zeta.
double t2_reference(double p, double theta, double r, double alpha, double K) {
  const double lp = std::log(p);
  const double zeta = r + theta - 2.0 * std::sqrt(r * theta);
  const double s = 2.0 * std::sqrt(r * theta);
  const double M = alpha * std::sqrt(std::numbers::pi) * s / (std::pow(2.0 * std::exp(1.0), K) * std::sqrt(r) * (1 - alpha));
  return std::sqrt(2.0 * (theta - zeta) * lp + 4.0 * r / s * ((K - 0.5) * std::log(lp) - std::log(M)));
}

}  // namespace

TEST_SUITE("tuning") {
  TEST_CASE("t2 against an independent evaluation") {
    const double r = 36.0 / (2.0 * std::log(5000.0));
    CHECK(r == doctest::Approx(2.1131).epsilon(1e-4));
    const auto t = ideal_params(5000, 0.5, r, 0.05, 5.0);
    CHECK(std::abs(t.t2 / t2_reference(5000, 0.5, r, 0.05, 5.0) - 1.0) < 1e-10);
    CHECK(t.t3 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(t.t1 == doctest::Approx(std::sqrt(std::log(5000.0))).epsilon(1e-14));
    CHECK(t.zeta == doctest::Approx(std::pow(std::sqrt(r) - std::sqrt(0.5), 2)).epsilon(1e-14));
    CHECK_FALSE(t.outside_regime);
    for (double K : {1.0, 3.0, 7.5})
      for (double a : {0.01, 0.2, 0.5}) {
        if (t2_star_radicand(5000, 0.5, 3.0, a, K) < 0.0) continue;
        CHECK(std::abs(ideal_params(5000, 0.5, 3.0, a, K).t2 / t2_reference(5000, 0.5, 3.0, a, K) - 1) < 1e-10);
      }
  }

  TEST_CASE("boundary r = theta") {
    CHECK(zeta_exponent(0.7, 0.7) == 0.0);
    // leading term 2 theta log p
    const double lp = std::log(1e6);
    const double lead = t2_star_radicand(1000000, 0.7, 0.7, 0.05, 5.0) -
                        4.0 * 0.7 / 1.4 * (4.5 * std::log(lp) - std::log(m_constant(0.7, 0.7, 0.05, 5.0)));
    CHECK(lead == doctest::Approx(2 * 0.7 * lp).epsilon(1e-12));
  }

  TEST_CASE("zeta identity") {
    for (double th : {0.1, 0.3, 0.5, 0.9})
      for (double r : {0.2, 1.0, 2.5, 7.0}) CHECK(std::abs(r + th - zeta_exponent(th, r) - 2 * std::sqrt(r * th)) < 1e-12);
  }

  TEST_CASE("scale consistency under p -> p^2") {
    const auto a = ideal_params(100, 0.5, 2.0, 0.05, 5.0);
    const auto b = ideal_params(10000, 0.5, 2.0, 0.05, 5.0);
    CHECK(b.t1 * b.t1 == doctest::Approx(2 * a.t1 * a.t1).epsilon(1e-12));
    CHECK(b.t3 * b.t3 == doctest::Approx(2 * a.t3 * a.t3).epsilon(1e-12));
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(ideal_params(1, 0.5, 2.0, 0.05, 5.0), InvalidArgument);
    CHECK_THROWS_AS(ideal_params(100, 0.5, 2.0, 1.0, 5.0), InvalidArgument);
    CHECK_THROWS_AS(ideal_params(100, 0.5, 2.0, 0.05, 0.5), InvalidArgument);
    TuningOptions clamp;
    clamp.clamp_negative_radicand = true;
    CHECK(ideal_params(5000, 0.5, 0.3, 0.05, 5.0, clamp).outside_regime);
    TuningOptions o;
    o.delta0 = 0.3;
    o.omega0 = 0.3;
    o.q = 0.01;
    CHECK_THROWS_AS(ideal_params(5000, 0.5, 2.0, 0.05, 5.0, o), InvalidArgument);
    o.q = 0.5;
    CHECK_NOTHROW(ideal_params(5000, 0.5, 2.0, 0.05, 5.0, o));
  }

  TEST_CASE("negative radicand errors or clamps") {
    // tiny p with r far above theta drives the leading term negative
    const double rad = t2_star_radicand(3, 0.1, 9.0, 0.99, 1.0);
    REQUIRE(rad < 0.0);
    try {
      ideal_params(3, 0.1, 9.0, 0.99, 1.0);
      FAIL("expected NegativeRadicand");
    } catch (const NegativeRadicand& e) {
      CHECK(e.radicand() == doctest::Approx(rad));
    }
    TuningOptions o;
    o.clamp_negative_radicand = true;
    const auto t = ideal_params(3, 0.1, 9.0, 0.99, 1.0, o);
    CHECK(t.t2 == 0.0);
    CHECK(t.t2_clamped);
  }

  TEST_CASE("theta_hat inverts the exceedance count") {
    const Index p = 10000;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(p);
    for (Index i = 0; i < 100; ++i) y(i * 7) = 5.0;  // p^0.5 exceedances, all equal to c = 5
    const auto e = estimate_theta_r(y, 2.0, p);
    CHECK(e.theta_hat == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.r_hat == doctest::Approx(25.0 / (2 * std::log(10000.0))).epsilon(1e-14));
    CHECK(e.exceedances == 100);
    CHECK(e.mu_bar >= e.t1 * e.f_bar);
  }

  TEST_CASE("one- and two-sided counting") {
    Eigen::VectorXd y(4);
    y << 3, -3, 0.1, 4;
    CHECK(estimate_theta_r(y, 2.0, 4, Sidedness::two_sided).exceedances == 3);
    CHECK(estimate_theta_r(y, 2.0, 4, Sidedness::one_sided).exceedances == 2);
  }

  TEST_CASE("permutation invariance") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0, 2);
    std::vector<double> v(500);
    for (auto& x : v) x = nd(rng);
    Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(v.data(), 500);
    std::shuffle(v.begin(), v.end(), rng);
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(v.data(), 500);
    const auto ea = estimate_theta_r(a, 2.5, 500), eb = estimate_theta_r(b, 2.5, 500);
    CHECK(ea.theta_hat == eb.theta_hat);
    CHECK(ea.r_hat == doctest::Approx(eb.r_hat).epsilon(1e-14));
  }

  TEST_CASE("no exceedances") {
    CHECK_THROWS_AS(estimate_theta_r(Eigen::VectorXd::Zero(100), 1.0, 100), NoExceedances);
    CHECK_THROWS_AS(data_driven_params(Eigen::VectorXd::Zero(100), 100, 0.05, 5.0), NoExceedances);
  }

  TEST_CASE("plug-in thresholds are the ideal formulas at the estimates") {
    // Orthogonal design: X'Y = beta + N(0, 1) exactly.
    const Index p = 200000;
    const double theta = 0.5, tau = 8.0;
    Rng rng(77);
    const auto d = draw_beta(p, SignalSpec::with_magnitude(theta, tau), rng);
    const Eigen::VectorXd y = d.beta + standard_normal_vector(p, rng);
    TailEstimates est;
    const auto hat = data_driven_params(y, p, 0.05, 5.0, {}, &est);
    TuningOptions o;
    o.q = hat.q;
    const auto at_est = ideal_params(p, est.theta_hat, est.r_hat, 0.05, 5.0, o);
    CHECK(hat.t1 == at_est.t1);
    CHECK(hat.t2 == at_est.t2);
    CHECK(hat.t3 == at_est.t3);
    const auto ideal = ideal_params(p, theta, strength_exponent(tau, p), 0.05, 5.0);
    CHECK(hat.t3 / ideal.t3 == doctest::Approx(std::sqrt(est.r_hat / strength_exponent(tau, p))).epsilon(1e-12));
    // q is the pilot estimate: t1 = sqrt(2 q log p)
    CHECK(hat.t1 == doctest::Approx(std::sqrt(2 * hat.q * std::log(double(p)))).epsilon(1e-14));
    MESSAGE("theta_hat " << est.theta_hat << " (true " << theta << "), r_hat/r " << est.r_hat / strength_exponent(tau, p)
                         << ", t2_hat/t2 " << hat.t2 / ideal.t2);
  }

  TEST_CASE("component constant floors at five") {
    CHECK(component_constant(0) == 5.0);
    CHECK(component_constant(3) == 5.0);
    CHECK(component_constant(8) == 8.0);
  }

  TEST_CASE("audit block lists every field") {
    const std::string a = audit_block(ideal_params(5000, 0.5, 2.0, 0.05, 5.0));
    for (const char* k : {"t1=", "t2=", "t3=", "zeta=", "q=", "K=", "alpha=", "M=", "source=ideal"})
      CHECK(a.find(k) != std::string::npos);
  }
}
