#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mrl/special.hpp"

using namespace mrl;

TEST_CASE("gamma log pdf closed forms") {
  CHECK(gamma_log_pdf(1.0, 1.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  // shape 3, rate 1.5 at t=2: 1.5^3 * 2^2 * e^{-3} / Gamma(3)
  const double expected =
      std::log(std::pow(1.5, 3) * 4.0 * std::exp(-3.0) / 2.0);
  CHECK(gamma_log_pdf(2.0, 3.0, 1.5) == doctest::Approx(expected).epsilon(1e-14));
  // integrable singularity at shape < 1
  CHECK(std::isfinite(gamma_log_pdf(0.5, 0.5, 2.0)));
  CHECK_THROWS_AS(gamma_log_pdf(-1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_log_pdf(1.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("gamma survival closed forms") {
  CHECK(gamma_survival(0.0, 3.7, 0.2) == 1.0);
  CHECK(gamma_survival(std::log(2.0), 1.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // integer shape: S(t) = (1 + rt) e^{-rt} for shape 2
  CHECK(gamma_survival(3.0, 2.0, 1.0) ==
        doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_survival(-0.1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("survival plus cdf is one across the parameter box") {
  for (double shape : {1e-2, 0.1, 0.7, 1.0, 3.0, 17.0, 100.0})
    for (double t : {1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
      const double s = gamma_survival(t, shape, 1.0);
      const double c = gamma_cdf(t, shape, 1.0);
      CHECK(std::abs(s + c - 1.0) < 1e-12);
    }
}

TEST_CASE("log gamma survival agrees with the direct value") {
  CHECK(log_gamma_survival(3.0, 2.0, 1.0) ==
        doctest::Approx(std::log(gamma_survival(3.0, 2.0, 1.0))).epsilon(1e-12));
  // deep tail where the direct value underflows
  const double lt = log_gamma_survival(2000.0, 2.0, 1.0);
  CHECK(std::isfinite(lt));
  CHECK(lt < -1900.0);
}

TEST_CASE("regularized incomplete gamma basics") {
  CHECK(gamma_p(1.0, 0.0) == 0.0);
  CHECK(gamma_q(1.0, 0.0) == 1.0);
  // P(1, x) = 1 - e^{-x}
  CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
  // monotone in x
  CHECK(gamma_p(3.0, 1.0) < gamma_p(3.0, 2.0));
}

TEST_CASE("incomplete beta and its inverse") {
  // I_x(1,1) = x
  CHECK(inc_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-13));
  // I_x(2,1) = x^2
  CHECK(inc_beta(2.0, 1.0, 0.6) == doctest::Approx(0.36).epsilon(1e-13));
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(inc_beta(2.5, 4.0, 0.3) ==
        doctest::Approx(1.0 - inc_beta(4.0, 2.5, 0.7)).epsilon(1e-12));
  for (double p : {0.01, 0.2, 0.5, 0.8, 0.99}) {
    const double x = inc_beta_inv(3.0, 2.0, p);
    CHECK(inc_beta(3.0, 2.0, x) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("normal cdf and quantile round trip") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-6})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("normal log pdf uses the variance parameterization") {
  CHECK(normal_log_pdf(0.0, 0.0, 1.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-14));
  CHECK(normal_log_pdf(2.0, 0.0, 4.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI * 4.0) - 0.5).epsilon(1e-14));
}
