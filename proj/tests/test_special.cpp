#include <cmath>
#include <vector>

#include "doctest.h"
#include "neutral/rng.hpp"
#include "neutral/special.hpp"

using namespace neutral;

TEST_CASE("log_gamma accuracy against the library implementation") {
  for (double x = 0.5; x <= 200.0; x += 0.37) {
    const double ref = std::lgamma(x);
    const double got = log_gamma(x);
    const double scale = std::max(1.0, std::fabs(ref));
    CHECK(std::fabs(got - ref) / scale < 1e-12);
  }
  // small integer sanity points
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), InvalidParams);
}

TEST_CASE("digamma known values and recurrence") {
  constexpr double kEulerGamma = 0.57721566490153286;
  CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-12));
  CHECK(digamma(0.5) ==
        doctest::Approx(-kEulerGamma - 2.0 * std::log(2.0)).epsilon(1e-12));
  for (double x = 0.5; x < 150.0; x += 1.3) {
    CHECK(digamma(x + 1.0) - digamma(x) ==
          doctest::Approx(1.0 / x).epsilon(1e-11));
  }
  CHECK_THROWS_AS(digamma(-1.0), InvalidParams);
}

TEST_CASE("regularized incomplete beta") {
  for (double x = 0.05; x < 1.0; x += 0.1) {
    CHECK(beta_inc(1, 1, x) == doctest::Approx(x).epsilon(1e-13));
    CHECK(beta_inc(2, 2, x) ==
          doctest::Approx(3 * x * x - 2 * x * x * x).epsilon(1e-12));
    // reflection
    CHECK(beta_inc(3.5, 1.25, x) ==
          doctest::Approx(1.0 - beta_inc(1.25, 3.5, 1.0 - x)).epsilon(1e-11));
  }
  CHECK(beta_inc(2, 5, 0.0) == 0.0);
  CHECK(beta_inc(2, 5, 1.0) == 1.0);
}

TEST_CASE("ks test calibration on uniform samples") {
  Rng rng(99);
  std::vector<double> samples(2000);
  for (double& s : samples) s = rng.next_double();
  const double p = ks_test_pvalue(samples, [](double x) { return x; });
  CHECK(p > 0.001);
  // shifted cdf must be rejected hard
  const double p_bad =
      ks_test_pvalue(samples, [](double x) { return x * x; });
  CHECK(p_bad < 1e-6);
}
