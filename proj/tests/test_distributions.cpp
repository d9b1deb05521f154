#include <cmath>
#include <vector>

#include "doctest.h"
#include "neutral/distributions.hpp"
#include "neutral/special.hpp"
#include "neutral/transforms.hpp"

using namespace neutral;

namespace {

// tanh-sinh quadrature on (0,1); the integrand receives x and 1-x
// separately so the endpoint singularities of beta densities keep full
// precision
template <typename F>
double integrate01(F&& f) {
  const double h = 0.002;
  double sum = 0.0;
  for (int k = -2500; k <= 2500; ++k) {
    const double t = k * h;
    const double y = M_PI_2 * std::sinh(t);
    const double x = 1.0 / (1.0 + std::exp(-2.0 * y));
    const double cx = 1.0 / (1.0 + std::exp(2.0 * y));
    const double w =
        0.5 * M_PI_2 * std::cosh(t) / std::pow(std::cosh(y), 2);
    if (x <= 0.0 || cx <= 0.0 || w == 0.0) continue;
    sum += w * f(x, cx);
  }
  return sum * h;
}

// independent oracle: -integral of f log f
double entropy_by_quadrature(const BetaParams& p) {
  const double lb = log_beta(p.a, p.b);
  return integrate01([&](double x, double cx) {
    const double logf =
        (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log(cx) - lb;
    const double f = std::exp(logf);
    return f > 0.0 ? -f * logf : 0.0;
  });
}

}  // namespace

TEST_CASE("beta entropy closed form vs quadrature") {
  CHECK(beta_entropy(BetaParams(1, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  const double grid[] = {0.5, 1, 2, 5, 10, 50};
  for (double a : grid) {
    for (double b : grid) {
      const double closed = beta_entropy(BetaParams(a, b));
      const double numeric = entropy_by_quadrature(BetaParams(a, b));
      CHECK(std::fabs(closed - numeric) < 1e-6);
    }
  }
  // reflection symmetry
  CHECK(beta_entropy(BetaParams(2, 5)) ==
        doctest::Approx(beta_entropy(BetaParams(5, 2))).epsilon(1e-14));
}

TEST_CASE("beta second moments") {
  CHECK(beta_moment2(BetaParams(1, 1)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(beta_moment2(BetaParams(2, 3)) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(beta_moment2_complement(BetaParams(2, 3)) ==
        doctest::Approx(beta_moment2(BetaParams(3, 2))).epsilon(1e-15));

  // Monte-Carlo agreement within 3 standard errors
  Rng rng(3);
  const BetaParams p(2.5, 4.0);
  const std::size_t n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = sample_beta(p, rng);
    sum += u * u;
    sumsq += u * u * u * u;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::fabs(mean - beta_moment2(p)) < 3.0 * se);
}

TEST_CASE("dirichlet sampler determinism and moments") {
  const DirichletParams params({2, 5, 6, 3, 7});
  const auto a = sample_dirichlet(params, 200, 77);
  const auto b = sample_dirichlet(params, 200, 77);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].values() == b[i].values());
  }

  const std::size_t n = 100000;
  const auto big = sample_dirichlet(params, n, 123);
  double mean0 = 0.0;
  for (const auto& x : big) mean0 += x[0];
  mean0 /= static_cast<double>(n);
  // Var(x_1) = m(1-m)/(sum+1)
  const double m = 2.0 / 23.0;
  const double se = std::sqrt(m * (1 - m) / 24.0 / static_cast<double>(n));
  CHECK(std::fabs(mean0 - m) < 3.0 * se);

  CHECK_THROWS_AS(DirichletParams({1.0, -2.0}), InvalidAlpha);
}

TEST_CASE("mixture sampler labels") {
  const MixtureParams params({0.3, 0.7},
                             {DirichletParams({2, 5, 6, 3, 7}),
                              DirichletParams({10, 2, 8, 2, 18})});
  const std::size_t n = 100000;
  const auto samples = sample_mixture(params, n, 5);
  double frac0 = 0.0;
  for (const auto& s : samples) {
    if (s.label == 0) frac0 += 1.0;
  }
  frac0 /= static_cast<double>(n);
  CHECK(frac0 > 0.29);
  CHECK(frac0 < 0.31);

  const auto again = sample_mixture(params, 100, 5);
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].label == samples[i].label);
  }

  const MixtureParams single({1.0}, {DirichletParams({1, 1, 1})});
  for (const auto& s : sample_mixture(single, 50, 9)) CHECK(s.label == 0);

  CHECK_THROWS_AS(MixtureParams({0.5, 0.4}, {DirichletParams({1, 1}),
                                             DirichletParams({1, 1})}),
                  InvalidWeights);
}

TEST_CASE("snt parameter map") {
  const auto betas = snt_param_map(DirichletParams({2, 5, 6, 3, 7}));
  REQUIRE(betas.size() == 4);
  CHECK(betas[0].a == 2);
  CHECK(betas[0].b == 21);
  CHECK(betas[1].a == 5);
  CHECK(betas[1].b == 16);
  CHECK(betas[2].a == 6);
  CHECK(betas[2].b == 10);
  CHECK(betas[3].a == 3);
  CHECK(betas[3].b == 7);

  const auto tiny = snt_param_map(DirichletParams({1, 1}));
  REQUIRE(tiny.size() == 1);
  CHECK(tiny[0].a == 1);
  CHECK(tiny[0].b == 1);
}

TEST_CASE("pnt parameter map") {
  const TransformPlan plan(5);
  const auto betas = pnt_param_map(DirichletParams({2, 5, 6, 3, 7}), plan);
  REQUIRE(betas.size() == 4);
  CHECK(betas[0].a == 2);
  CHECK(betas[0].b == 5);
  CHECK(betas[1].a == 6);
  CHECK(betas[1].b == 3);
  CHECK(betas[2].a == 7);
  CHECK(betas[2].b == 9);
  CHECK(betas[3].a == 16);
  CHECK(betas[3].b == 7);

  const TransformPlan plan4(4);
  const auto uniform = pnt_param_map(DirichletParams({1, 1, 1, 1}), plan4);
  REQUIRE(uniform.size() == 3);
  CHECK(uniform[0].a == 1);
  CHECK(uniform[0].b == 1);
  CHECK(uniform[1].a == 1);
  CHECK(uniform[1].b == 1);
  CHECK(uniform[2].a == 2);
  CHECK(uniform[2].b == 2);
}

TEST_CASE("dirichlet marginal") {
  const auto p = dirichlet_marginal(DirichletParams({2, 5, 6, 3, 7}), 0);
  CHECK(p.a == 2);
  CHECK(p.b == 21);
  const auto q = dirichlet_marginal(DirichletParams({3, 3, 3, 3}), 2);
  CHECK(q.a == 3);
  CHECK(q.b == 9);
}

TEST_CASE("parameter maps conserve total concentration") {
  const DirichletParams params({2, 5, 6, 3, 7, 1.5, 0.8});
  const TransformPlan plan(params.dim());
  const auto betas = pnt_param_map(params, plan);
  // root pair total equals the full concentration
  const auto& final_beta = betas.back();
  double total = 0.0;
  for (double a : params.alpha) total += a;
  CHECK(final_beta.a + final_beta.b == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("transformed coordinates follow the propagated beta laws") {
  const DirichletParams params({2, 5, 6, 3, 7});
  const std::size_t n = 10000;
  const auto data = sample_dirichlet(params, n, 2024);
  const TransformPlan plan(5);
  const auto snt_betas = snt_param_map(params);
  const auto pnt_betas = pnt_param_map(params, plan);
  std::vector<std::vector<double>> snt_cols(4, std::vector<double>(n));
  std::vector<std::vector<double>> pnt_cols(4, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto us = snt_forward(data[i]);
    const auto up = pnt_forward(data[i], plan);
    for (std::size_t k = 0; k < 4; ++k) {
      snt_cols[k][i] = us.values[k];
      pnt_cols[k][i] = up.values[k];
    }
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const auto cdf_s = [&](double x) { return beta_cdf(snt_betas[k], x); };
    const auto cdf_p = [&](double x) { return beta_cdf(pnt_betas[k], x); };
    CHECK(ks_test_pvalue(snt_cols[k], cdf_s) > 0.01);
    CHECK(ks_test_pvalue(pnt_cols[k], cdf_p) > 0.01);
  }
}

TEST_CASE("aggregation preserves the dirichlet law") {
  // merging two adjacent coordinates of Dir(alpha) matches Dir with the
  // corresponding entries merged, checked marginal-wise by KS
  const DirichletParams params({2, 5, 6, 3, 7});
  const std::size_t n = 10000;
  const auto data = sample_dirichlet(params, n, 31);
  const DirichletParams merged({2, 11, 3, 7});
  std::vector<std::vector<double>> cols(4, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = data[i][0];
    cols[1][i] = data[i][1] + data[i][2];
    cols[2][i] = data[i][3];
    cols[3][i] = data[i][4];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const auto marginal = dirichlet_marginal(merged, k);
    CHECK(ks_test_pvalue(cols[k],
                         [&](double x) { return beta_cdf(marginal, x); }) >
          0.01);
  }
}
