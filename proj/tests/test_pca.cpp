#include <cmath>
#include <vector>

#include "doctest.h"
#include "neutral/distributions.hpp"
#include "neutral/pca.hpp"
#include "neutral/rng.hpp"

using namespace neutral;

namespace {

std::vector<std::vector<double>> dirichlet_rows(const DirichletParams& params,
                                                std::size_t n,
                                                std::uint64_t seed) {
  const auto samples = sample_dirichlet(params, n, seed);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = samples[i].values();
  return rows;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("pca eigenvectors are orthonormal") {
  const auto rows = dirichlet_rows(DirichletParams({2, 5, 6, 3, 7}), 400, 21);
  const auto model = pca_fit(rows);
  const std::size_t d = model.dim;
  for (std::size_t c1 = 0; c1 < d; ++c1) {
    for (std::size_t c2 = 0; c2 < d; ++c2) {
      double dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        dot += model.vec_at(r, c1) * model.vec_at(r, c2);
      }
      CHECK(std::fabs(dot - (c1 == c2 ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("pca reconstructs the covariance") {
  const auto rows = dirichlet_rows(DirichletParams({3, 1, 4, 1.5}), 300, 8);
  const std::size_t d = 4;
  const std::size_t n = rows.size();
  std::vector<double> mean(d, 0.0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= n;
  std::vector<double> cov(d * d, 0.0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        cov[i * d + j] += (row[i] - mean[i]) * (row[j] - mean[j]);
      }
    }
  }
  for (double& c : cov) c /= static_cast<double>(n - 1);

  const auto model = pca_fit(rows);
  // V diag(lambda) V^T
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        acc += model.vec_at(i, c) * model.eigenvalues[c] * model.vec_at(j, c);
      }
      CHECK(std::fabs(acc - cov[i * d + j]) < 1e-10);
    }
  }
  // trace conservation
  double trace = 0.0, sum_ev = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += cov[i * d + i];
  for (double ev : model.eigenvalues) sum_ev += ev;
  CHECK(trace == doctest::Approx(sum_ev).epsilon(1e-12));
  // descending order
  for (std::size_t c = 1; c < d; ++c) {
    CHECK(model.eigenvalues[c - 1] >= model.eigenvalues[c]);
  }
}

TEST_CASE("compositional data has one null direction") {
  const auto rows = dirichlet_rows(DirichletParams({2, 2, 2, 2, 2}), 500, 99);
  const auto model = pca_fit(rows);
  CHECK(std::fabs(model.eigenvalues.back()) < 1e-14);
  // the null eigenvector is the constant direction
  const double expected = 1.0 / std::sqrt(5.0);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(std::fabs(std::fabs(model.vec_at(r, 4)) - expected) < 1e-6);
  }
}

TEST_CASE("pca scores are pearson-decorrelated") {
  const auto rows = dirichlet_rows(DirichletParams({2, 5, 6, 3, 7}), 400, 33);
  const auto model = pca_fit(rows);
  const auto scores = pca_transform(model, rows);
  REQUIRE(scores.front().size() == 4);
  std::vector<std::vector<double>> cols(4, std::vector<double>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < 4; ++c) cols[c][r] = scores[r][c];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      CHECK(std::fabs(pearson(cols[i], cols[j])) < 1e-10);
    }
  }
}

TEST_CASE("pca argument validation") {
  CHECK_THROWS_AS(pca_fit({}), TooFewSamples);
  std::vector<std::vector<double>> few(3, std::vector<double>(5, 0.2));
  CHECK_THROWS_AS(pca_fit(few), TooFewSamples);
}
