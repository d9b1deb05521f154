#ifndef NEUTRAL_INDEPENDENCE_HPP
#define NEUTRAL_INDEPENDENCE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "neutral/errors.hpp"
#include "neutral/rng.hpp"

namespace neutral {

namespace detail {

// Doubly centered |x_i - x_j| distance matrix, stored densely, plus the
// distance variance it induces. Centering makes every row and column sum
// to zero, which is what lets the permutation loop skip re-centering the
// second argument.
struct CenteredDistances {
  std::size_t n = 0;
  std::vector<double> a;  // row-major n x n
  double dvar = 0.0;      // (1/n^2) sum A_ij^2

  explicit CenteredDistances(std::span<const double> xs) : n(xs.size()) {
    a.resize(n * n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::fabs(xs[i] - xs[j]);
        a[i * n + j] = d;
        sum += d;
      }
      row_mean[i] = sum / static_cast<double>(n);
      grand += sum;
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] -= row_mean[i] + row_mean[j] - grand;
      }
    }
    dvar = centered_product(*this);
  }

  // (1/n^2) sum_ij A_ij B_ij between two centered matrices; loop shape
  // matches dvar's accumulation so centered_product(self) == dvar bitwise
  double centered_product(const CenteredDistances& other) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* ra = a.data() + i * n;
      const double* rb = other.a.data() + i * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += ra[j] * rb[j];
      total += acc;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
  }

  // (1/n^2) sum_ij A_ij |y_i - y_j|; equals the doubly centered inner
  // product because the rows/columns of A sum to zero
  double dcov2_against(std::span<const double> ys) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = a.data() + i * n;
      const double yi = ys[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc += row[j] * std::fabs(yi - ys[j]);
      }
      total += acc;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
  }
};

}  // namespace detail

// Distance correlation of two scalar samples (Szekely's square-root
// normalization). Returns 0 when either distance variance is degenerate.
inline double distance_correlation(std::span<const double> xs,
                                   std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw LengthMismatch("distance_correlation: sample sizes differ");
  }
  if (xs.size() < 4) {
    throw TooFewSamples("distance_correlation: need at least 4 samples");
  }
  const detail::CenteredDistances ax(xs);
  const detail::CenteredDistances ay(ys);
  if (ax.dvar <= 0.0 || ay.dvar <= 0.0) return 0.0;
  const double dcov2 = ax.centered_product(ay);
  if (dcov2 <= 0.0) return 0.0;
  return std::sqrt(dcov2 / std::sqrt(ax.dvar * ay.dvar));
}

// Permutation p-value for the distance correlation: fraction of uniformly
// permuted replicas whose statistic strictly exceeds the observed one.
// The distance variances are permutation invariant, so replicas are ranked
// by dCov^2 alone.
inline double permutation_pvalue(std::span<const double> xs,
                                 std::span<const double> ys,
                                 std::size_t n_perm, std::uint64_t seed) {
  if (xs.size() != ys.size()) {
    throw LengthMismatch("permutation_pvalue: sample sizes differ");
  }
  if (xs.size() < 4) {
    throw TooFewSamples("permutation_pvalue: need at least 4 samples");
  }
  if (n_perm < 100) {
    throw InvalidParams("permutation_pvalue: need at least 100 permutations");
  }
  const detail::CenteredDistances ax(xs);
  if (ax.dvar <= 0.0) return 1.0;
  const double observed = ax.dcov2_against(ys);
  Rng rng(seed);
  std::vector<double> perm(ys.begin(), ys.end());
  std::size_t exceed = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    rng.shuffle(perm);
    if (ax.dcov2_against(perm) > observed) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(n_perm);
}

// Pairwise distance correlations and permutation p-values over the columns
// of a sample matrix.
struct PairwiseReport {
  std::size_t dim = 0;
  std::vector<double> dcor;    // dim x dim, symmetric, zero diagonal
  std::vector<double> pvalue;  // dim x dim, symmetric, diagonal unused (1)
  std::size_t n_permutations = 0;
  double alpha_level = 0.05;

  double dcor_at(std::size_t i, std::size_t j) const {
    return dcor[i * dim + j];
  }
  double pvalue_at(std::size_t i, std::size_t j) const {
    return pvalue[i * dim + j];
  }
  std::size_t pair_count() const { return dim * (dim - 1) / 2; }
};

// data is row-major: n_samples rows of `dim` columns
inline PairwiseReport pairwise_report(const std::vector<std::vector<double>>& data,
                                      std::size_t n_perm, std::uint64_t seed,
                                      double alpha_level = 0.05) {
  if (data.size() < 4) {
    throw TooFewSamples("pairwise_report: need at least 4 samples");
  }
  const std::size_t dim = data.front().size();
  PairwiseReport report;
  report.dim = dim;
  report.n_permutations = n_perm;
  report.alpha_level = alpha_level;
  report.dcor.assign(dim * dim, 0.0);
  report.pvalue.assign(dim * dim, 1.0);
  std::vector<std::vector<double>> cols(dim, std::vector<double>(data.size()));
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) cols[c][r] = data[r][c];
  }
  std::size_t pair_index = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j, ++pair_index) {
      const double dc = distance_correlation(cols[i], cols[j]);
      const double p =
          permutation_pvalue(cols[i], cols[j], n_perm, mix_seed(seed, pair_index));
      report.dcor[i * dim + j] = report.dcor[j * dim + i] = dc;
      report.pvalue[i * dim + j] = report.pvalue[j * dim + i] = p;
    }
  }
  return report;
}

// fraction of pairs judged independent (p > alpha) among all pairs
inline double independence_coefficient(const PairwiseReport& report) {
  if (report.dim < 2) return 1.0;
  std::size_t independent = 0;
  for (std::size_t i = 0; i < report.dim; ++i) {
    for (std::size_t j = i + 1; j < report.dim; ++j) {
      if (report.pvalue_at(i, j) > report.alpha_level) ++independent;
    }
  }
  return static_cast<double>(independent) /
         static_cast<double>(report.pair_count());
}

}  // namespace neutral

#endif
