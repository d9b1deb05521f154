#ifndef NEUTRAL_CODINGGAIN_HPP
#define NEUTRAL_CODINGGAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "neutral/distributions.hpp"
#include "neutral/errors.hpp"
#include "neutral/plan.hpp"
#include "neutral/rng.hpp"
#include "neutral/transforms.hpp"

namespace neutral {

struct GramDiagEstimate {
  std::vector<double> mean;       // E[J^T J]_{k,k}
  std::vector<double> std_error;  // Monte-Carlo standard error per entry
};

// Monte-Carlo estimate of the diagonal of E[J^T J] for the inverse
// parallel transform. The coordinates are sampled independently from the
// propagated beta laws; only the first K rows of the Jacobian enter the
// Gram matrix (the last element of x is the redundant one).
inline GramDiagEstimate jacobian_gram_diag_expect(const DirichletParams& params,
                                                  const TransformPlan& plan,
                                                  std::size_t n_mc,
                                                  std::uint64_t seed) {
  if (n_mc < 10000) {
    throw InvalidParams("jacobian_gram_diag_expect: need n_mc >= 10000");
  }
  const std::size_t k = plan.output_dim();
  const auto betas = pnt_param_map(params, plan);
  Rng rng(seed);
  std::vector<double> sum(k, 0.0);
  std::vector<double> sumsq(k, 0.0);
  TransformedVector u{std::vector<double>(k), TransformKind::kPnt, plan};
  for (std::size_t s = 0; s < n_mc; ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      u.values[i] = sample_beta(betas[i], rng);
    }
    const JacobianMatrix jac = pnt_inverse_jacobian(u, plan);
    for (std::size_t col = 0; col < k; ++col) {
      double g = 0.0;
      for (std::size_t row = 0; row < k; ++row) {
        const double e = jac.at(row, col);
        g += e * e;
      }
      sum[col] += g;
      sumsq[col] += g * g;
    }
  }
  GramDiagEstimate est;
  est.mean.resize(k);
  est.std_error.resize(k);
  const double n = static_cast<double>(n_mc);
  for (std::size_t col = 0; col < k; ++col) {
    est.mean[col] = sum[col] / n;
    const double var = (sumsq[col] / n - est.mean[col] * est.mean[col]) /
                       (n - 1.0) * n;
    est.std_error[col] = std::sqrt(std::max(var, 0.0) / n);
  }
  return est;
}

struct CodingGainResult {
  std::size_t k = 0;
  std::vector<double> alpha;
  double sum_h_x = 0.0;  // nats
  double sum_h_u = 0.0;  // nats
  std::vector<double> jacobian_diag_expect;
  std::vector<double> jacobian_diag_std_error;
  double gain = 0.0;
};

// High-rate coding gain of the parallel transform over direct
// per-coordinate quantization. The differential entropies enter the base-2
// exponent in nats; the Jacobian Gram diagonal enters through its
// geometric mean.
inline CodingGainResult coding_gain(const DirichletParams& params,
                                    std::size_t n_mc, std::uint64_t seed) {
  const TransformPlan plan(params.dim());
  const std::size_t k = plan.output_dim();
  CodingGainResult result;
  result.k = k;
  result.alpha = params.alpha;
  const auto u_betas = pnt_param_map(params, plan);
  for (std::size_t i = 0; i < k; ++i) {
    result.sum_h_x += beta_entropy(dirichlet_marginal(params, i));
    result.sum_h_u += beta_entropy(u_betas[i]);
  }
  const GramDiagEstimate gram =
      jacobian_gram_diag_expect(params, plan, n_mc, seed);
  result.jacobian_diag_expect = gram.mean;
  result.jacobian_diag_std_error = gram.std_error;
  double log2_geo_mean = 0.0;
  for (double g : gram.mean) log2_geo_mean += std::log2(g);
  log2_geo_mean /= static_cast<double>(k);
  const double entropy_gap = result.sum_h_x - result.sum_h_u;
  result.gain = std::exp2(2.0 / static_cast<double>(k) * entropy_gap -
                          log2_geo_mean);
  return result;
}

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<double> outliers;  // beyond 1.5 IQR from the quartiles
};

inline BoxStats box_stats(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return values[n - 1];
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
  };
  BoxStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  const double iqr = s.q3 - s.q1;
  for (double v : values) {
    if (v < s.q1 - 1.5 * iqr || v > s.q3 + 1.5 * iqr) s.outliers.push_back(v);
  }
  return s;
}

struct Fig4Row {
  std::size_t k = 0;
  std::size_t rounds = 0;
  BoxStats gain;
  std::size_t gains_above_one = 0;
};

// Coding-gain distribution per dimensionality, with alpha entries drawn
// uniformly from [low, high] each round.
inline std::vector<Fig4Row> fig4_experiment(const std::vector<std::size_t>& ks,
                                            std::size_t rounds, double low,
                                            double high, std::size_t n_mc,
                                            std::uint64_t seed) {
  std::vector<Fig4Row> rows;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const std::size_t k = ks[ki];
    std::vector<double> gains(rounds);
    std::size_t above = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
      const std::uint64_t round_seed = mix_seed(seed, ki * 1000003 + r);
      Rng rng(round_seed);
      std::vector<double> alpha(k + 1);
      for (double& a : alpha) a = rng.next_uniform(low, high);
      const CodingGainResult cg =
          coding_gain(DirichletParams(alpha), n_mc, mix_seed(round_seed, 1));
      gains[r] = cg.gain;
      if (cg.gain > 1.0) ++above;
    }
    Fig4Row row;
    row.k = k;
    row.rounds = rounds;
    row.gain = box_stats(std::move(gains));
    row.gains_above_one = above;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace neutral

#endif
