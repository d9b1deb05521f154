#ifndef NEUTRAL_EXPERIMENTS_HPP
#define NEUTRAL_EXPERIMENTS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "neutral/distributions.hpp"
#include "neutral/errors.hpp"
#include "neutral/independence.hpp"
#include "neutral/pca.hpp"
#include "neutral/rng.hpp"
#include "neutral/transforms.hpp"

namespace neutral {

// ---------------------------------------------------------------------------
// Single-Dirichlet decorrelation comparison (raw vs parallel transform vs
// PCA), aggregated over seeded rounds.
// ---------------------------------------------------------------------------

struct Table1Config {
  DirichletParams params;
  std::vector<std::size_t> sample_sizes = {100, 200, 400, 800};
  std::size_t rounds = 50;
  std::size_t n_perm = 1000;
  std::uint64_t seed = 1;
  double alpha_level = 0.05;
};

struct MeanPGrid {
  std::size_t dim = 0;
  std::size_t rounds = 0;       // rounds averaged into every cell
  std::vector<double> mean_p;   // dim x dim, symmetric

  double at(std::size_t i, std::size_t j) const { return mean_p[i * dim + j]; }

  bool all_pairs_below(double level) const {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        if (!(at(i, j) < level)) return false;
      }
    }
    return true;
  }
  bool all_pairs_above(double level) const {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        if (!(at(i, j) > level)) return false;
      }
    }
    return true;
  }
  bool any_pair_below(double level) const { return !all_pairs_above(level); }
};

namespace detail {

inline MeanPGrid make_grid(std::size_t dim) {
  return MeanPGrid{dim, 0, std::vector<double>(dim * dim, 0.0)};
}

inline void accumulate(MeanPGrid& grid, const PairwiseReport& report) {
  for (std::size_t i = 0; i < grid.mean_p.size(); ++i) {
    grid.mean_p[i] += report.pvalue[i];
  }
  grid.rounds += 1;
}

inline void finalize(MeanPGrid& grid) {
  for (double& p : grid.mean_p) p /= static_cast<double>(grid.rounds);
}

// first k columns of the compositions (the redundant last coordinate is
// dropped so all methods are compared on k scalars)
inline std::vector<std::vector<double>> raw_columns(
    const std::vector<Composition>& data) {
  const std::size_t k = data.front().dim() - 1;
  std::vector<std::vector<double>> rows(data.size(), std::vector<double>(k));
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) rows[r][c] = data[r][c];
  }
  return rows;
}

inline std::vector<std::vector<double>> pnt_rows(
    const std::vector<Composition>& data, const TransformPlan& plan) {
  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& x : data) rows.push_back(pnt_forward(x, plan).values);
  return rows;
}

inline std::vector<std::vector<double>> full_rows(
    const std::vector<Composition>& data) {
  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& x : data) rows.push_back(x.values());
  return rows;
}

}  // namespace detail

struct Table1Condition {
  std::size_t n_samples = 0;
  MeanPGrid raw;
  MeanPGrid pnt;
  MeanPGrid pca;
};

struct Table1Result {
  std::vector<Table1Condition> conditions;
  // direction-of-effect flags at the largest sample size
  bool raw_all_dependent = false;
  bool pnt_all_independent = false;
  bool pca_some_dependent = false;
  double runtime_seconds = 0.0;
};

inline Table1Result run_table1(const Table1Config& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t k = config.params.dim() - 1;
  const TransformPlan plan(config.params.dim());
  Table1Result result;
  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    const std::size_t n = config.sample_sizes[ni];
    Table1Condition cond;
    cond.n_samples = n;
    cond.raw = detail::make_grid(k);
    cond.pnt = detail::make_grid(k);
    cond.pca = detail::make_grid(k);
    for (std::size_t round = 0; round < config.rounds; ++round) {
      const std::uint64_t round_seed =
          mix_seed(config.seed, ni * 1000003 + round);
      const auto data =
          sample_dirichlet(config.params, n, mix_seed(round_seed, 0));
      const auto raw = detail::raw_columns(data);
      const auto pnt = detail::pnt_rows(data, plan);
      const auto full = detail::full_rows(data);
      const auto pca = pca_transform(pca_fit(full), full);
      detail::accumulate(cond.raw, pairwise_report(raw, config.n_perm,
                                                   mix_seed(round_seed, 1),
                                                   config.alpha_level));
      detail::accumulate(cond.pnt, pairwise_report(pnt, config.n_perm,
                                                   mix_seed(round_seed, 2),
                                                   config.alpha_level));
      detail::accumulate(cond.pca, pairwise_report(pca, config.n_perm,
                                                   mix_seed(round_seed, 3),
                                                   config.alpha_level));
    }
    detail::finalize(cond.raw);
    detail::finalize(cond.pnt);
    detail::finalize(cond.pca);
    result.conditions.push_back(std::move(cond));
  }
  const Table1Condition& largest = result.conditions.back();
  result.raw_all_dependent = largest.raw.all_pairs_below(config.alpha_level);
  result.pnt_all_independent = largest.pnt.all_pairs_above(config.alpha_level);
  result.pca_some_dependent = largest.pca.any_pair_below(config.alpha_level);
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// ---------------------------------------------------------------------------
// Dirichlet-mixture decorrelation: whole set vs ground-truth clusters.
// ---------------------------------------------------------------------------

struct Table2Config {
  MixtureParams params;
  std::vector<std::size_t> sample_sizes = {50, 800};
  std::size_t rounds = 50;
  std::size_t n_perm = 1000;
  std::uint64_t seed = 1;
  double alpha_level = 0.05;
};

struct Table2Condition {
  std::size_t n_samples = 0;
  MeanPGrid whole_raw;
  MeanPGrid whole_pnt;
  std::vector<MeanPGrid> cluster_pnt;  // one per mixture component
  // per-round flag counts (majority criteria)
  std::size_t rounds = 0;
  std::size_t whole_pnt_all_dependent_rounds = 0;
  std::size_t cluster_pnt_all_independent_rounds = 0;
};

struct Table2Result {
  std::vector<Table2Condition> conditions;
  // direction-of-effect flags on the mean grids at the largest sample size
  bool whole_pnt_fails = false;      // transform breaks on non-neutral data
  bool cluster_pnt_works = false;    // per-cluster independence restored
  double runtime_seconds = 0.0;
};

inline Table2Result run_table2(const Table2Config& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = config.params.components.front().dim();
  const std::size_t k = dim - 1;
  const std::size_t n_clusters = config.params.components.size();
  const TransformPlan plan(dim);
  Table2Result result;
  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    const std::size_t n = config.sample_sizes[ni];
    Table2Condition cond;
    cond.n_samples = n;
    cond.whole_raw = detail::make_grid(k);
    cond.whole_pnt = detail::make_grid(k);
    cond.cluster_pnt.assign(n_clusters, detail::make_grid(k));
    for (std::size_t round = 0; round < config.rounds; ++round) {
      const std::uint64_t round_seed =
          mix_seed(config.seed, ni * 1000003 + round);
      const auto labeled =
          sample_mixture(config.params, n, mix_seed(round_seed, 0));
      std::vector<Composition> whole;
      std::vector<std::vector<Composition>> clusters(n_clusters);
      whole.reserve(n);
      for (const auto& s : labeled) {
        whole.push_back(s.value);
        clusters[s.label].push_back(s.value);
      }
      const auto raw_report =
          pairwise_report(detail::raw_columns(whole), config.n_perm,
                          mix_seed(round_seed, 1), config.alpha_level);
      const auto pnt_report =
          pairwise_report(detail::pnt_rows(whole, plan), config.n_perm,
                          mix_seed(round_seed, 2), config.alpha_level);
      detail::accumulate(cond.whole_raw, raw_report);
      detail::accumulate(cond.whole_pnt, pnt_report);
      bool whole_all_dependent = true;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (!(pnt_report.pvalue_at(i, j) < config.alpha_level)) {
            whole_all_dependent = false;
          }
        }
      }
      bool clusters_all_independent = true;
      for (std::size_t c = 0; c < n_clusters; ++c) {
        const auto report =
            pairwise_report(detail::pnt_rows(clusters[c], plan), config.n_perm,
                            mix_seed(round_seed, 3 + c), config.alpha_level);
        detail::accumulate(cond.cluster_pnt[c], report);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = i + 1; j < k; ++j) {
            if (!(report.pvalue_at(i, j) > config.alpha_level)) {
              clusters_all_independent = false;
            }
          }
        }
      }
      cond.rounds += 1;
      if (whole_all_dependent) cond.whole_pnt_all_dependent_rounds += 1;
      if (clusters_all_independent) {
        cond.cluster_pnt_all_independent_rounds += 1;
      }
    }
    detail::finalize(cond.whole_raw);
    detail::finalize(cond.whole_pnt);
    for (auto& grid : cond.cluster_pnt) detail::finalize(grid);
    result.conditions.push_back(std::move(cond));
  }
  const Table2Condition& largest = result.conditions.back();
  result.whole_pnt_fails =
      largest.whole_pnt.all_pairs_below(config.alpha_level);
  result.cluster_pnt_works = true;
  for (const auto& grid : largest.cluster_pnt) {
    if (!grid.all_pairs_above(config.alpha_level)) {
      result.cluster_pnt_works = false;
    }
  }
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// ---------------------------------------------------------------------------
// Runtime scaling of the two transforms over the degrees of freedom.
// ---------------------------------------------------------------------------

struct ComplexityConfig {
  std::vector<std::size_t> degrees = {8, 16, 32, 64, 128, 256};
  std::size_t n_samples = 2000;
  std::size_t reps = 5;  // median over reps damps scheduler noise
  std::uint64_t seed = 1;
};

struct ComplexityPoint {
  std::size_t k = 0;
  double snt_seconds = 0.0;
  double pnt_seconds = 0.0;
};

struct ComplexityResult {
  std::vector<ComplexityPoint> points;
  double snt_slope = 0.0;  // log-log slope of time vs K
  double pnt_slope = 0.0;
  bool pnt_faster_at_max = false;
};

namespace detail {

template <typename F>
double time_batch(F&& batch, std::size_t reps) {
  using clock = std::chrono::steady_clock;
  std::vector<double> times(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    // repeat until the measured span is comfortably above timer resolution
    std::size_t inner = 1;
    for (;;) {
      const auto t0 = clock::now();
      for (std::size_t i = 0; i < inner; ++i) batch();
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      if (dt >= 0.02) {
        times[r] = dt / static_cast<double>(inner);
        break;
      }
      inner *= 4;
    }
  }
  std::sort(times.begin(), times.end());
  return times[reps / 2];
}

inline double loglog_slope(const std::vector<double>& ks,
                           const std::vector<double>& ts) {
  const std::size_t n = ks.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log2(ks[i]);
    ly[i] = std::log2(ts[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

}  // namespace detail

inline ComplexityResult run_complexity_trend(const ComplexityConfig& config) {
  ComplexityResult result;
  std::vector<double> ks, snt_times, pnt_times;
  for (std::size_t ki = 0; ki < config.degrees.size(); ++ki) {
    const std::size_t k = config.degrees[ki];
    const std::size_t dim = k + 1;
    const DirichletParams params(std::vector<double>(dim, 1.0));
    const auto data = sample_dirichlet(params, config.n_samples,
                                       mix_seed(config.seed, ki));
    const TransformPlan plan(dim);
    std::vector<double> u(k), work(dim);
    volatile double sink = 0.0;
    const double t_snt = detail::time_batch(
        [&] {
          for (const auto& x : data) {
            snt_forward_into(x.values(), u, work);
            sink = sink + u[0];
          }
        },
        config.reps);
    const double t_pnt = detail::time_batch(
        [&] {
          for (const auto& x : data) {
            pnt_forward_into(x.values(), plan, u, work);
            sink = sink + u[0];
          }
        },
        config.reps);
    result.points.push_back({k, t_snt, t_pnt});
    ks.push_back(static_cast<double>(k));
    snt_times.push_back(t_snt);
    pnt_times.push_back(t_pnt);
  }
  result.snt_slope = detail::loglog_slope(ks, snt_times);
  result.pnt_slope = detail::loglog_slope(ks, pnt_times);
  result.pnt_faster_at_max =
      result.points.back().pnt_seconds < result.points.back().snt_seconds;
  return result;
}

}  // namespace neutral

#endif
