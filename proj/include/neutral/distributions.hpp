#ifndef NEUTRAL_DISTRIBUTIONS_HPP
#define NEUTRAL_DISTRIBUTIONS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "neutral/composition.hpp"
#include "neutral/errors.hpp"
#include "neutral/plan.hpp"
#include "neutral/rng.hpp"
#include "neutral/special.hpp"

namespace neutral {

struct BetaParams {
  double a = 1.0;
  double b = 1.0;

  BetaParams() = default;
  BetaParams(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw InvalidParams("BetaParams: parameters must be positive");
    }
  }
};

struct DirichletParams {
  std::vector<double> alpha;

  explicit DirichletParams(std::vector<double> alpha_)
      : alpha(std::move(alpha_)) {
    if (alpha.size() < 2) {
      throw InvalidAlpha("DirichletParams: need at least 2 concentrations");
    }
    for (double a : alpha) {
      if (!(a > 0.0)) {
        throw InvalidAlpha("DirichletParams: concentrations must be positive");
      }
    }
  }

  std::size_t dim() const { return alpha.size(); }
};

struct MixtureParams {
  std::vector<double> weights;
  std::vector<DirichletParams> components;

  MixtureParams(std::vector<double> weights_,
                std::vector<DirichletParams> components_)
      : weights(std::move(weights_)), components(std::move(components_)) {
    if (components.empty() || weights.size() != components.size()) {
      throw InvalidWeights("MixtureParams: weight/component count mismatch");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) {
        throw InvalidWeights("MixtureParams: weights must be positive");
      }
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw InvalidWeights("MixtureParams: weights must sum to 1");
    }
    for (const auto& c : components) {
      if (c.dim() != components.front().dim()) {
        throw InvalidWeights("MixtureParams: component dimensions differ");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

// Marsaglia-Tsang rejection sampler; shape < 1 handled by boosting.
inline double sample_gamma(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = rng.next_open_double();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_open_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double sample_beta(const BetaParams& p, Rng& rng) {
  const double x = sample_gamma(p.a, rng);
  const double y = sample_gamma(p.b, rng);
  return x / (x + y);
}

inline Composition sample_dirichlet_one(const DirichletParams& params,
                                        Rng& rng) {
  std::vector<double> v(params.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = sample_gamma(params.alpha[i], rng);
    sum += v[i];
  }
  for (double& x : v) x /= sum;
  return Composition(std::move(v), false);
}

inline std::vector<Composition> sample_dirichlet(const DirichletParams& params,
                                                 std::size_t n,
                                                 std::uint64_t seed) {
  if (n < 1) throw InvalidParams("sample_dirichlet: n must be positive");
  Rng rng(seed);
  std::vector<Composition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(sample_dirichlet_one(params, rng));
  }
  return out;
}

struct LabeledSample {
  Composition value;
  std::size_t label;
};

inline std::vector<LabeledSample> sample_mixture(const MixtureParams& params,
                                                 std::size_t n,
                                                 std::uint64_t seed) {
  if (n < 1) throw InvalidParams("sample_mixture: n must be positive");
  Rng rng(seed);
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double toss = rng.next_double();
    double acc = 0.0;
    std::size_t label = params.components.size() - 1;
    for (std::size_t c = 0; c < params.weights.size(); ++c) {
      acc += params.weights[c];
      if (toss < acc) {
        label = c;
        break;
      }
    }
    out.push_back({sample_dirichlet_one(params.components[label], rng), label});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Beta moments and differential entropy (nats)
// ---------------------------------------------------------------------------

inline double beta_entropy(const BetaParams& p) {
  return log_beta(p.a, p.b) - (p.a - 1.0) * digamma(p.a) -
         (p.b - 1.0) * digamma(p.b) + (p.a + p.b - 2.0) * digamma(p.a + p.b);
}

// E[u^2]
inline double beta_moment2(const BetaParams& p) {
  return p.a * (p.a + 1.0) / ((p.a + p.b) * (p.a + p.b + 1.0));
}

// E[(1-u)^2]
inline double beta_moment2_complement(const BetaParams& p) {
  return beta_moment2(BetaParams(p.b, p.a));
}

inline double beta_cdf(const BetaParams& p, double x) {
  return beta_inc(p.a, p.b, x);
}

// ---------------------------------------------------------------------------
// Dirichlet parameter propagation through the transforms
// ---------------------------------------------------------------------------

// serial coordinates: u_k ~ Beta(alpha_k, sum of the alphas after k)
inline std::vector<BetaParams> snt_param_map(const DirichletParams& params) {
  const std::size_t k = params.dim() - 1;
  std::vector<BetaParams> out;
  out.reserve(k);
  double tail = 0.0;
  for (std::size_t i = params.dim(); i-- > 1;) tail += params.alpha[i];
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(params.alpha[i], tail);
    tail -= params.alpha[i + 1];
  }
  return out;
}

// The concentrations aggregate through the same pairing tree as the data;
// each pair emits Beta(left alpha, right alpha) and the final coordinate
// gets the two root-subtree sums.
inline std::vector<BetaParams> pnt_param_map(const DirichletParams& params,
                                             const TransformPlan& plan) {
  if (params.dim() != plan.input_dim()) {
    throw LengthMismatch("pnt_param_map: plan dimension mismatch");
  }
  std::vector<BetaParams> out(plan.output_dim());
  std::vector<double> work = params.alpha;
  for (const PlanLevel& level : plan.levels()) {
    for (std::size_t l = 0; l < level.pair_count; ++l) {
      const double left = work[2 * l];
      const double right = work[2 * l + 1];
      out[level.output_offset + l] = BetaParams(left, right);
      work[l] = left + right;
    }
    if (level.has_carry) {
      work[level.pair_count] = work[level.node_count - 1];
    }
  }
  out[plan.final_output_index()] = BetaParams(work[0], work[1]);
  return out;
}

// marginal of the k-th coordinate (0-based): Beta(alpha_k, sum of the rest)
inline BetaParams dirichlet_marginal(const DirichletParams& params,
                                     std::size_t k) {
  if (k >= params.dim()) {
    throw OutOfRange("dirichlet_marginal: index out of range");
  }
  double rest = 0.0;
  for (std::size_t i = 0; i < params.dim(); ++i) {
    if (i != k) rest += params.alpha[i];
  }
  return BetaParams(params.alpha[k], rest);
}

}  // namespace neutral

#endif
