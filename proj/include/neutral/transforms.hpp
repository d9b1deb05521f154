#ifndef NEUTRAL_TRANSFORMS_HPP
#define NEUTRAL_TRANSFORMS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "neutral/composition.hpp"
#include "neutral/errors.hpp"
#include "neutral/plan.hpp"

namespace neutral {

// below this the remaining mass (or a pair sum) is treated as degenerate
inline constexpr double kMassFloor = 1e-300;

enum class TransformKind { kSnt, kPnt };

// K mutually independent coordinates, all strictly inside (0,1) for
// strictly positive input. PNT results carry the plan that produced them.
struct TransformedVector {
  std::vector<double> values;
  TransformKind kind;
  std::optional<TransformPlan> plan;
};

// ---------------------------------------------------------------------------
// Serial transform. Peel off the leading element, renormalize the rest,
// repeat; equivalent to u_k = x_k / (1 - s_{k-1}) but kept in the literal
// peel-and-renormalize form so the measured cost reflects the serial scheme.
// ---------------------------------------------------------------------------

inline void snt_forward_into(std::span<const double> x, std::span<double> u,
                             std::span<double> work) {
  const std::size_t dim = x.size();
  const std::size_t k = dim - 1;
  for (std::size_t i = 0; i < dim; ++i) work[i] = x[i];
  for (std::size_t step = 0; step < k; ++step) {
    u[step] = work[step];
    if (step + 1 == k) break;
    double rest = 0.0;
    for (std::size_t j = step + 1; j < dim; ++j) rest += work[j];
    if (rest < kMassFloor) {
      throw DegenerateTail("snt_forward: remaining mass underflow");
    }
    for (std::size_t j = step + 1; j < dim; ++j) work[j] /= rest;
  }
}

inline TransformedVector snt_forward(const Composition& x) {
  const std::size_t k = x.dim() - 1;
  std::vector<double> u(k);
  std::vector<double> work(x.dim());
  snt_forward_into(x.values(), u, work);
  return TransformedVector{std::move(u), TransformKind::kSnt, std::nullopt};
}

inline Composition snt_inverse(const TransformedVector& u) {
  const std::size_t k = u.values.size();
  std::vector<double> x(k + 1);
  double remaining = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double v = u.values[i];
    if (!(v > 0.0) || !(v < 1.0)) {
      throw OutOfRange("snt_inverse: coordinate outside (0,1)");
    }
    x[i] = v * remaining;
    remaining *= 1.0 - v;
  }
  x[k] = remaining;
  return Composition(std::move(x), false);
}

// ---------------------------------------------------------------------------
// Parallel transform. Each level pairs consecutive nodes, emits the
// left-share ratio of every pair and aggregates; output order is
// level-major, pair-index-minor, with the 2-node level's first element last.
// ---------------------------------------------------------------------------

inline void pnt_forward_into(std::span<const double> x,
                             const TransformPlan& plan, std::span<double> u,
                             std::span<double> work) {
  for (std::size_t i = 0; i < x.size(); ++i) work[i] = x[i];
  for (const PlanLevel& level : plan.levels()) {
    for (std::size_t l = 0; l < level.pair_count; ++l) {
      const double left = work[2 * l];
      const double sum = left + work[2 * l + 1];
      if (sum < kMassFloor) {
        throw DegeneratePair("pnt_forward: pair mass underflow");
      }
      u[level.output_offset + l] = left / sum;
      work[l] = sum;
    }
    if (level.has_carry) {
      work[level.pair_count] = work[level.node_count - 1];
    }
  }
  u[plan.final_output_index()] = work[0];
}

inline TransformedVector pnt_forward(const Composition& x,
                                     const TransformPlan& plan) {
  if (plan.input_dim() != x.dim()) {
    throw LengthMismatch("pnt_forward: plan dimension mismatch");
  }
  std::vector<double> u(plan.output_dim());
  std::vector<double> work(x.dim());
  pnt_forward_into(x.values(), plan, u, work);
  return TransformedVector{std::move(u), TransformKind::kPnt, plan};
}

inline TransformedVector pnt_forward(const Composition& x) {
  return pnt_forward(x, build_plan(x.dim()));
}

// Zero-padded power-of-two variant. Ratios whose even member is structurally
// a pad (or whose pair is all-pad) are dropped by position, not by value, so
// a genuine ratio that rounds to 1.0 survives. Produces the same coordinates
// as pnt_forward, in the same order.
inline TransformedVector fpnt_forward(const Composition& x) {
  const std::size_t dim = x.dim();
  std::size_t padded = 1;
  while (padded < dim) padded *= 2;
  std::vector<double> work(padded, 0.0);
  std::vector<char> pad(padded, 1);
  for (std::size_t i = 0; i < dim; ++i) {
    work[i] = x[i];
    pad[i] = 0;
  }
  std::vector<double> u;
  u.reserve(dim - 1);
  for (std::size_t n = padded; n > 1; n /= 2) {
    if (n == 2) {
      // canonical final coordinate: the left node's value, matching the
      // parallel stop rule; equals the last-level ratio under unit sum
      u.push_back(work[0]);
      break;
    }
    for (std::size_t l = 0; l < n / 2; ++l) {
      const double left = work[2 * l];
      const double right = work[2 * l + 1];
      if (!pad[2 * l + 1]) {
        const double sum = left + right;
        if (sum < kMassFloor) {
          throw DegeneratePair("fpnt_forward: pair mass underflow");
        }
        u.push_back(left / sum);
      }
      // 0/0 := 1 and v/(v+0) = 1 are both structurally deterministic
      work[l] = left + right;
      pad[l] = pad[2 * l] && pad[2 * l + 1];
    }
  }
  return TransformedVector{std::move(u), TransformKind::kPnt,
                           build_plan(dim)};
}

inline void check_unit_interval(std::span<const double> u, const char* who) {
  for (double v : u) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw OutOfRange(std::string(who) + ": coordinate outside (0,1)");
    }
  }
}

inline Composition pnt_inverse(const TransformedVector& u,
                               const TransformPlan& plan) {
  if (u.values.size() != plan.output_dim()) {
    throw LengthMismatch("pnt_inverse: coordinate count mismatch");
  }
  check_unit_interval(u.values, "pnt_inverse");
  const double top = u.values[plan.final_output_index()];
  std::vector<double> cur = {top, 1.0 - top};
  const auto& levels = plan.levels();
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    std::vector<double> child(it->node_count);
    for (std::size_t l = 0; l < it->pair_count; ++l) {
      const double r = u.values[it->output_offset + l];
      child[2 * l] = r * cur[l];
      child[2 * l + 1] = (1.0 - r) * cur[l];
    }
    if (it->has_carry) {
      child[it->node_count - 1] = cur[it->pair_count];
    }
    cur = std::move(child);
  }
  return Composition(std::move(cur), false);
}

inline Composition pnt_inverse(const TransformedVector& u) {
  if (!u.plan) {
    throw ConfigMismatch("pnt_inverse: transformed vector carries no plan");
  }
  return pnt_inverse(u, *u.plan);
}

// ---------------------------------------------------------------------------
// Analytic Jacobian of the inverse parallel transform. Every reconstructed
// element is a product of u-or-(1-u) factors along its root-to-leaf path,
// so each partial derivative is the same product with one factor replaced
// by +-1.
// ---------------------------------------------------------------------------

// (K+1) x K matrix of d x_i / d u_k; row-major storage
struct JacobianMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double at(std::size_t i, std::size_t k) const { return data[i * cols + k]; }
  double& at(std::size_t i, std::size_t k) { return data[i * cols + k]; }
};

namespace detail {

struct PathFactor {
  std::size_t coord;
  bool complement;  // factor is (1 - u_coord) instead of u_coord
};

// root-to-leaf factor list for every output element of pnt_inverse
inline std::vector<std::vector<PathFactor>> leaf_paths(
    const TransformPlan& plan) {
  std::vector<std::vector<PathFactor>> cur(2);
  cur[0] = {{plan.final_output_index(), false}};
  cur[1] = {{plan.final_output_index(), true}};
  const auto& levels = plan.levels();
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    std::vector<std::vector<PathFactor>> child(it->node_count);
    for (std::size_t l = 0; l < it->pair_count; ++l) {
      const std::size_t k = it->output_offset + l;
      child[2 * l] = cur[l];
      child[2 * l].push_back({k, false});
      child[2 * l + 1] = cur[l];
      child[2 * l + 1].push_back({k, true});
    }
    if (it->has_carry) {
      child[it->node_count - 1] = cur[it->pair_count];
    }
    cur = std::move(child);
  }
  return cur;
}

}  // namespace detail

inline JacobianMatrix pnt_inverse_jacobian(const TransformedVector& u,
                                           const TransformPlan& plan) {
  if (u.values.size() != plan.output_dim()) {
    throw LengthMismatch("pnt_inverse_jacobian: coordinate count mismatch");
  }
  check_unit_interval(u.values, "pnt_inverse_jacobian");
  const auto paths = detail::leaf_paths(plan);
  JacobianMatrix jac;
  jac.rows = plan.input_dim();
  jac.cols = plan.output_dim();
  jac.data.assign(jac.rows * jac.cols, 0.0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    for (std::size_t d = 0; d < path.size(); ++d) {
      double value = path[d].complement ? -1.0 : 1.0;
      for (std::size_t f = 0; f < path.size(); ++f) {
        if (f == d) continue;
        const double uf = u.values[path[f].coord];
        value *= path[f].complement ? 1.0 - uf : uf;
      }
      jac.at(i, path[d].coord) = value;
    }
  }
  return jac;
}

}  // namespace neutral

#endif
