#ifndef NEUTRAL_PLAN_HPP
#define NEUTRAL_PLAN_HPP

#include <cstddef>
#include <vector>

#include "neutral/errors.hpp"

namespace neutral {

// One aggregation level of the parallel transform: consecutive nodes are
// paired (0,1),(2,3),... and, when the node count is odd, the last node is
// carried unpaired into the next level.
struct PlanLevel {
  std::size_t node_count = 0;   // nodes entering this level
  std::size_t pair_count = 0;   // ratios emitted at this level
  bool has_carry = false;       // odd node count: last node passes through
  std::size_t output_offset = 0;  // index of this level's first ratio in u
};

// Structural description of the pairing/carry tree induced by the input
// dimension. Shared by the forward transform, the inverse, the Jacobian,
// and the Dirichlet parameter propagation.
class TransformPlan {
 public:
  explicit TransformPlan(std::size_t input_dim) : input_dim_(input_dim) {
    if (input_dim < 2) {
      throw DimTooSmall("build_plan: dimension must be at least 2");
    }
    std::size_t n = input_dim;
    std::size_t offset = 0;
    while (n > 2) {
      PlanLevel level;
      level.node_count = n;
      level.pair_count = n / 2;
      level.has_carry = (n % 2 != 0);
      level.output_offset = offset;
      offset += level.pair_count;
      levels_.push_back(level);
      n = level.pair_count + (level.has_carry ? 1 : 0);
    }
    // the remaining 2-node level contributes the single final coordinate
    final_output_index_ = offset;
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return input_dim_ - 1; }
  const std::vector<PlanLevel>& levels() const { return levels_; }
  // position of the final (2-node level) coordinate in the output vector;
  // always output_dim()-1 by construction
  std::size_t final_output_index() const { return final_output_index_; }

 private:
  std::size_t input_dim_;
  std::vector<PlanLevel> levels_;
  std::size_t final_output_index_;
};

inline TransformPlan build_plan(std::size_t dim) { return TransformPlan(dim); }

}  // namespace neutral

#endif
