#ifndef NEUTRAL_COMPOSITION_HPP
#define NEUTRAL_COMPOSITION_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "neutral/errors.hpp"

namespace neutral {

inline constexpr double kZeroClamp = 1e-12;
inline constexpr double kSumTolerance = 1e-9;

// A strictly positive vector of proportions summing to one. Immutable after
// construction; the only way to build one from raw data is make_composition.
class Composition {
 public:
  Composition(std::vector<double> values, bool clamped)
      : values_(std::move(values)), clamped_(clamped) {}

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // true if any exact zero was clamped to kZeroClamp during ingestion
  bool had_clamped_zeros() const { return clamped_; }

 private:
  std::vector<double> values_;
  bool clamped_;
};

// Normalizes raw nonnegative data to unit sum. Exact zeros are clamped to
// kZeroClamp before normalizing so downstream ratios stay finite; the clamp
// is recorded on the result.
inline Composition make_composition(const std::vector<double>& raw) {
  if (raw.size() < 2) {
    throw EmptyInput("make_composition: need at least 2 elements");
  }
  const double raw_sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(raw_sum > 0.0) || !std::isfinite(raw_sum)) {
    throw ZeroSum("make_composition: element sum is zero or not finite");
  }
  bool clamped = false;
  std::vector<double> v(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double x = raw[i];
    if (std::isnan(x) || x < 0.0) {
      throw NegativeElement("make_composition: negative or NaN element");
    }
    if (x == 0.0) {
      v[i] = kZeroClamp;
      clamped = true;
    } else {
      v[i] = x;
    }
  }
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= sum;
  return Composition(std::move(v), clamped);
}

}  // namespace neutral

#endif
