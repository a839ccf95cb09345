#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lyap/error.hpp"

namespace lyap {

/// Pooled block [first, last] of a weighted isotonic fit together with its level.
struct IsotonicBlock {
  std::size_t first = 0;
  std::size_t last = 0;
  double weight = 0.0;
  double level = 0.0;
};

/// Pool-adjacent-violators for
///   min sum_i w_i (c_i - z_i)^2   s.t.  c_1 >= c_2 >= ... >= c_n.
/// Returns the pooling blocks in order; each level is the weighted mean of its targets.
template <typename Real = double>
std::vector<IsotonicBlock> isotonic_blocks(std::span<const Real> z, std::span<const Real> w) {
  if (z.size() != w.size()) {
    throw Error(ErrorCode::LengthMismatch, "isotonic: " + std::to_string(z.size()) +
                                               " targets but " + std::to_string(w.size()) +
                                               " weights");
  }
  std::vector<IsotonicBlock> stack;
  stack.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(w[i] > 0)) {
      throw Error(ErrorCode::InvalidArgument, "isotonic: weights must be positive");
    }
    IsotonicBlock cur{i, i, static_cast<double>(w[i]), static_cast<double>(z[i])};
    // A later block may not sit above an earlier one.
    while (!stack.empty() && stack.back().level <= cur.level) {
      const IsotonicBlock& prev = stack.back();
      const double weight = prev.weight + cur.weight;
      cur.level = (prev.weight * prev.level + cur.weight * cur.level) / weight;
      cur.weight = weight;
      cur.first = prev.first;
      stack.pop_back();
    }
    stack.push_back(cur);
  }
  return stack;
}

template <typename Real = double>
std::vector<Real> isotonic_nonincreasing(std::span<const Real> z, std::span<const Real> w) {
  const auto blocks = isotonic_blocks<Real>(z, w);
  std::vector<Real> c(z.size());
  for (const auto& b : blocks) {
    for (std::size_t i = b.first; i <= b.last; ++i) c[i] = static_cast<Real>(b.level);
  }
  return c;
}

}  // namespace lyap
