#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "lyap/error.hpp"

namespace lyap {

/// Trajectory stored as knots; linear between knots.
struct PiecewiseLinearPath {
  std::vector<double> breakpoints;  // increasing, first 0, last t
  std::vector<double> values;
};

inline double evaluate_path(const PiecewiseLinearPath& path, double s) {
  const auto& knots = path.breakpoints;
  if (knots.empty() || knots.size() != path.values.size()) {
    throw Error(ErrorCode::InvalidArgument, "malformed path");
  }
  if (!(s >= knots.front() && s <= knots.back())) {
    throw Error(ErrorCode::OutOfRange, "s = " + std::to_string(s) + " outside [" +
                                           std::to_string(knots.front()) + ", " +
                                           std::to_string(knots.back()) + "]");
  }
  const auto upper = std::lower_bound(knots.begin(), knots.end(), s);
  const auto hi = static_cast<std::size_t>(upper - knots.begin());
  if (knots[hi] == s) return path.values[hi];
  const std::size_t lo = hi - 1;
  const double w = (s - knots[lo]) / (knots[hi] - knots[lo]);
  return path.values[lo] + w * (path.values[hi] - path.values[lo]);
}

}  // namespace lyap
