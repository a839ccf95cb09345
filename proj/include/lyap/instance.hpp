#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lyap/error.hpp"

namespace lyap {

/// The data (t, x, m) of a multi-point moment problem. Construct through
/// validate_instance(); the fields are not re-checked afterwards.
struct MomentInstance {
  double t = 1.0;
  std::vector<double> x;  // strictly increasing locations
  std::vector<int> m;     // positive multiplicities

  std::size_t n() const noexcept { return x.size(); }

  int nu() const noexcept {
    int total = 0;
    for (int mi : m) total += mi;
    return total;
  }
};

/// Instance with every location repeated according to its multiplicity.
struct FlatInstance {
  int nu = 0;
  std::vector<double> u;     // u[k] = x[f[k]], non-decreasing
  std::vector<std::size_t> f;  // zero-based location index of flat slot k
};

/// Minimizer of one of the two constrained quadratic problems.
struct VariationalSolution {
  std::vector<double> values;
  double objective = 0.0;
  std::vector<std::size_t> active;  // zero-based i with gap_i == margin_i
};

inline MomentInstance validate_instance(double t, std::vector<double> x, std::vector<int> m) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::NonPositiveTime, "t must be positive, got " + std::to_string(t));
  }
  if (x.size() != m.size()) {
    throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(x.size()) +
                                               " entries but m has " + std::to_string(m.size()));
  }
  if (x.empty()) {
    throw Error(ErrorCode::LengthMismatch, "at least one location is required");
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1) {
      throw Error(ErrorCode::NonPositiveMultiplicity,
                  "m[" + std::to_string(i) + "] = " + std::to_string(m[i]) + " is not positive");
    }
  }
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    // Negated comparison so that NaN is rejected as well.
    if (!(x[i] < x[i + 1])) {
      throw Error(ErrorCode::UnsortedLocations,
                  "locations must be strictly increasing (x[" + std::to_string(i) + "] >= x[" +
                      std::to_string(i + 1) + "])");
    }
  }
  return MomentInstance{t, std::move(x), std::move(m)};
}

inline FlatInstance flatten(const MomentInstance& inst) {
  FlatInstance flat;
  flat.nu = inst.nu();
  flat.u.reserve(static_cast<std::size_t>(flat.nu));
  flat.f.reserve(static_cast<std::size_t>(flat.nu));
  for (std::size_t j = 0; j < inst.n(); ++j) {
    for (int r = 0; r < inst.m[j]; ++r) {
      flat.u.push_back(inst.x[j]);
      flat.f.push_back(j);
    }
  }
  return flat;
}

/// Objective of the flat problem: sum_k (t/2) a_k^2 + u_k a_k. Feasibility is not checked.
inline double gamma1_objective(const FlatInstance& flat, double t, std::span<const double> a) {
  if (a.size() != flat.u.size()) {
    throw Error(ErrorCode::LengthMismatch, "gamma1 objective expects " +
                                               std::to_string(flat.u.size()) + " values, got " +
                                               std::to_string(a.size()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    total += 0.5 * t * a[k] * a[k] + flat.u[k] * a[k];
  }
  return total;
}

/// Objective of the grouped problem:
///   sum_i m_i t/2 (b_i + x_i/t)^2 + (m_i^3 - m_i) t/24 - m_i x_i^2 / (2t).
inline double gamma2_objective(const MomentInstance& inst, std::span<const double> b) {
  if (b.size() != inst.n()) {
    throw Error(ErrorCode::LengthMismatch, "gamma2 objective expects " +
                                               std::to_string(inst.n()) + " values, got " +
                                               std::to_string(b.size()));
  }
  const double t = inst.t;
  double total = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double mi = inst.m[i];
    const double shifted = b[i] + inst.x[i] / t;
    total += 0.5 * mi * t * shifted * shifted + (mi * mi * mi - mi) * t / 24.0 -
             mi * inst.x[i] * inst.x[i] / (2.0 * t);
  }
  return total;
}

}  // namespace lyap
