#pragma once

// Exact minimizers of the two margin-chain quadratic programs.
//
// Flat problem (length nu):   min sum_k (t/2) a_k^2 + u_k a_k,  a_k - a_{k+1} >= 1.
// Grouped problem (length n): min sum_i m_i t/2 (b_i + x_i/t)^2 + const_i,
//                             b_i - b_{i+1} >= (m_i + m_{i+1})/2.
//
// Both reduce to weighted isotonic regression. For the flat problem put
// c_k = a_k + k; then a_k - a_{k+1} >= 1 is c_k >= c_{k+1} and
//   (t/2) a_k^2 + u_k a_k = (t/2) (c_k - (k - u_k/t))^2 - u_k^2/(2t),
// so the targets are z_k = k - u_k/t with uniform weight t. For the grouped
// problem let M_1 = 0, M_{i+1} = M_i + (m_i + m_{i+1})/2 and c_i = b_i + M_i;
// the constraint becomes c_i >= c_{i+1} and the objective is
// sum_i (m_i t/2) (c_i - (M_i - x_i/t))^2 + const, i.e. targets M_i - x_i/t
// with weights m_i t. Pool-adjacent-violators solves either form exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lyap/clusters.hpp"
#include "lyap/error.hpp"
#include "lyap/instance.hpp"
#include "lyap/isotonic.hpp"

namespace lyap {

/// |gap - margin| at or below this (times 1 + |margin|) counts as a saturated constraint.
constexpr double kStructureTolerance = 1e-9;
/// Gaps this close to the margin, but not saturated, are reported as boundary cases.
constexpr double kBoundaryBand = 1e-6;
/// The exhaustive oracle enumerates 2^(d-1) active sets.
constexpr std::size_t kOracleMaxDimension = 20;

inline bool at_margin(double gap, double margin) {
  return std::abs(gap - margin) <= kStructureTolerance * (1.0 + std::abs(margin));
}

/// min sum_i (quadratic_i/2) v_i^2 + linear_i v_i + constant
/// s.t. v_i - v_{i+1} >= margins_i.
struct ChainQuadratic {
  std::vector<double> quadratic;
  std::vector<double> linear;
  std::vector<double> margins;  // size d - 1
  double constant = 0.0;

  double evaluate(std::span<const double> v) const {
    double total = constant;
    for (std::size_t i = 0; i < v.size(); ++i) {
      total += 0.5 * quadratic[i] * v[i] * v[i] + linear[i] * v[i];
    }
    return total;
  }
};

inline ChainQuadratic chain_problem_gamma1(const FlatInstance& flat, double t) {
  ChainQuadratic p;
  p.quadratic.assign(flat.u.size(), t);
  p.linear = flat.u;
  p.margins.assign(flat.u.empty() ? 0 : flat.u.size() - 1, 1.0);
  return p;
}

inline ChainQuadratic chain_problem_gamma2(const MomentInstance& inst) {
  ChainQuadratic p;
  const double t = inst.t;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const double mi = inst.m[i];
    p.quadratic.push_back(mi * t);
    p.linear.push_back(mi * inst.x[i]);
    p.constant += (mi * mi * mi - mi) * t / 24.0;
    if (i + 1 < inst.n()) p.margins.push_back(0.5 * (inst.m[i] + inst.m[i + 1]));
  }
  return p;
}

inline std::vector<std::size_t> saturated_constraints(std::span<const double> values,
                                                      std::span<const double> margins) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] - values[i + 1] <= margins[i] + kStructureTolerance * (1.0 + std::abs(margins[i]))) {
      active.push_back(i);
    }
  }
  return active;
}

inline VariationalSolution solve_gamma1(const FlatInstance& flat, double t) {
  const std::size_t nu = flat.u.size();
  std::vector<double> z(nu);
  std::vector<double> w(nu, t);
  for (std::size_t k = 0; k < nu; ++k) z[k] = static_cast<double>(k + 1) - flat.u[k] / t;
  auto c = isotonic_nonincreasing<double>(z, w);

  VariationalSolution sol;
  sol.values.resize(nu);
  for (std::size_t k = 0; k < nu; ++k) sol.values[k] = c[k] - static_cast<double>(k + 1);
  sol.objective = gamma1_objective(flat, t, sol.values);
  const std::vector<double> margins(nu == 0 ? 0 : nu - 1, 1.0);
  sol.active = saturated_constraints(sol.values, margins);
  return sol;
}

inline std::vector<double> gamma2_margins(const MomentInstance& inst) {
  std::vector<double> margins;
  for (std::size_t i = 0; i + 1 < inst.n(); ++i) {
    margins.push_back(0.5 * (inst.m[i] + inst.m[i + 1]));
  }
  return margins;
}

inline VariationalSolution solve_gamma2(const MomentInstance& inst) {
  const std::size_t n = inst.n();
  const auto margins = gamma2_margins(inst);
  std::vector<double> offset(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) offset[i] = offset[i - 1] + margins[i - 1];

  std::vector<double> z(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = offset[i] - inst.x[i] / inst.t;
    w[i] = inst.m[i] * inst.t;
  }
  auto c = isotonic_nonincreasing<double>(z, w);

  VariationalSolution sol;
  sol.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.values[i] = c[i] - offset[i];
  sol.objective = gamma2_objective(inst, sol.values);
  sol.active = saturated_constraints(sol.values, margins);
  return sol;
}

/// Exhaustive active-set oracle. Each subset of constraints held with equality
/// chains variables into blocks v_i = anchor - G_i (G_i the accumulated margins
/// inside the block); the anchor minimizing the block objective is
///   anchor = sum_i (q_i G_i - l_i) / sum_i q_i.
/// The least objective over all primal-feasible candidates is the global minimum.
inline VariationalSolution bruteforce_qp_oracle(const ChainQuadratic& problem) {
  const std::size_t d = problem.quadratic.size();
  if (d > kOracleMaxDimension) {
    throw Error(ErrorCode::DimensionTooLarge, "oracle dimension " + std::to_string(d) +
                                                  " exceeds " +
                                                  std::to_string(kOracleMaxDimension));
  }
  if (problem.linear.size() != d || problem.margins.size() + 1 != std::max<std::size_t>(d, 1)) {
    throw Error(ErrorCode::LengthMismatch, "oracle: inconsistent problem sizes");
  }
  VariationalSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  if (d == 0) {
    best.objective = problem.constant;
    return best;
  }

  const std::uint32_t subsets = 1u << (d - 1);
  std::vector<double> v(d);
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::size_t start = 0;
    while (start < d) {
      std::size_t end = start;
      while (end + 1 < d && (mask >> end & 1u)) ++end;
      double shift = 0.0;
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = start; i <= end; ++i) {
        if (i > start) shift += problem.margins[i - 1];
        num += problem.quadratic[i] * shift - problem.linear[i];
        den += problem.quadratic[i];
      }
      const double anchor = num / den;
      shift = 0.0;
      for (std::size_t i = start; i <= end; ++i) {
        if (i > start) shift += problem.margins[i - 1];
        v[i] = anchor - shift;
      }
      start = end + 1;
    }

    bool feasible = true;
    for (std::size_t i = 0; i + 1 < d && feasible; ++i) {
      const double slack = v[i] - v[i + 1] - problem.margins[i];
      feasible = slack >= -1e-12 * (1.0 + std::abs(problem.margins[i]));
    }
    if (!feasible) continue;

    const double obj = problem.evaluate(v);
    const double tie = 1e-14 * (1.0 + std::abs(best.objective));
    bool take = !std::isfinite(best.objective) || obj < best.objective - tie;
    if (!take && std::abs(obj - best.objective) <= tie) {
      // Lexicographically smallest active set among ties.
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const bool in_new = mask >> i & 1u;
        const bool in_old = best_mask >> i & 1u;
        if (in_new != in_old) {
          take = in_new;
          break;
        }
      }
    }
    if (take) {
      best.objective = obj;
      best.values = v;
      best_mask = mask;
    }
  }
  best.active = saturated_constraints(best.values, problem.margins);
  return best;
}

/// Expands a grouped vector b into a flat vector a: inside location block j
/// the entries step down by exactly one and are centred on b_j.
inline std::vector<double> lift_b_to_a(std::span<const double> b, const MomentInstance& inst) {
  if (b.size() != inst.n()) {
    throw Error(ErrorCode::LengthMismatch, "lift expects " + std::to_string(inst.n()) +
                                               " values, got " + std::to_string(b.size()));
  }
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(inst.nu()));
  int before = 0;  // S_{j-1}
  for (std::size_t j = 0; j < inst.n(); ++j) {
    const int mj = inst.m[j];
    for (int k = before + 1; k <= before + mj; ++k) {
      a.push_back(b[j] + 0.5 * (mj + 1) - k + before);
    }
    before += mj;
  }
  return a;
}

/// Candidate grouped minimizer read off the cluster partition.
inline std::vector<double> build_b_from_clusters(const ClusterResult& res, const MomentInstance& inst) {
  std::vector<double> b(inst.n(), 0.0);
  for (const auto& block : res.partition) {
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t i : block) {
      mass += inst.m[i];
      moment += inst.m[i] * inst.x[i];
    }
    const double centre = -moment / (mass * inst.t);
    double below = 0.0;  // mass of block members before i
    for (std::size_t i : block) {
      const double above = mass - below - inst.m[i];
      b[i] = centre + 0.5 * (above - below);
      below += inst.m[i];
    }
  }
  return b;
}

struct GapCheck {
  std::size_t index = 0;  // flat index k, comparing a_k and a_{k+1}
  double gap = 0.0;
  bool saturated = false;   // gap == 1 within tolerance
  bool same_block = false;  // f(k), f(k+1) in one partition block
  bool boundary = false;
  bool agree = false;
};

struct StructureReport {
  std::vector<GapCheck> gaps;
  bool boundary = false;  // merge (or near-merge) within the boundary band of t
  bool ok = true;         // every non-boundary gap agrees with the partition
};

inline StructureReport check_minimizer_structure(const VariationalSolution& sol,
                                                 const FlatInstance& flat,
                                                 const ClusterResult& res) {
  StructureReport report;
  const double band = kBoundaryBand * (1.0 + res.t);
  for (const auto& ev : res.events) {
    if (ev.time >= res.t - band) report.boundary = true;
  }
  if (res.next_collision && *res.next_collision <= res.t + band) report.boundary = true;

  const auto owner = res.block_of();
  for (std::size_t k = 0; k + 1 < sol.values.size(); ++k) {
    GapCheck g;
    g.index = k;
    g.gap = sol.values[k] - sol.values[k + 1];
    g.saturated = at_margin(g.gap, 1.0);
    g.same_block = owner[flat.f[k]] == owner[flat.f[k + 1]];
    g.boundary = !g.saturated && std::abs(g.gap - 1.0) <= kBoundaryBand;
    g.agree = g.saturated == g.same_block;
    if (!g.agree && !g.boundary && !report.boundary) report.ok = false;
    report.gaps.push_back(g);
  }
  return report;
}

}  // namespace lyap
