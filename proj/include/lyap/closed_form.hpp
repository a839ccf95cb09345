#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lyap/clusters.hpp"
#include "lyap/error.hpp"
#include "lyap/instance.hpp"
#include "lyap/variational.hpp"

namespace lyap {

/// Default acceptance threshold on max |gamma_i - gamma_j| / (1 + |gamma3|).
constexpr double kTripleTolerance = 1e-8;

struct GammaReport {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double max_pairwise_dev = 0.0;
  std::vector<std::vector<std::size_t>> partition;
  std::vector<double> minimizer_a;
  std::vector<double> minimizer_b;
  bool structure_ok = true;
  bool boundary = false;

  bool consistent(double tolerance = kTripleTolerance) const {
    return max_pairwise_dev <= tolerance * (1.0 + std::abs(gamma3)) && structure_ok;
  }
};

/// Sub-instance made of the locations in `members` (ascending), same t.
inline MomentInstance restrict_instance(const MomentInstance& inst,
                                        std::span<const std::size_t> members) {
  MomentInstance sub;
  sub.t = inst.t;
  for (std::size_t i : members) {
    sub.x.push_back(inst.x[i]);
    sub.m.push_back(inst.m[i]);
  }
  return sub;
}

/// Cost of one block: (M^3 - M)t/24 - sum_{k<l} m_k m_l |x_k - x_l| / 2 - (sum m_k x_k)^2 / (2tM).
inline double block_cost(const MomentInstance& inst, std::span<const std::size_t> block) {
  const double t = inst.t;
  double mass = 0.0;
  double moment = 0.0;
  double pairs = 0.0;
  for (std::size_t a = 0; a < block.size(); ++a) {
    const std::size_t k = block[a];
    mass += inst.m[k];
    moment += inst.m[k] * inst.x[k];
    for (std::size_t b = a + 1; b < block.size(); ++b) {
      const std::size_t l = block[b];
      pairs += 0.5 * inst.m[k] * inst.m[l] * std::abs(inst.x[k] - inst.x[l]);
    }
  }
  return (mass * mass * mass - mass) * t / 24.0 - pairs - moment * moment / (2.0 * t * mass);
}

inline double gamma3(const MomentInstance& inst, const ClusterResult& res) {
  double total = 0.0;
  for (const auto& block : res.partition) total += block_cost(inst, block);
  return total;
}

inline double corollary_n1(double t, double x1, int m1) {
  const double m = m1;
  return (m * m * m - m) * t / 24.0 - m * x1 * x1 / (2.0 * t);
}

/// Two-point formula, merged branch.
inline double corollary_n2_merged(double t, double x1, double x2, int m1, int m2) {
  const double M = m1 + m2;
  const double moment = m1 * x1 + m2 * x2;
  return (M * M * M - M) * t / 24.0 - 0.5 * m1 * m2 * (x2 - x1) - moment * moment / (2.0 * M * t);
}

/// Two-point formula, separated branch.
inline double corollary_n2_separated(double t, double x1, double x2, int m1, int m2) {
  return corollary_n1(t, x1, m1) + corollary_n1(t, x2, m2);
}

inline double corollary_n2(double t, double x1, double x2, int m1, int m2) {
  if ((x2 - x1) / t <= 0.5 * (m1 + m2)) return corollary_n2_merged(t, x1, x2, m1, m2);
  return corollary_n2_separated(t, x1, x2, m1, m2);
}

struct RecursionReport {
  double s0 = 0.0;
  double first_segment = 0.0;  // sum over k of the [0, s0] costs
  double remainder = 0.0;      // gamma3 on (t - s0, x', m')
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
};

/// Splits gamma3 at the first merge time of the optimal clusters and recomputes
/// the remainder from a fresh simulation of the merged configuration.
inline RecursionReport verify_recursion_identity(const MomentInstance& inst) {
  if (inst.n() < 2) {
    throw Error(ErrorCode::HypothesisNotMet, "recursion identity needs n >= 2");
  }
  const auto res = simulate_inertia(inst);
  if (res.q_hat() != 1) {
    throw Error(ErrorCode::HypothesisNotMet, "recursion identity needs a single final cluster");
  }
  const auto merge = first_optimal_merge(res, inst);

  RecursionReport rep;
  rep.s0 = merge.s0;
  for (std::size_t k = 0; k < inst.n(); ++k) {
    const double m = inst.m[k];
    const double shift = inst.x[k] - merge.xi_at_s0[k];
    rep.first_segment += (m * m * m - m) * merge.s0 / 24.0 - m * shift * shift / (2.0 * merge.s0);
  }
  const double remaining = inst.t - merge.s0;
  if (remaining > detail::event_tolerance(inst.t)) {
    const auto next = validate_instance(remaining, merge.x_prime, merge.m_prime);
    rep.remainder = gamma3(next, simulate_inertia(next));
  }
  rep.lhs = rep.first_segment + rep.remainder;
  rep.rhs = gamma3(inst, res);
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  return rep;
}

inline GammaReport gamma_report(const MomentInstance& inst) {
  const auto flat = flatten(inst);
  const auto sol1 = solve_gamma1(flat, inst.t);
  const auto sol2 = solve_gamma2(inst);
  const auto res = simulate_inertia(inst);
  const auto structure = check_minimizer_structure(sol1, flat, res);

  GammaReport rep;
  rep.gamma1 = sol1.objective;
  rep.gamma2 = sol2.objective;
  rep.gamma3 = gamma3(inst, res);
  rep.max_pairwise_dev = std::max({std::abs(rep.gamma1 - rep.gamma2),
                                   std::abs(rep.gamma1 - rep.gamma3),
                                   std::abs(rep.gamma2 - rep.gamma3)});
  rep.partition = res.partition;
  rep.minimizer_a = sol1.values;
  rep.minimizer_b = sol2.values;
  rep.structure_ok = structure.ok;
  rep.boundary = structure.boundary;
  return rep;
}

}  // namespace lyap
