#pragma once

// Randomized property suites behind `lyap verify`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "lyap/closed_form.hpp"
#include "lyap/clusters.hpp"
#include "lyap/generator.hpp"
#include "lyap/instance.hpp"
#include "lyap/quadrature.hpp"
#include "lyap/variational.hpp"

namespace lyap {

struct PhysicsReport {
  double max_momentum = 0.0;        // |sum mass * speed| over all recorded states
  bool mass_conserved = true;       // sum of masses == nu in every state
  bool ordered = true;              // positions strictly increasing in every state
  double max_terminal_xi = 0.0;     // max_i |xi_i(t)|
  double max_com_error = 0.0;       // block centre-of-mass deviation from a line of slope psi_k
  double min_separation = std::numeric_limits<double>::infinity();  // strict margin between blocks
};

inline PhysicsReport check_physics(const MomentInstance& inst, const ClusterResult& res) {
  PhysicsReport rep;
  const int nu = inst.nu();
  for (const auto& state : res.history) {
    double momentum = 0.0;
    int mass = 0;
    for (std::size_t j = 0; j < state.clusters.size(); ++j) {
      const auto& c = state.clusters[j];
      momentum += c.mass * c.speed;
      mass += c.mass;
      if (j > 0 && !(state.clusters[j - 1].position < c.position)) rep.ordered = false;
    }
    rep.max_momentum = std::max(rep.max_momentum, std::abs(momentum));
    rep.mass_conserved = rep.mass_conserved && mass == nu;
  }
  for (const auto& path : res.optimal_paths) {
    rep.max_terminal_xi = std::max(rep.max_terminal_xi, std::abs(path.values.back()));
  }

  const double t = inst.t;
  std::vector<double> mean_x;
  std::vector<double> block_mass;
  int before = 0;
  for (const auto& block : res.partition) {
    double mass = 0.0;
    for (std::size_t i : block) mass += inst.m[i];
    const double psi = 0.5 * ((nu - before - mass) - before);
    auto centre = [&](double s) {
      double acc = 0.0;
      for (std::size_t i : block) acc += inst.m[i] * evaluate_path(res.inertia_paths[i], s);
      return acc / mass;
    };
    const double c0 = centre(0.0);
    for (double s : {0.5 * t, t}) {
      rep.max_com_error = std::max(rep.max_com_error, std::abs(centre(s) - c0 - psi * s));
    }
    mean_x.push_back(c0);
    block_mass.push_back(mass);
    before += static_cast<int>(mass);
  }
  for (std::size_t k = 0; k + 1 < mean_x.size(); ++k) {
    const double margin = (mean_x[k + 1] - mean_x[k]) - 0.5 * (block_mass[k] + block_mass[k + 1]) * t;
    rep.min_separation = std::min(rep.min_separation, margin);
  }
  return rep;
}

inline bool physics_ok(const PhysicsReport& rep) {
  return rep.max_momentum <= 1e-12 && rep.mass_conserved && rep.ordered &&
         rep.max_terminal_xi <= 1e-12 && rep.max_com_error <= 1e-10 && rep.min_separation > 0.0;
}

/// Thread count from LYAP_THREADS (default: hardware concurrency).
inline unsigned configured_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LYAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(v));
  }
  return threads;
}

/// Evaluates fn(0..count-1) on up to `threads` workers; results keep index order.
template <typename Fn>
auto parallel_map(std::uint64_t count, unsigned threads, Fn fn) {
  using Result = decltype(fn(std::uint64_t{0}));
  std::vector<Result> out(count);
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < count; i += workers) out[i] = fn(i);
    });
  }
  pool.clear();
  return out;
}

struct SuiteSummary {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"triple",  "oracle",  "structure",
                                              "recursion", "physics", "quadrature"};
  return names;
}

/// One randomized check; `index` selects the instance within the suite's stream.
inline bool run_check(const std::string& suite, std::uint64_t seed, std::uint64_t index) {
  if (suite == "triple") {
    const auto rep = gamma_report(InstanceGenerator(seed, 1)(index));
    return rep.max_pairwise_dev <= kTripleTolerance * (1.0 + std::abs(rep.gamma3));
  }
  if (suite == "oracle") {
    const auto inst = InstanceGenerator(seed, 2).sample_where(
        index, [](const MomentInstance& c) { return c.nu() <= 10; });
    const auto flat = flatten(inst);
    const auto pava1 = solve_gamma1(flat, inst.t);
    const auto brute1 = bruteforce_qp_oracle(chain_problem_gamma1(flat, inst.t));
    const auto pava2 = solve_gamma2(inst);
    const auto brute2 = bruteforce_qp_oracle(chain_problem_gamma2(inst));
    auto close = [](const VariationalSolution& p, const VariationalSolution& q) {
      if (std::abs(p.objective - q.objective) > 1e-10) return false;
      for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (std::abs(p.values[i] - q.values[i]) > 1e-8) return false;
      }
      return true;
    };
    return close(pava1, brute1) && close(pava2, brute2);
  }
  if (suite == "structure") {
    const auto inst = InstanceGenerator(seed, 1)(index);
    const auto flat = flatten(inst);
    return check_minimizer_structure(solve_gamma1(flat, inst.t), flat, simulate_inertia(inst)).ok;
  }
  if (suite == "recursion") {
    const auto inst = InstanceGenerator(seed, 3).sample_where(index, [](const MomentInstance& c) {
      return c.n() >= 2 && simulate_inertia(c).q_hat() == 1;
    });
    const auto rep = verify_recursion_identity(inst);
    return rep.abs_diff <= 1e-9 * (1.0 + std::abs(rep.rhs));
  }
  if (suite == "physics") {
    const auto inst = InstanceGenerator(seed, 1)(index);
    return physics_ok(check_physics(inst, simulate_inertia(inst)));
  }
  if (suite == "quadrature") {
    GeneratorRanges ranges;
    ranges.n_max = 1;
    ranges.m_max = 2;
    ranges.x_lo = -1.0;
    ranges.x_hi = 1.0;
    const auto inst = InstanceGenerator(seed, 4, ranges)(index);
    const double T = 4.0;
    auto cfg = default_contour(inst, T, 8.0, inst.nu() == 1 ? 400 : 200);
    const auto moment = contour_moment_detailed(T, inst, cfg);
    const double floor = std::pow(heat_kernel(T * inst.t, T * inst.x[0]), inst.nu());
    const double bound = upper_bound_value(T, flatten(inst), inst.t, cfg.offsets);
    bool ok = moment.value <= bound && std::abs(moment.imag) <= 1e-8 * std::abs(moment.value);
    if (inst.nu() == 1) {
      ok = ok && std::abs(moment.value - floor) <= 1e-8 * floor;
    } else {
      ok = ok && moment.value >= floor;
    }
    return ok;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
}

inline SuiteSummary run_suite(const std::string& suite, std::uint64_t seed, std::uint64_t count,
                              unsigned threads) {
  SuiteSummary summary{suite, 0, 0};
  const auto results = parallel_map(count, threads, [&](std::uint64_t i) -> char {
    try {
      return run_check(suite, seed, i) ? 1 : 0;
    } catch (const Error&) {
      return 0;
    }
  });
  for (char ok : results) (ok ? summary.passed : summary.failed) += 1;
  return summary;
}

}  // namespace lyap
