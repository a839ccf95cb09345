#pragma once

// Sticky point-mass dynamics ("inertia clusters") and the drift-corrected
// "optimal clusters" that end at the origin.
//
// Particle i starts at x_i with mass m_i and speed
//   phi_i = (m_{i+1} + ... + m_n)/2 - (m_1 + ... + m_{i-1})/2.
// Adjacent clusters stick on contact and keep the total momentum, so the
// configuration is determined by an event list of merges. Between events all
// trajectories are straight lines, which is why paths only carry one knot per
// event time.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lyap/error.hpp"
#include "lyap/instance.hpp"
#include "lyap/path.hpp"

namespace lyap {

/// Candidate collision times closer than this (scaled by 1 + t) merge together.
constexpr double kEventTolerance = 1e-12;

struct Cluster {
  std::size_t first = 0;  // zero-based member interval [first, last]
  std::size_t last = 0;
  int mass = 0;
  double momentum = 0.0;
  double position = 0.0;
  double speed = 0.0;
};

struct ClusterState {
  double time = 0.0;
  std::vector<Cluster> clusters;
};

struct MergeEvent {
  double time = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> merged;  // pre-merge member intervals
  double position = 0.0;
};

struct ClusterResult {
  double t = 0.0;
  std::vector<std::vector<std::size_t>> partition;  // zero-based, ordered blocks
  std::vector<int> cluster_masses;
  std::vector<double> terminal_positions;
  std::vector<double> drifts;
  std::vector<MergeEvent> events;
  std::vector<PiecewiseLinearPath> inertia_paths;
  std::vector<PiecewiseLinearPath> optimal_paths;
  std::vector<ClusterState> history;  // state at s = 0 and right after each event time
  std::optional<double> next_collision;  // first collision time beyond t, if any

  std::size_t q_hat() const noexcept { return partition.size(); }

  /// Block index of every location.
  std::vector<std::size_t> block_of() const {
    std::size_t n = 0;
    for (const auto& block : partition) n += block.size();
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t j = 0; j < partition.size(); ++j) {
      for (std::size_t i : partition[j]) owner[i] = j;
    }
    return owner;
  }
};

struct FirstMerge {
  double s0 = 0.0;
  std::vector<double> xi_at_s0;
  std::vector<double> x_prime;
  std::vector<int> m_prime;
};

inline std::vector<double> initial_speeds(std::span<const int> m) {
  const std::size_t n = m.size();
  std::vector<double> phi(n, 0.0);
  long long total = 0;
  for (int mi : m) total += mi;
  long long before = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long long after = total - before - m[i];
    phi[i] = 0.5 * static_cast<double>(after - before);
    before += m[i];
  }
  return phi;
}

namespace detail {

inline double event_tolerance(double t) { return kEventTolerance * (1.0 + t); }

// Earliest time-to-contact over adjacent approaching pairs, or +inf.
inline double min_contact_delay(const std::vector<Cluster>& clusters) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < clusters.size(); ++j) {
    const double closing = clusters[j].speed - clusters[j + 1].speed;
    if (closing > 0.0) {
      best = std::min(best, (clusters[j + 1].position - clusters[j].position) / closing);
    }
  }
  return best;
}

}  // namespace detail

inline ClusterResult simulate_inertia(const MomentInstance& inst) {
  const std::size_t n = inst.n();
  const double t = inst.t;
  const double tol = detail::event_tolerance(t);
  const auto phi = initial_speeds(inst.m);

  std::vector<Cluster> clusters(n);
  for (std::size_t i = 0; i < n; ++i) {
    clusters[i] = Cluster{i, i, inst.m[i], inst.m[i] * phi[i], inst.x[i], phi[i]};
  }

  ClusterResult res;
  res.t = t;
  std::vector<double> knots{0.0};
  std::vector<std::vector<double>> zeta(n);
  auto record_knot = [&]() {
    for (const auto& c : clusters) {
      for (std::size_t i = c.first; i <= c.last; ++i) zeta[i].push_back(c.position);
    }
  };
  record_knot();
  res.history.push_back(ClusterState{0.0, clusters});

  double s = 0.0;
  while (clusters.size() > 1 && s < t) {
    std::vector<double> delay(clusters.size() - 1, std::numeric_limits<double>::infinity());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < clusters.size(); ++j) {
      const double closing = clusters[j].speed - clusters[j + 1].speed;
      if (closing > 0.0) {
        delay[j] = (clusters[j + 1].position - clusters[j].position) / closing;
        best = std::min(best, delay[j]);
      }
    }
    if (!(s + best <= t + tol)) break;

    double event_time = s + best;
    if (event_time >= t - tol) event_time = t;
    const double dt = event_time - s;
    for (auto& c : clusters) c.position += c.speed * dt;

    // Chains of simultaneously colliding pairs collapse into one cluster each.
    std::vector<Cluster> next;
    next.reserve(clusters.size());
    std::size_t j = 0;
    while (j < clusters.size()) {
      std::size_t k = j;
      while (k + 1 < clusters.size() && delay[k] <= best + tol) ++k;
      if (k == j) {
        next.push_back(clusters[j]);
      } else {
        Cluster merged{clusters[j].first, clusters[k].last, 0, 0.0, 0.0, 0.0};
        MergeEvent ev;
        ev.time = event_time;
        double weighted_position = 0.0;
        for (std::size_t r = j; r <= k; ++r) {
          merged.mass += clusters[r].mass;
          merged.momentum += clusters[r].momentum;
          weighted_position += clusters[r].mass * clusters[r].position;
          ev.merged.emplace_back(clusters[r].first, clusters[r].last);
        }
        merged.speed = merged.momentum / merged.mass;
        merged.position = weighted_position / merged.mass;
        ev.position = merged.position;
        res.events.push_back(std::move(ev));
        next.push_back(merged);
      }
      j = k + 1;
    }
    clusters = std::move(next);
    s = event_time;
    knots.push_back(s);
    record_knot();
    res.history.push_back(ClusterState{s, clusters});
  }

  if (s < t) {
    for (auto& c : clusters) c.position += c.speed * (t - s);
    knots.push_back(t);
    record_knot();
  }
  const double pending = detail::min_contact_delay(clusters);
  if (std::isfinite(pending)) res.next_collision = t + pending;

  for (const auto& c : clusters) {
    std::vector<std::size_t> block;
    for (std::size_t i = c.first; i <= c.last; ++i) block.push_back(i);
    res.partition.push_back(std::move(block));
    res.cluster_masses.push_back(c.mass);
    res.terminal_positions.push_back(c.position);
    res.drifts.push_back(c.position / t);
  }

  const auto owner = res.block_of();
  res.inertia_paths.resize(n);
  res.optimal_paths.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double drift = res.drifts[owner[i]];
    std::vector<double> xi(knots.size());
    for (std::size_t q = 0; q < knots.size(); ++q) xi[q] = zeta[i][q] - drift * knots[q];
    // The drift is chosen so the optimal clusters end exactly at the origin.
    xi.back() = zeta[i].back() - res.terminal_positions[owner[i]];
    res.inertia_paths[i] = PiecewiseLinearPath{knots, zeta[i]};
    res.optimal_paths[i] = PiecewiseLinearPath{knots, std::move(xi)};
  }
  return res;
}

/// First merge of the optimal clusters and the collapsed configuration at that time.
inline FirstMerge first_optimal_merge(const ClusterResult& res, const MomentInstance& inst) {
  if (res.events.empty()) {
    throw Error(ErrorCode::NoMerge, "no merge happens in [0, t]");
  }
  FirstMerge out;
  out.s0 = res.events.front().time;
  const std::size_t n = inst.n();
  out.xi_at_s0.resize(n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.xi_at_s0[i] = evaluate_path(res.optimal_paths[i], out.s0);
    scale = std::max(scale, std::abs(out.xi_at_s0[i]));
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.xi_at_s0[a] < out.xi_at_s0[b];
  });
  const double tol = kEventTolerance * (1.0 + scale) * 16.0;
  for (std::size_t r = 0; r < n;) {
    std::size_t q = r;
    double weighted = 0.0;
    int mass = 0;
    while (q < n && out.xi_at_s0[order[q]] - out.xi_at_s0[order[r]] <= tol) {
      weighted += inst.m[order[q]] * out.xi_at_s0[order[q]];
      mass += inst.m[order[q]];
      ++q;
    }
    out.x_prime.push_back(weighted / mass);
    out.m_prime.push_back(mass);
    r = q;
  }
  return out;
}

}  // namespace lyap
