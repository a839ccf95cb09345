#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "lyap/instance.hpp"

namespace lyap {

/// Ranges of the randomized instances used by the verification suites.
struct GeneratorRanges {
  double t_min = 0.1;
  double t_max = 5.0;
  int n_max = 6;
  int m_max = 5;
  double x_lo = -3.0;
  double x_hi = 3.0;
  double min_gap = 1e-3;
};

/// Deterministic instance stream: instance `index` of stream `stream` depends
/// only on (seed, stream, index), so suites can be evaluated in any order.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed, std::uint64_t stream = 0,
                             GeneratorRanges ranges = {})
      : seed_(seed), stream_(stream), ranges_(ranges) {}

  MomentInstance operator()(std::uint64_t index, std::uint32_t attempt = 0) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), attempt};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> time(ranges_.t_min, ranges_.t_max);
    std::uniform_int_distribution<int> count(1, ranges_.n_max);
    std::uniform_int_distribution<int> mult(1, ranges_.m_max);
    std::uniform_real_distribution<double> loc(ranges_.x_lo, ranges_.x_hi);

    const double t = time(rng);
    const int n = count(rng);
    std::vector<int> m(static_cast<std::size_t>(n));
    for (auto& mi : m) mi = mult(rng);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (;;) {
      for (auto& xi : x) xi = loc(rng);
      std::sort(x.begin(), x.end());
      bool spaced = true;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) spaced = spaced && x[i + 1] - x[i] >= ranges_.min_gap;
      if (spaced) break;
    }
    return validate_instance(t, std::move(x), std::move(m));
  }

  /// First instance of the (index, attempt) sequence accepted by `keep`.
  template <typename Pred>
  MomentInstance sample_where(std::uint64_t index, Pred keep) const {
    for (std::uint32_t attempt = 0;; ++attempt) {
      auto inst = (*this)(index, attempt);
      if (keep(inst)) return inst;
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  GeneratorRanges ranges_;
};

}  // namespace lyap
