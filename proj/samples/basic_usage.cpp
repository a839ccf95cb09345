// Computes the three expressions for one instance and prints the cluster tree.

#include <cstdio>

#include "lyap/lyap.hpp"

int main() {
  const auto inst = lyap::validate_instance(1.0, {0.0, 0.3, 0.6, 3.0, 3.5}, {1, 1, 1, 1, 1});

  const auto report = lyap::gamma_report(inst);
  std::printf("gamma1 = %.12f\ngamma2 = %.12f\ngamma3 = %.12f\n", report.gamma1, report.gamma2,
              report.gamma3);

  const auto clusters = lyap::simulate_inertia(inst);
  for (const auto& ev : clusters.events) {
    std::printf("merge at s = %.6f, position %.6f, %zu clusters\n", ev.time, ev.position,
                ev.merged.size());
  }
  for (std::size_t j = 0; j < clusters.partition.size(); ++j) {
    std::printf("block %zu:", j + 1);
    for (std::size_t i : clusters.partition[j]) std::printf(" %zu", i + 1);
    std::printf("  (drift %.6f)\n", clusters.drifts[j]);
  }
  return 0;
}
