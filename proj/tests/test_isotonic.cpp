#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "lyap/isotonic.hpp"
#include "test_util.hpp"

namespace lyap {
namespace {

std::vector<double> fit(std::vector<double> z, std::vector<double> w) {
  return isotonic_nonincreasing<double>(z, w);
}

// Reference fit: enumerate every split into consecutive blocks, level each block
// at its weighted mean and keep the best non-increasing candidate.
std::vector<double> enumerate_fit(const std::vector<double>& z, const std::vector<double>& w) {
  const std::size_t n = z.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_c;
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<double> c(n);
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == n || (cuts >> i & 1u)) {
        double num = 0, den = 0;
        for (std::size_t k = start; k <= i; ++k) {
          num += w[k] * z[k];
          den += w[k];
        }
        for (std::size_t k = start; k <= i; ++k) c[k] = num / den;
        start = i + 1;
      }
    }
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < n; ++i) monotone = monotone && c[i] >= c[i + 1];
    if (!monotone) continue;
    double obj = 0;
    for (std::size_t i = 0; i < n; ++i) obj += w[i] * (c[i] - z[i]) * (c[i] - z[i]);
    if (obj < best) {
      best = obj;
      best_c = c;
    }
  }
  return best_c;
}

TEST(Isotonic, Examples) {
  EXPECT_EQ(fit({1, 1.5}, {1, 1}), (std::vector<double>{1.25, 1.25}));
  EXPECT_EQ(fit({3, 2, 1}, {1, 1, 1}), (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(fit({0, 0.5}, {1, 1}), (std::vector<double>{0.25, 0.25}));
  EXPECT_TRUE(fit({}, {}).empty());
}

TEST(Isotonic, Errors) {
  try {
    fit({1, 2}, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  EXPECT_THROW(fit({1, 2}, {1, 0}), Error);
}

TEST(Isotonic, MatchesEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 9);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    const auto z = testing::random_vector(rng, n, -2, 2);
    const auto w = testing::random_vector(rng, n, 0.1, 5);
    const auto got = fit(z, w);
    const auto want = enumerate_fit(z, w);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

// KKT for the pooled fit: inside each block the prefix sums of w_i (c_i - z_i)
// are the multipliers of the constraints c_i >= c_{i+1}. They must be >= 0 and
// vanish at the block end; levels strictly decrease between blocks, so the
// constraints across block ends are slack with zero multiplier.
TEST(Isotonic, KktConditions) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    const auto z = testing::random_vector(rng, n, -5, 5);
    const auto w = testing::random_vector(rng, n, 0.1, 3);
    const auto blocks = isotonic_blocks<double>(z, w);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b > 0) {
        EXPECT_GT(blocks[b - 1].level, blocks[b].level);
      }
      double prefix = 0.0;
      for (std::size_t i = blocks[b].first; i <= blocks[b].last; ++i) {
        prefix += w[i] * (blocks[b].level - z[i]);
        if (i < blocks[b].last) {
          EXPECT_GE(prefix, -1e-10);
        }
      }
      EXPECT_NEAR(prefix, 0.0, 1e-10);
    }
  }
}

}  // namespace
}  // namespace lyap
