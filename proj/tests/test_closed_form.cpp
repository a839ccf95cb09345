#include <cmath>

#include <gtest/gtest.h>

#include "lyap/closed_form.hpp"
#include "test_util.hpp"

namespace lyap {
namespace {

double gamma3_of(const MomentInstance& inst) { return gamma3(inst, simulate_inertia(inst)); }

TEST(Gamma3, Examples) {
  EXPECT_NEAR(gamma3_of(validate_instance(1.0, {0.0, 0.5}, {1, 1})), -0.0625, 1e-15);
  EXPECT_NEAR(gamma3_of(validate_instance(1.0, {0.0, 2.0}, {1, 1})), -2.0, 1e-15);
  EXPECT_NEAR(gamma3_of(validate_instance(2.0, {0.0, 1.0, 2.0}, {1, 1, 1})), -0.75, 1e-15);
}

TEST(Corollaries, OnePoint) {
  EXPECT_DOUBLE_EQ(corollary_n1(1.0, 0.0, 2), 0.25);
  EXPECT_DOUBLE_EQ(corollary_n1(1.0, 0.0, 1), 0.0);
  EXPECT_DOUBLE_EQ(corollary_n1(1.0, 1.0, 3), -0.5);
}

TEST(Corollaries, TwoPoint) {
  EXPECT_DOUBLE_EQ(corollary_n2(1.0, 0.0, 0.5, 1, 1), -0.0625);
  EXPECT_DOUBLE_EQ(corollary_n2(1.0, 0.0, 2.0, 1, 1), -2.0);
  EXPECT_DOUBLE_EQ(corollary_n2_merged(1.0, 0.0, 1.0, 1, 1), -0.5);
  EXPECT_DOUBLE_EQ(corollary_n2_separated(1.0, 0.0, 1.0, 1, 1), -0.5);
}

TEST(Corollaries, BranchesMeetAtThreshold) {
  for (double t : {0.5, 1.0, 2.0, 3.7}) {
    for (int m1 = 1; m1 <= 5; ++m1) {
      for (int m2 = 1; m2 <= 5; ++m2) {
        const double x1 = -0.3;
        const double x2 = x1 + 0.5 * (m1 + m2) * t;
        const double merged = corollary_n2_merged(t, x1, x2, m1, m2);
        const double separated = corollary_n2_separated(t, x1, x2, m1, m2);
        EXPECT_NEAR(merged, separated, 1e-12 * (1.0 + std::abs(separated)));
      }
    }
  }
}

TEST(Corollaries, MatchReport) {
  for (double t : {0.5, 1.0, 2.0}) {
    for (double x : {-1.0, 0.0, 1.0}) {
      for (int m = 1; m <= 5; ++m) {
        const auto rep = gamma_report(validate_instance(t, {x}, {m}));
        const double want = corollary_n1(t, x, m);
        EXPECT_NEAR(rep.gamma3, want, 1e-12 * std::max(1.0, std::abs(want)));
        EXPECT_NEAR(rep.gamma1, want, 1e-12 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(RecursionIdentity, Examples) {
  const auto r1 = verify_recursion_identity(validate_instance(2.0, {0.0, 1.0, 2.0}, {1, 1, 1}));
  EXPECT_DOUBLE_EQ(r1.s0, 1.0);
  EXPECT_NEAR(r1.first_segment, -1.375, 1e-14);
  EXPECT_NEAR(r1.remainder, 0.625, 1e-14);
  EXPECT_NEAR(r1.lhs, -0.75, 1e-14);
  EXPECT_NEAR(r1.rhs, -0.75, 1e-14);

  const auto r2 = verify_recursion_identity(validate_instance(1.0, {0.0, 0.5}, {1, 1}));
  EXPECT_NEAR(r2.remainder, corollary_n1(0.5, 0.125, 2), 1e-14);
  EXPECT_NEAR(r2.lhs, -0.0625, 1e-14);
  EXPECT_NEAR(r2.rhs, -0.0625, 1e-14);
}

TEST(RecursionIdentity, HypothesisNotMet) {
  auto code = [](const MomentInstance& inst) {
    try {
      verify_recursion_identity(inst);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code(validate_instance(1.0, {0.0, 2.0}, {1, 1})), ErrorCode::HypothesisNotMet);
  EXPECT_EQ(code(validate_instance(1.0, {0.0}, {3})), ErrorCode::HypothesisNotMet);
}

TEST(RecursionIdentity, MergeAtTerminalTime) {
  const auto rep = verify_recursion_identity(validate_instance(1.0, {0.0, 1.0}, {1, 1}));
  EXPECT_EQ(rep.s0, 1.0);
  EXPECT_EQ(rep.remainder, 0.0);
  EXPECT_NEAR(rep.lhs, rep.rhs, 1e-12);
}

TEST(RecursionIdentity, HoldsOnRandomSingleClusterInstances) {
  const auto gen = testing::property_instances(41);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto inst = gen.sample_where(i, [](const MomentInstance& c) {
      return c.n() >= 2 && simulate_inertia(c).q_hat() == 1;
    });
    const auto rep = verify_recursion_identity(inst);
    EXPECT_LE(rep.abs_diff, 1e-9 * (1.0 + std::abs(rep.rhs))) << "instance " << i;
  }
}

TEST(GammaReport, Examples) {
  const auto r1 = gamma_report(validate_instance(1.0, {0.0, 0.5}, {1, 1}));
  EXPECT_NEAR(r1.gamma1, -0.0625, 1e-15);
  EXPECT_NEAR(r1.gamma2, -0.0625, 1e-15);
  EXPECT_NEAR(r1.gamma3, -0.0625, 1e-15);
  EXPECT_LE(r1.max_pairwise_dev, 1e-12);
  EXPECT_TRUE(r1.structure_ok);

  const auto r2 = gamma_report(validate_instance(1.0, {0.0}, {1}));
  EXPECT_EQ(r2.gamma1, 0.0);
  EXPECT_EQ(r2.gamma2, 0.0);
  EXPECT_EQ(r2.gamma3, 0.0);

  const auto r3 = gamma_report(validate_instance(1.0, {0.0, 2.0}, {1, 1}));
  EXPECT_NEAR(r3.gamma1, -2.0, 1e-15);
  EXPECT_NEAR(r3.gamma2, -2.0, 1e-15);
  EXPECT_NEAR(r3.gamma3, -2.0, 1e-15);
}

TEST(GammaReport, TripleEqualityOnRandomInstances) {
  const auto gen = testing::property_instances(42);
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto rep = gamma_report(gen(i));
    EXPECT_LE(rep.max_pairwise_dev, kTripleTolerance * (1.0 + std::abs(rep.gamma3))) << "instance " << i;
    EXPECT_TRUE(rep.structure_ok);
    EXPECT_TRUE(rep.consistent());
  }
}

TEST(Gamma3, AdditiveOverBlocks) {
  const auto gen = testing::property_instances(43);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto inst = gen.sample_where(i, [](const MomentInstance& c) { return simulate_inertia(c).q_hat() >= 2; });
    const auto res = simulate_inertia(inst);
    double sum = 0.0;
    for (const auto& block : res.partition) {
      const auto sub = restrict_instance(inst, block);
      const auto sub_res = simulate_inertia(sub);
      EXPECT_EQ(sub_res.q_hat(), 1u);
      sum += gamma3(sub, sub_res);
    }
    const double whole = gamma3(inst, res);
    EXPECT_NEAR(whole, sum, 1e-10 * std::max(1.0, std::abs(whole)));
  }
}

}  // namespace
}  // namespace lyap
